#pragma once
// Locale-independent number formatting helpers.
//
// std::to_chars emits the shortest decimal that round-trips the double
// exactly, which keeps file output deterministic across platforms.

#include <charconv>
#include <string>

namespace traceinfer {

inline void append_double(std::string& out, double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  out.append(buf, ptr);
}

inline std::string double_to_string(double x) {
  std::string s;
  append_double(s, x);
  return s;
}

}  // namespace traceinfer

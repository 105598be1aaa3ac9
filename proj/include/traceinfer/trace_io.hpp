#pragma once
// Trace file format: line-delimited text, lossless for timestamps.
//
//   file    := header trace{count}
//   header  := "traceset 1" LF
//              "lambda " DOUBLE LF
//              "p " DOUBLE LF
//              "n " INT LF
//              ["graph " LABEL LF]          (optional label, no spaces)
//   count   := "traces " INT LF
//   trace   := INT " " DOUBLE (" " INT " " DOUBLE)* LF
//
// Each trace line alternates node and timestamp tokens; the first pair is
// the source at time 0. Doubles are written as shortest round-trip decimals
// (std::to_chars), so save followed by load reproduces every timestamp
// bit-for-bit. Malformed input is rejected with its 1-based line number.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include "traceinfer/errors.hpp"
#include "traceinfer/format.hpp"
#include "traceinfer/trace.hpp"

namespace traceinfer {

namespace detail {

inline bool parse_double_token(const std::string& s, std::size_t& pos, double& out) {
  while (pos < s.size() && s[pos] == ' ') ++pos;
  const char* begin = s.data() + pos;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr == begin) return false;
  pos = static_cast<std::size_t>(ptr - s.data());
  return true;
}

}  // namespace detail

inline void save(const TraceSet& ts, std::ostream& os) {
  validate(ts);
  std::string buf;
  buf += "traceset 1\nlambda ";
  append_double(buf, ts.params.lambda);
  buf += "\np ";
  append_double(buf, ts.params.p);
  buf += "\nn " + std::to_string(ts.n) + "\n";
  if (!ts.graph_id.empty()) {
    if (ts.graph_id.find_first_of(" \n") != std::string::npos)
      throw std::invalid_argument("graph_id must not contain spaces or newlines");
    buf += "graph " + ts.graph_id + "\n";
  }
  buf += "traces " + std::to_string(ts.traces.size()) + "\n";
  os << buf;
  for (const Trace& t : ts.traces) {
    buf.clear();
    bool first = true;
    for (const auto& [node, time] : t.events) {
      if (!first) buf += ' ';
      first = false;
      buf += std::to_string(node);
      buf += ' ';
      append_double(buf, time);
    }
    buf += '\n';
    os << buf;
  }
  if (!os) throw std::runtime_error("trace write failed");
}

inline void save(const TraceSet& ts, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  save(ts, os);
}

inline TraceSet load(std::istream& is) {
  TraceSet ts;
  std::string line;
  long lineno = 0;
  auto next_line = [&](const char* what) {
    if (!std::getline(is, line)) throw ParseError(std::string("missing ") + what, lineno + 1);
    ++lineno;
  };
  next_line("'traceset 1' header");
  if (line != "traceset 1")
    throw ParseError("expected 'traceset 1' header, got '" + line + "'", lineno);

  auto expect_prefix = [&](const std::string& prefix) -> std::size_t {
    if (line.rfind(prefix, 0) != 0)
      throw ParseError("expected '" + prefix + "<value>'", lineno);
    return prefix.size();
  };

  next_line("lambda field");
  {
    std::size_t pos = expect_prefix("lambda ");
    if (!detail::parse_double_token(line, pos, ts.params.lambda) || pos != line.size())
      throw ParseError("malformed lambda", lineno);
    if (!(ts.params.lambda > 0.0) || !std::isfinite(ts.params.lambda))
      throw ParseError("lambda must be a positive finite number", lineno);
  }
  next_line("p field");
  {
    std::size_t pos = expect_prefix("p ");
    if (!detail::parse_double_token(line, pos, ts.params.p) || pos != line.size())
      throw ParseError("malformed p", lineno);
    if (!(ts.params.p > 0.0) || ts.params.p > 1.0)
      throw ParseError("p must be in (0, 1]", lineno);
  }
  next_line("n field");
  long long n = 0;
  {
    std::size_t pos = expect_prefix("n ");
    const char* begin = line.data() + pos;
    auto [ptr, ec] = std::from_chars(begin, line.data() + line.size(), n);
    if (ec != std::errc{} || ptr != line.data() + line.size() || n < 1)
      throw ParseError("malformed node count", lineno);
    ts.n = static_cast<int>(n);
  }
  next_line("traces field");
  if (line.rfind("graph ", 0) == 0) {
    ts.graph_id = line.substr(6);
    if (ts.graph_id.empty() || ts.graph_id.find(' ') != std::string::npos)
      throw ParseError("malformed graph label", lineno);
    next_line("traces field");
  }
  long long count = 0;
  {
    std::size_t pos = expect_prefix("traces ");
    const char* begin = line.data() + pos;
    auto [ptr, ec] = std::from_chars(begin, line.data() + line.size(), count);
    if (ec != std::errc{} || ptr != line.data() + line.size() || count < 0)
      throw ParseError("malformed trace count", lineno);
  }

  ts.traces.reserve(count);
  std::vector<char> seen(ts.n, 0);
  for (long long i = 0; i < count; ++i) {
    next_line("trace line");
    Trace t;
    std::size_t pos = 0;
    std::fill(seen.begin(), seen.end(), 0);
    double prev = -1.0;
    while (pos < line.size()) {
      while (pos < line.size() && line[pos] == ' ') ++pos;
      if (pos == line.size()) break;
      long long node;
      {
        const char* begin = line.data() + pos;
        auto [ptr, ec] = std::from_chars(begin, line.data() + line.size(), node);
        if (ec != std::errc{} || ptr == begin) throw ParseError("malformed node id", lineno);
        pos = static_cast<std::size_t>(ptr - line.data());
      }
      if (node < 0 || node >= ts.n) throw ParseError("node id out of range", lineno);
      double time;
      if (!detail::parse_double_token(line, pos, time))
        throw ParseError("missing timestamp after node " + std::to_string(node), lineno);
      if (!std::isfinite(time)) throw ParseError("timestamp not finite", lineno);
      if (t.events.empty() && time != 0.0)
        throw ParseError("first event must be at time 0", lineno);
      if (!(time > prev))
        throw ParseError("timestamps must be strictly increasing", lineno);
      if (seen[node])
        throw ParseError("node repeats in trace: " + std::to_string(node), lineno);
      seen[node] = 1;
      prev = time;
      t.events.push_back({static_cast<int>(node), time});
    }
    if (t.events.empty()) throw ParseError("empty trace line", lineno);
    ts.traces.push_back(std::move(t));
  }
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty()) throw ParseError("unexpected content after last trace", lineno);
    if (is.peek() != std::char_traits<char>::eof())
      throw ParseError("unexpected blank line", lineno);
  }
  return ts;
}

inline TraceSet load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return load(is);
}

inline std::string save_to_string(const TraceSet& ts) {
  std::ostringstream os;
  save(ts, os);
  return os.str();
}

inline TraceSet load_from_string(const std::string& text) {
  std::istringstream is(text);
  return load(is);
}

}  // namespace traceinfer

#pragma once
// Error types shared across the library.
//
// std::invalid_argument signals bad parameters or malformed in-memory data;
// ParseError carries the 1-based line number of a rejected input file.

#include <stdexcept>
#include <string>

namespace traceinfer {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, long line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  long line() const { return line_; }

 private:
  long line_;
};

}  // namespace traceinfer

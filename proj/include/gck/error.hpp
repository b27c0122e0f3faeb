#pragma once

#include <stdexcept>
#include <string>

namespace gck {

/// Raised when a graph violates a structural invariant (loop edge, bad label, ...).
class InvalidGraph : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by all text readers. Line and column are 1-based; 0 means unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    if (line == 0) return what;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
  }
  int line_;
  int column_;
};

/// Grading or arity mismatch between operands of a graph operation.
class GradingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace gck

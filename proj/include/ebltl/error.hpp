#pragma once

#include <stdexcept>
#include <string>

namespace ebltl {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed machine, formula, or manifest text. Carries a 1-based position.
class ParseError : public Error {
 public:
  ParseError(std::string message, int line, int column)
      : Error(format(message, line, column)),
        message_(std::move(message)),
        line_(line),
        column_(column) {}

  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& m, int line, int column) {
    if (line <= 0) return m;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + m;
  }

  std::string message_;
  int line_;
  int column_;
};

/// Well-formed text that violates a static rule: unknown names, type
/// mismatches, unbounded integers, duplicate declarations.
class TypeError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A configured exploration or enumeration budget was exhausted.
class LimitError : public Error {
 public:
  using Error::Error;
};

/// Runtime evaluation failure (division by zero, value outside a declared
/// domain).
class EvalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ebltl

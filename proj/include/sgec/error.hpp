#pragma once

#include <stdexcept>
#include <string>

namespace sgec {

enum class ErrorKind { InvalidInput, Numeric, Parse, Io };

/// Base for every error raised by the library. The kind maps onto the CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(ErrorKind::InvalidInput, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

/// Raised by the trace-ratio solver when every candidate has a vanishing denominator.
class DegenerateProblem : public NumericError {
 public:
  explicit DegenerateProblem(const std::string& what) : NumericError(what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

inline int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::Parse:
      return 1;
    case ErrorKind::Numeric:
      return 2;
    case ErrorKind::Io:
      return 3;
  }
  return 1;
}

}  // namespace sgec

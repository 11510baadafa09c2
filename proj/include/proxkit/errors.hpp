#pragma once

#include <stdexcept>
#include <string>

namespace proxkit {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar or matrix argument violated a precondition (non-finite value,
/// non-positive penalty parameter, and so on).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Matrix dimensions do not match the operation's requirements.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A problem instance is too large for an exhaustive oracle.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// An iterative factorization did not converge within its sweep budget.
/// Carries the worst remaining normalized off-diagonal residual.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Malformed textual input. Positions are 1-based; column 0 means the
/// error concerns the whole line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A stream or file could not be read from or written to.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace proxkit

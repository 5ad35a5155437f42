#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zexp {

// Root of the library's exception hierarchy. Everything thrown on purpose
// derives from this, so callers can catch one type at the boundary.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed decimal text. Carries the byte offset of the first offending
// character so diagnostics can point at it.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Structured failure of a numeric routine: bad argument, divergent integral
// index, division by zero, estimator breakdown.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Cholesky pivot failure. pivot_index() names the first row whose pivot was
// not strictly positive.
class NotPositiveDefiniteError : public Error {
 public:
  NotPositiveDefiniteError(const std::string& what, std::size_t pivot)
      : Error(what), pivot_(pivot) {}
  std::size_t pivot_index() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

// The perturbation solve detected a numerically dependent basis (the
// restricted pencil lost positive definiteness).
class DegenerateBasisError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. line() is 1-based.
class FileFormatError : public Error {
 public:
  FileFormatError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace zexp

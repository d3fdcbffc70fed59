#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vbs {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operation applied outside its domain (projection to a non-subset,
/// overlapping concatenation, eliminating an absent variable, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Malformed problem text. Carries the 1-based line of the offending token.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// The solver cannot handle the given tree or input (e.g. a vertex that
/// drops several variables toward its parent).
class SolverError : public Error {
public:
  using Error::Error;
};

/// A configurable size cap was exceeded (joint table, optima enumeration).
class LimitError : public Error {
public:
  using Error::Error;
};

}  // namespace vbs

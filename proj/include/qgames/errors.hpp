#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qgames {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (a Werner weight outside [0,1], a non-unit Bloch vector, a non-PSD state).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two objects that must agree in shape do not.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An operation's precondition does not hold for otherwise well-formed input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An exact enumeration would exceed the configured cap.
class SizeError : public Error {
 public:
  SizeError(const std::string& what, std::uint64_t count, std::uint64_t cap)
      : Error(what + ": " + std::to_string(count) + " exceeds cap " + std::to_string(cap)),
        count_(count),
        cap_(cap) {}

  std::uint64_t count() const { return count_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t count_;
  std::uint64_t cap_;
};

/// Malformed text input. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Numerical failures of the optimization backends.
class NumericError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public NumericError {
 public:
  using NumericError::NumericError;
};

class UnboundedError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace qgames

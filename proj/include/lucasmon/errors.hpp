#pragma once

#include <stdexcept>
#include <string>

namespace lucasmon {

// Base class for every error raised by the library. The CLI maps the
// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Evaluation requested at a pole (zeta at s = 1, Gamma at 0, -1, ...).
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Factorization could not be completed within its work budget.
class FactorizationError : public Error {
 public:
  using Error::Error;
};

// Integer is not an element of the monoid.
class MembershipError : public Error {
 public:
  using Error::Error;
};

// Enumeration would exceed the configured element cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Evaluation settings cannot reach the requested accuracy.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A verification routine observed a violated numerical invariant.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Malformed external input (b-files, CSV).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace lucasmon

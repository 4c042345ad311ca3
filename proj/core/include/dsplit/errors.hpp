#pragma once

#include <stdexcept>
#include <string>

namespace dsplit {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated by the caller
/// (dimension mismatch, aliased buffers, empty input, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Unknown scheme, tableau, method or problem name.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Complex coefficients requested on a real-field instantiation.
class FieldCapabilityError : public Error {
 public:
  using Error::Error;
};

/// A coefficient set failed one of its structural checks.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Thrown by steppers when a register stops being finite.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int stage)
      : Error(what + " (stage " + std::to_string(stage) + ")"), stage_(stage) {}
  int stage() const noexcept { return stage_; }

 private:
  int stage_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class CollisionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

}  // namespace dsplit

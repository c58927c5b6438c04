#pragma once

#include <stdexcept>
#include <string>

namespace pasa {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad dimension or parameter value handed to a constructor or generator.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// State, action or cell index outside its range.
class IndexError : public Error {
 public:
  using Error::Error;
};

// Operation called in a state where its precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Iterative or direct solver did not reach the requested residual.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Problem size exceeds an exact-computation cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Experiment configuration rejected before any work is done.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pasa

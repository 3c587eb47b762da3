#pragma once

#include <stdexcept>
#include <string>

namespace swipt {

// Domain and overflow failures use std::domain_error / std::overflow_error
// directly. The types below cover the remaining failure classes.

/// A caller-supplied allocation, scheme or parameter set violates a precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative kernel or quadrature failed to reach its tolerance.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double partial_error = 0.0)
      : std::runtime_error(what), partial_error_(partial_error) {}

  double partial_error() const noexcept { return partial_error_; }

 private:
  double partial_error_;
};

/// Configuration file or command-line validation failure.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace swipt

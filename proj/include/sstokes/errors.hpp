#pragma once

#include <stdexcept>
#include <string>

namespace sstokes {

/// Invalid experiment or scheme configuration. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base of all numerical failures. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Factorization hit a zero (or numerically negligible) pivot.
class SingularMatrix : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Iterative solver reached its iteration cap.
class NotConverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Non-finite values appeared in a time step.
class NumericalFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace sstokes

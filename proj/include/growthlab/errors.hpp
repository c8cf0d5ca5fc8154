#pragma once

#include <stdexcept>
#include <string>

namespace growthlab {

/// A point or parameter lies outside the domain an operation accepts.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Floating-point breakdown: overflow, vanishing denominators, step underflow.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureError : NumericError {
  using NumericError::NumericError;
};

/// Not enough samples (or not close enough to r = 1) to estimate a limit.
struct InsufficientData : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace growthlab

#pragma once

#include <stdexcept>
#include <string>

namespace mgbench {

// Invalid configuration or malformed input data.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Operation unsupported by the selected backend (e.g. X-basis readout on the
// covariance backend).
class BackendError : public std::runtime_error {
 public:
  explicit BackendError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical validity violation: antisymmetry drift, singular inputs,
// interpolation conditioning failures.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Curve fit failed to converge within the iteration cap.
class FitError : public std::runtime_error {
 public:
  explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mgbench

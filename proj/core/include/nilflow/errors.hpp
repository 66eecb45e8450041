#pragma once

#include <stdexcept>
#include <string>

namespace nilflow {

/// Metric coefficients fail positive definiteness (or an adapted-basis
/// quantity such as Delta_e is not strictly positive).
class InvalidMetricError : public std::domain_error {
 public:
  explicit InvalidMetricError(const std::string& what)
      : std::domain_error("not positive definite: " + what) {}
};

/// A complex frame is singular or its rows are not of type (1,0).
class InvalidFrameError : public std::domain_error {
 public:
  explicit InvalidFrameError(const std::string& what)
      : std::domain_error("invalid frame: " + what) {}
};

/// The requested operation is only available on a restricted family of
/// structures (e.g. lambda = 0 with diagonal metrics).
class UnsupportedParametersError : public std::domain_error {
 public:
  explicit UnsupportedParametersError(const std::string& what)
      : std::domain_error("unsupported parameters: " + what) {}
};

/// Invalid numerical arguments such as non-positive step sizes.
class InvalidArgumentError : public std::invalid_argument {
 public:
  explicit InvalidArgumentError(const std::string& what)
      : std::invalid_argument(what) {}
};

/// Two independent computation routes that must agree did not.
class ConsistencyError : public std::logic_error {
 public:
  explicit ConsistencyError(const std::string& what)
      : std::logic_error("inconsistent results: " + what) {}
};

}  // namespace nilflow

#pragma once

#include <cstdint>
#include <random>

#include "nilflow/lie_nilpotent.hpp"
#include "nilflow/metric_coeffs.hpp"

namespace nilflow {

/// Portable seeded generator. The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard for a given seed; a draw x is mapped
/// to [0, 1) as (x >> 11) * 2^-53. No standard distribution object is used,
/// so sequences are identical across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  [[nodiscard]] std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  [[nodiscard]] double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  [[nodiscard]] double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
  }

  /// Uniform integer in [lo, hi] (inclusive).
  [[nodiscard]] int integer(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(static_cast<double>(span) * uniform());
  }

 private:
  std::mt19937_64 engine_;
};

/// Complex structure with rho in {0, 1}, lambda in [0, 2), x, y in [-2, 2).
[[nodiscard]] JParams random_params(Rng& rng);

/// Same ranges with lambda = 0.
[[nodiscard]] JParams random_params_lambda0(Rng& rng);

/// Positive definite metric: diagonal entries in [0.5, 2), off-diagonal
/// real and imaginary parts in [-0.3, 0.3), redrawn until positive definite.
[[nodiscard]] MetricCoeffs random_metric(Rng& rng);

/// Almost diagonal metric (v = z = 0) drawn as random_metric.
[[nodiscard]] MetricCoeffs random_almost_diagonal_metric(Rng& rng);

/// Diagonal metric with entries in [0.4, 2.4).
[[nodiscard]] MetricCoeffs random_diagonal_metric(Rng& rng);

/// Bundle metric with entries in [0.4, 2.4).
[[nodiscard]] BundleMetricCoeffs random_bundle_metric(Rng& rng);

/// A complex structure of the lambda = 0 catalog for the given group. The
/// free parameters are drawn from the grid of multiples of 1/8, so that the
/// boundary values where rho + lambda^2 - 2x vanishes are reachable:
///   N2: rho = 0, y = 1, x in [-2, 2];
///   N3: rho = y = 0, x = +-1;
///   N5: rho = 1, y in [0, 1], x in [-2, 2] with 1 + 4x > 4y^2;
///   N8: rho = x = y = 0.
/// Throws InvalidArgumentError for groups outside the catalog.
[[nodiscard]] JParams random_catalog_params(Rng& rng, GroupId group);

}  // namespace nilflow

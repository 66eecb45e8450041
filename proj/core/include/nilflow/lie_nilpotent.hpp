#pragma once

#include <complex>
#include <string_view>

#include "nilflow/metric_coeffs.hpp"
#include "nilflow/structure_constants.hpp"

namespace nilflow {

/// Parameters (rho, lambda, x, y) of the complex structure equations
///   d zeta^1 = d zeta^2 = 0,
///   d zeta^3 = rho zeta^{12} + zeta^{1 1bar} + lambda zeta^{1 2bar}
///              + (x + i y) zeta^{2 2bar},
/// with rho in {0, 1} and lambda >= 0.
class JParams {
 public:
  /// Throws InvalidArgumentError if rho is not 0 or 1, lambda < 0, or any
  /// value is not finite.
  JParams(int rho, double lambda, double x, double y);

  [[nodiscard]] int rho() const { return rho_; }
  [[nodiscard]] double lambda() const { return lambda_; }
  [[nodiscard]] double x() const { return x_; }
  [[nodiscard]] double y() const { return y_; }

  /// rho + lambda^2 - 2x; its sign decides pluriclosedness and sign(K1).
  [[nodiscard]] double pluriclosed_defect() const {
    return rho_ + lambda_ * lambda_ - 2.0 * x_;
  }

  friend bool operator==(const JParams&, const JParams&) = default;

 private:
  int rho_;
  double lambda_;
  double x_;
  double y_;
};

/// Coefficients of d zeta^3 on the complex monomials; d zeta^1 = d zeta^2 = 0.
struct ComplexStructureEquations {
  Complex zeta_12;
  Complex zeta_1_1bar;
  Complex zeta_1_2bar;
  Complex zeta_2_2bar;
};

[[nodiscard]] ComplexStructureEquations complex_structure_equations(
    const JParams& params);

/// Structure constants of the adapted real coframe e^1..e^6 (de^1..de^4 = 0,
/// de^5 and de^6 in terms of the adapted coefficients).
/// Throws InvalidMetricError if the adapted coefficients are not positive.
[[nodiscard]] StructureConstants real_structure_constants(
    const JParams& params, const AdaptedCoeffs& adapted);

struct NilpotencyReport {
  bool jacobi_ok = false;
  bool two_step = false;
  int b1 = 0;
};

/// Checks d o d = 0 on generators, [g, [g, g]] = 0, and the first Betti
/// number of the Lie algebra (dimension of closed invariant 1-forms).
[[nodiscard]] NilpotencyReport check_nilpotency(const StructureConstants& sc);

enum class GroupId { N2, N3, N4, N5, N6, N8, Unknown };

[[nodiscard]] std::string_view to_string(GroupId id);

/// Identifies the nilpotent Lie group for lambda = 0; returns Unknown for
/// lambda > 0 and for parameters outside the known lambda = 0 catalog.
[[nodiscard]] GroupId classify_group(const JParams& params);

}  // namespace nilflow

#pragma once

#include <array>

#include "nilflow/exterior.hpp"
#include "nilflow/lie_nilpotent.hpp"
#include "nilflow/metric_coeffs.hpp"

namespace nilflow {

/// D = r2 s2 k2 + 2 Re(i conj(u) conj(v) z) - k2|u|^2 - r2|v|^2 - s2|z|^2,
/// which equals 8i det(omega). Throws InvalidMetricError unless the metric
/// is positive definite (all principal minors positive).
[[nodiscard]] double det_quantity(const MetricCoeffs& m);

/// Norm of Psi = zeta^{123} with respect to omega: sqrt(8 / D).
[[nodiscard]] double psi_norm(const MetricCoeffs& m);

/// The fundamental form omega, expressed in the real coframe e of `frame`.
[[nodiscard]] Form fundamental_form(const MetricCoeffs& m,
                                    const ComplexFrame& frame);

/// Adapted coefficients of the metric (closed form):
/// r_e2 = r2 - |z|^2/k2, s_e2 = s2 - |v|^2/k2, k_e2 = k2,
/// u_e = u - i conj(v) z / k2, delta_e^2 = D / k2.
[[nodiscard]] AdaptedCoeffs adapted_coeffs(const MetricCoeffs& m);

struct AdaptedBasis {
  /// zeta^1..zeta^3 expressed in the adapted real coframe e^1..e^6, in which
  /// omega = e^{12} + e^{34} + e^{56}.
  ComplexFrame frame;
  AdaptedCoeffs coeffs;
};

[[nodiscard]] AdaptedBasis adapted_basis(const JParams& params,
                                         const MetricCoeffs& m);

/// 3x3 complex matrix whose row a expresses sigma^a in zeta^1..zeta^3.
using CoframeChange = std::array<std::array<Complex, 3>, 3>;

struct AlmostDiagonalReduction {
  CoframeChange sigma_in_zeta;
  /// Metric coefficients in the new coframe; v = z = 0.
  MetricCoeffs metric;
};

/// Change of (1,0)-coframe sigma^1 = zeta^1, sigma^2 = zeta^2,
/// sigma^3 = zeta^3 - (i v/k2) zeta^2 - (i z/k2) zeta^1, which preserves the
/// structure equations and Psi and removes the v, z coefficients.
[[nodiscard]] AlmostDiagonalReduction reduce_almost_diagonal(
    const JParams& params, const MetricCoeffs& m);

/// Everything needed to compute with an invariant Hermitian structure in its
/// adapted coframe.
struct HermitianStructure {
  JParams params;
  MetricCoeffs metric;
  AdaptedBasis basis;
  StructureConstants sc;
  /// omega in the adapted coframe (e^{12} + e^{34} + e^{56}).
  Form omega;
};

[[nodiscard]] HermitianStructure make_structure(const JParams& params,
                                                const MetricCoeffs& m);

/// d(omega^2) computed with the exterior calculus in the adapted coframe.
[[nodiscard]] Form d_omega_squared(const HermitianStructure& h);

/// i del delbar omega, in the adapted coframe.
[[nodiscard]] Form i_ddbar_omega(const HermitianStructure& h);

/// Left-hand side minus right-hand side of the closed-form balanced
/// condition s2 k2 - |v|^2 + (x + iy)(r2 k2 - |z|^2) = i lambda (k2 conj(u)
/// + i v conj(z)).
[[nodiscard]] Complex balanced_defect(const JParams& params,
                                      const MetricCoeffs& m);

/// dω² = 0. Evaluated through the exterior calculus and through
/// balanced_defect(); throws ConsistencyError if the two disagree.
[[nodiscard]] bool is_balanced(const JParams& params, const MetricCoeffs& m);

/// Locally conformally Kähler test. Outside rho = lambda = y = 0, x = 1 the
/// answer is false; inside, the coefficient conditions
/// r2 k2 - |z|^2 = s2 k2 - |v|^2 and k2 u = i z conj(v) are tested.
[[nodiscard]] bool is_lck(const JParams& params, const MetricCoeffs& m);

/// Least-squares residual of d omega = theta ^ omega over real 1-forms theta,
/// relative to |d omega|. Zero exactly when omega is lcK (or Kähler).
[[nodiscard]] double lee_form_residual(const JParams& params,
                                       const MetricCoeffs& m);

/// del delbar omega = 0, evaluated numerically.
[[nodiscard]] bool is_pluriclosed(const JParams& params, const MetricCoeffs& m);

}  // namespace nilflow

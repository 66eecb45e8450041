#pragma once

#include <complex>

namespace nilflow {

using Complex = std::complex<double>;

/// Coefficients of an invariant J-Hermitian metric in a (1,0)-coframe:
///   2 omega = i (r2 z^{1 1bar} + s2 z^{2 2bar} + k2 z^{3 3bar})
///             + u z^{1 2bar} - conj(u) z^{2 1bar}
///             + v z^{2 3bar} - conj(v) z^{3 2bar}
///             + z z^{1 3bar} - conj(z) z^{3 1bar}.
///
/// Positivity is not checked on construction; functions consuming a
/// MetricCoeffs validate it through det_quantity().
struct MetricCoeffs {
  double r2 = 1.0;
  double s2 = 1.0;
  double k2 = 1.0;
  Complex u{};
  Complex v{};
  Complex z{};

  [[nodiscard]] static MetricCoeffs diagonal(double r2, double s2, double k2) {
    return {r2, s2, k2, {}, {}, {}};
  }
  [[nodiscard]] bool is_almost_diagonal() const {
    return v == Complex{} && z == Complex{};
  }
  [[nodiscard]] bool is_diagonal() const {
    return is_almost_diagonal() && u == Complex{};
  }

  friend bool operator==(const MetricCoeffs&, const MetricCoeffs&) = default;
};

/// Coefficients of the adapted coframe: the metric reduced to almost
/// diagonal form, with delta_e = sqrt(r_e2 s_e2 - |u_e|^2).
struct AdaptedCoeffs {
  double r_e2 = 1.0;
  double s_e2 = 1.0;
  double k_e2 = 1.0;
  Complex u_e{};
  double delta_e = 1.0;

  /// Builds the record and computes delta_e; throws InvalidMetricError
  /// unless r_e2, s_e2, k_e2 > 0 and r_e2 s_e2 > |u_e|^2.
  [[nodiscard]] static AdaptedCoeffs make(double r_e2, double s_e2,
                                          double k_e2, Complex u_e);
};

/// Diagonal bundle metric H with coefficients (r~^2, s~^2, k~^2).
struct BundleMetricCoeffs {
  double tr2 = 1.0;
  double ts2 = 1.0;
  double tk2 = 1.0;

  /// Throws InvalidMetricError unless all coefficients are positive.
  void validate() const;

  friend bool operator==(const BundleMetricCoeffs&,
                         const BundleMetricCoeffs&) = default;
};

}  // namespace nilflow

#pragma once

#include <array>

#include "nilflow/exterior.hpp"
#include "nilflow/hermitian.hpp"
#include "nilflow/lie_nilpotent.hpp"

namespace nilflow {

/// A 6x6 matrix of forms indexed 1-based as (i, j) for sigma^i_j or
/// Omega^i_j. Used both for connection 1-forms and curvature 2-forms.
class FormMatrix {
 public:
  [[nodiscard]] const Form& operator()(int i, int j) const {
    return m_[i - 1][j - 1];
  }
  Form& operator()(int i, int j) { return m_[i - 1][j - 1]; }

  /// Largest coefficient magnitude over all entries.
  [[nodiscard]] double max_abs() const;

  /// Largest |F^i_j + F^j_i| coefficient.
  [[nodiscard]] double antisymmetry_defect() const;

  /// Sets F^j_i = -F^i_j for i < j and zeroes the diagonal.
  void antisymmetrize_from_upper();

 private:
  std::array<std::array<Form, kDim>, kDim> m_{};
};

using ConnectionForms = FormMatrix;
using CurvatureForms = FormMatrix;

/// Location and size of the largest entrywise discrepancy between two form
/// matrices. The error of an entry is its largest coefficient difference
/// divided by max(larger max_abs() of the two entries,
/// tol::kAbsoluteFloor / tol::kRelative), so that an error <= kRelative means
/// |difference| <= max(kRelative * scale, kAbsoluteFloor).
struct EntryComparison {
  double max_relative_error = 0.0;
  int i = 0;
  int j = 0;
  Mask mask = 0;
};

[[nodiscard]] EntryComparison compare_entries(const FormMatrix& a,
                                              const FormMatrix& b);

/// Which version of the long closed-form curvature tables to use.
/// kCorrected fixes the coefficients that disagree with first-principles
/// curvature; kUncorrected keeps the original transcription, including those
/// coefficients.
enum class TableVariant { kCorrected, kUncorrected };

/// Connection 1-forms of the Gauduchon connection nabla^tau in an adapted
/// coframe (omega = e^{12} + e^{34} + e^{56}, Je_1 = e_2, Je_3 = e_4,
/// Je_5 = e_6), built from the Levi-Civita forms and d omega:
///   sigma^i_j(e_k) = 1/2 (c^i_{jk} - c^k_{ij} + c^j_{ki})
///                    + (1 - tau)/4 d omega(Je_k, Je_j, Je_i)
///                    - (1 + tau)/4 d omega(Je_k, e_j, e_i).
[[nodiscard]] ConnectionForms connection_one_forms_tau(
    const StructureConstants& sc, double tau);

/// The same connection forms from the explicit coefficient table.
[[nodiscard]] ConnectionForms closed_form_connection_tau(
    const JParams& params, const AdaptedCoeffs& adapted, double tau);

/// Omega^i_j = d sigma^i_j + sum_k sigma^i_k ^ sigma^k_j.
[[nodiscard]] CurvatureForms curvature(const ConnectionForms& sigma,
                                       const StructureConstants& sc);

/// Closed-form curvature of nabla^tau in the adapted coframe.
[[nodiscard]] CurvatureForms closed_form_curvature_tau(
    const JParams& params, const AdaptedCoeffs& adapted, double tau,
    TableVariant variant = TableVariant::kCorrected);

/// Tr(Omega ^ Omega) = sum_{i<j} Omega^i_j ^ Omega^i_j.
[[nodiscard]] Form trace_wedge(const CurvatureForms& curv);

/// Coefficient C with Tr = C zeta^{12 1bar 2bar}, read from the e^{1234}
/// coefficient of an adapted-coframe 4-form via
/// e^{1234} = (delta_e^2 / 4) zeta^{12 1bar 2bar}.
[[nodiscard]] Complex zeta_1212_coefficient(const Form& four_form,
                                            double delta_e);

/// Largest coefficient of a 4-form away from e^{1234}, relative to the
/// e^{1234} coefficient (0 when the form vanishes).
[[nodiscard]] double off_1234_ratio(const Form& four_form);

/// Closed-form C with Tr(Omega^tau ^ Omega^tau) = C zeta^{12 1bar 2bar}.
[[nodiscard]] double closed_form_trace_tau(const JParams& params,
                                           const AdaptedCoeffs& adapted,
                                           double tau);

/// Connection 1-forms of the Gauduchon connection nabla^kappa of the bundle
/// metric H, written in the adapted coframe of the diagonal metric omega:
/// the tangent-bundle forms of H in its own adapted coframe are rescaled
/// entrywise by M = diag(r/r~, r/r~, s/s~, s/s~, k/k~, k/k~) and the
/// antisymmetric completion of the upper triangle is returned.
/// Requires lambda = 0 and a diagonal omega (UnsupportedParametersError).
[[nodiscard]] ConnectionForms bundle_connection_kappa(
    const JParams& params, const MetricCoeffs& omega,
    const BundleMetricCoeffs& H, double kappa);

[[nodiscard]] ConnectionForms closed_form_bundle_connection_kappa(
    const JParams& params, const MetricCoeffs& omega,
    const BundleMetricCoeffs& H, double kappa);

/// Curvature of bundle_connection_kappa computed from first principles in
/// the adapted coframe of omega.
[[nodiscard]] CurvatureForms bundle_curvature(const JParams& params,
                                              const MetricCoeffs& omega,
                                              const BundleMetricCoeffs& H,
                                              double kappa);

[[nodiscard]] CurvatureForms bundle_curvature_closed_form(
    const JParams& params, const MetricCoeffs& omega,
    const BundleMetricCoeffs& H, double kappa,
    TableVariant variant = TableVariant::kCorrected);

/// Closed-form C with Tr(A^kappa ^ A^kappa) = C zeta^{12 1bar 2bar}.
[[nodiscard]] double closed_form_trace_kappa(const JParams& params,
                                             const MetricCoeffs& omega,
                                             const BundleMetricCoeffs& H,
                                             double kappa);

struct InstantonCheck {
  bool pq_ok = false;
  bool hym_ok = false;
  /// Largest (2,0)/(0,2) coefficient, normalised by the largest curvature
  /// coefficient.
  double pq_residual = 0.0;
  /// Largest coefficient of omega^2 ^ F^i_j, same normalisation.
  double hym_residual = 0.0;
};

/// SU(3)-instanton test: vanishing (2,0) and (0,2) parts and
/// omega^2 ^ F = 0, to tol::kVanishing after normalisation.
[[nodiscard]] InstantonCheck is_instanton(const CurvatureForms& curv,
                                          const Form& omega_form,
                                          const ComplexFrame& frame);

/// nabla^tau Psi = 0, tested through sigma^1_2 + sigma^3_4 + sigma^5_6 = 0.
[[nodiscard]] bool nabla_psi_check(const JParams& params,
                                   const AdaptedCoeffs& adapted, double tau);

}  // namespace nilflow

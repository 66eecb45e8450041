#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nilflow/hermitian.hpp"
#include "nilflow/lie_nilpotent.hpp"
#include "nilflow/metric_coeffs.hpp"

namespace nilflow {

// ---------------------------------------------------------------------------
// Conserved quantities and the almost diagonal solution
// ---------------------------------------------------------------------------

/// Quantities fixed by the initial metric and conserved along the flow:
///   c1 = |Psi| (r2 k2 - |z|^2),        c2 = |Psi| (s2 k2 - |v|^2),
///   c3 = |Psi| (r2 v - i z conj(u)),   c4 = |Psi| (s2 z + i u v),
///   c5 = |Psi| (k2 u - i z conj(v)).
struct ConservedConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  Complex c3{};
  Complex c4{};
  Complex c5{};

  /// Throws InvalidMetricError unless c1 > 0, c2 > 0 and c1 c2 > |c5|^2.
  void validate() const;
};

[[nodiscard]] ConservedConstants conserved_constants(const MetricCoeffs& omega0);

/// The almost diagonal metric with the given constants and r^2 = r2:
/// s2 = (c2/c1) r2, u = (c5/c1) r2, k2 = (c1 c2 - |c5|^2)/8, v = z = 0.
/// Throws InvalidArgumentError for r2 <= 0 and InvalidMetricError for
/// invalid constants.
[[nodiscard]] MetricCoeffs almost_diagonal_solution(const ConservedConstants& c,
                                                    double r2);

/// Metric coefficients in the coframe zeta of the metric whose coefficients
/// in the coframe sigma = P zeta are `sigma_metric`.
[[nodiscard]] MetricCoeffs metric_in_zeta(const CoframeChange& sigma_in_zeta,
                                          const MetricCoeffs& sigma_metric);

// ---------------------------------------------------------------------------
// Model problem h' = K1 + K2 / h^2 with h = r^2
// ---------------------------------------------------------------------------

struct ModelConstants {
  double K1 = 0.0;
  double K2 = 0.0;
  /// i ddbar omega = B zeta^{12 1bar 2bar}.
  double B = 0.0;
  /// Tr(Omega^tau ^ Omega^tau) = (C / r^4) zeta^{12 1bar 2bar}.
  double C = 0.0;
  double alpha_prime = 0.0;
  double tau = 0.0;
};

/// Model constants of the flat-bundle flow started at omega0. The metric is
/// first reduced to almost diagonal form; B = ((c1 c2 - |c5|^2)/16)
/// (rho + lambda^2 - 2x), C = r^4 closed_form_trace_tau(...) at the reduced
/// metric, K1 = c1 B / 4 and K2 = -alpha' c1 C / 16.
[[nodiscard]] ModelConstants model_constants(const JParams& params,
                                             const MetricCoeffs& omega0,
                                             double alpha_prime, double tau);

enum class FlowKind { kStationary, kImmortal, kAncient, kEternal };

[[nodiscard]] std::string to_string(FlowKind kind);

/// Qualitative behaviour of the solution of h' = K1 + K2/h^2 through h0.
/// The solution lives on (t_minus, t_plus) with t_minus < 0 < t_plus.
struct QualitativeClass {
  FlowKind kind = FlowKind::kStationary;
  /// sqrt(-K2/K1) when K1 and K2 have opposite signs.
  std::optional<double> fixed_point;
  /// h(t) ~ K1 t as t -> +infinity.
  std::optional<double> forward_slope;
  /// h(t) ~ K1 t as t -> -infinity (K1 < 0).
  std::optional<double> backward_slope;
  /// h(t) tends to the fixed point as t -> +infinity.
  bool converges_forward = false;
  /// h(t) tends to the fixed point as t -> -infinity.
  bool converges_backward = false;
  /// Exact finite endpoints, available when K1 = 0 or K2 = 0.
  std::optional<double> t_minus;
  std::optional<double> t_plus;
  /// The sign case K1 != 0, K2 = 0 is classified from the linear solution
  /// h = h0 + K1 t rather than from a stated proposition.
  bool from_explicit_solution_only = false;

  [[nodiscard]] std::string description() const;
};

/// Relative threshold under which h0 is taken to be the fixed point:
/// |h0 - h*| < kFixedPointTie * max(1, h*).
inline constexpr double kFixedPointTie = 1e-12;

/// Throws InvalidArgumentError unless h0 > 0.
[[nodiscard]] QualitativeClass classify_model(double K1, double K2, double h0);

struct ModelSample {
  double t = 0.0;
  double h = 0.0;
};

struct ModelTrajectory {
  std::vector<ModelSample> samples;
  /// The solution left the domain h > 0 before t_max (h below
  /// kBlowDownFloor, |h'| above kBlowDownRate, or 40 step halvings failed).
  bool blow_down = false;
  /// Last time reached; an estimate of T+ when blow_down is set. For the
  /// explicit solutions (K1 = 0 or K2 = 0) it is the exact extinction time.
  double t_last = 0.0;
};

inline constexpr double kBlowDownFloor = 1e-8;
inline constexpr double kBlowDownRate = 1e8;
inline constexpr int kMaxHalvings = 40;

/// Integrates h' = K1 + K2/h^2 forward from h(0) = h0 to t_max.
/// Classical RK4 with fixed step dt; a step is halved (up to 40 times) when it
/// would leave h > 0. When K1 = 0 or K2 = 0 the explicit solutions
/// h = (h0^3 + 3 K2 t)^{1/3} and h = h0 + K1 t are sampled instead.
/// Every `stride`-th step is recorded, plus the final one.
/// Throws InvalidArgumentError unless h0 > 0, dt > 0, t_max > 0, stride >= 1.
[[nodiscard]] ModelTrajectory integrate_model(double K1, double K2, double h0,
                                              double dt, double t_max,
                                              int stride = 1);

// ---------------------------------------------------------------------------
// Sign of K1
// ---------------------------------------------------------------------------

/// gamma_1 = k^4 (rho + lambda^2 - 2x) / D, with D = 8i det(omega).
[[nodiscard]] double gamma1(const JParams& params, const MetricCoeffs& omega0);

/// -1, 0 or +1 for the sign of K1 of the flow started at omega0.
[[nodiscard]] int k1_sign(const JParams& params, const MetricCoeffs& omega0);

struct K1SignRow {
  std::string group;
  bool negative = false;
  bool zero = false;
  bool positive = false;
  /// False for groups whose row is quoted rather than sampled.
  bool sampled = true;
  std::string note;
};

/// Achievable signs of K1 per group. N2, N3, N5 and N8 are sampled over the
/// lambda = 0 catalog with random metrics; N4 and N6 have no lambda = 0
/// parametrisation and their known rows are quoted.
[[nodiscard]] std::vector<K1SignRow> k1_sign_table(std::uint64_t seed = 1,
                                                   int samples_per_group = 400);

// ---------------------------------------------------------------------------
// Flows
// ---------------------------------------------------------------------------

struct FlowState {
  double t = 0.0;
  MetricCoeffs omega;
  /// Absent for the flat-bundle flow.
  std::optional<BundleMetricCoeffs> H;
};

/// Flat-bundle flow: the model problem for h = r^2 in the almost diagonal
/// coframe, with the full metric reconstructed at every sample and pulled
/// back to the original coframe.
struct FlatFlowRun {
  ConservedConstants constants;
  ModelConstants model;
  QualitativeClass classification;
  ModelTrajectory trajectory;
  std::vector<FlowState> states;
};

[[nodiscard]] FlatFlowRun run_flat_flow(const JParams& params,
                                        const MetricCoeffs& omega0,
                                        double alpha_prime, double tau,
                                        double dt, double t_max,
                                        int stride = 1);

struct CoupledDerivative {
  double r2 = 0.0;
  double tr2 = 0.0;
  double ts2 = 0.0;
  double tk2 = 0.0;
};

/// Right-hand side of the coupled flow of (omega, H) for lambda = 0 and
/// diagonal metrics. The bundle part is
///   d tr2/dt = [2 (c2 (k+1)^2 - c1 rho (k-1)^2) r2 tk2
///               - c1 c2 (k-1)(c1 x + c2) tr2] tk2 / (3 c1 c2^2 r2^2 tr2),
///   d ts2/dt = [2 (c1 (k+1)^2 X - c2 rho (k-1)^2) r2 tk2
///               - c1^2 (k-1)(c1 X + c2 x) ts2] tk2 / (3 c1^2 c2 r2^2 ts2),
///   d tk2/dt = 2 [rho (k-1)^2 (c1^2 ts2^2 + c2^2 tr2^2)
///               - c1 c2 (k+1)^2 (X tr2^2 + ts2^2)] tk2^3
///               / (3 c1^2 c2^2 r2 tr2^2 ts2^2),
/// with k = kappa and X = x^2 + y^2, and
///   d r2/dt = (c1/4) (B - (alpha'/4)(C_tau - C_A))
/// with C_tau, C_A the current trace coefficients of the tangent and bundle
/// curvatures. Throws UnsupportedParametersError for lambda != 0, a
/// non-diagonal omega or a missing H.
[[nodiscard]] CoupledDerivative coupled_rhs(const JParams& params,
                                            const FlowState& state,
                                            const ConservedConstants& c,
                                            double kappa, double tau,
                                            double alpha_prime);

struct CoupledTrajectory {
  ConservedConstants constants;
  std::vector<FlowState> states;
  bool blow_down = false;
  double t_last = 0.0;
};

/// RK4 on (r2, tr2, ts2, tk2) with fixed step dt; omega is rebuilt from r2
/// through almost_diagonal_solution. A step is halved when any coefficient
/// would become non-positive; after 40 halvings the run stops with blow_down.
/// Throws InvalidArgumentError for dt <= 0, t_max <= 0 or stride < 1.
[[nodiscard]] CoupledTrajectory integrate_coupled(
    const JParams& params, const MetricCoeffs& omega0,
    const BundleMetricCoeffs& H0, double kappa, double tau, double alpha_prime,
    double dt, double t_max, int stride = 1);

/// Values of kappa making the bundle equations vanish identically for a
/// balanced omega0: the roots of
///   (c2 - rho c1) k^2 + 2 (c2 + rho c1) k + (c2 - rho c1) = 0.
/// The discriminant is 16 rho c1 c2. Returns {0} when c2 = rho c1, {-1} when
/// rho = 0, and the two roots (c1 + c2 +- 2 sqrt(c1 c2))/(c1 - c2) otherwise.
/// Throws InvalidArgumentError for rho outside {0, 1}.
[[nodiscard]] std::vector<double> stationary_kappa_values(
    const ConservedConstants& c, int rho);

/// Raw max-norm residuals of the Hull-Strominger-Ivanov equations, all
/// measured on coefficients in the adapted real coframe of omega.
struct HsiResiduals {
  /// (a) omega^2 ^ A^kappa.
  double bundle_hym = 0.0;
  /// (b) (2,0) and (0,2) parts of A^kappa.
  double bundle_type = 0.0;
  /// (c) i ddbar omega - (alpha'/4)(Tr Rm^tau ^ Rm^tau - Tr A ^ A).
  double anomaly = 0.0;
  /// (d) d(|Psi| omega^2).
  double conformally_balanced = 0.0;
  /// (e) omega^2 ^ Rm^tau.
  double tangent_hym = 0.0;
  /// (e) (2,0) and (0,2) parts of Rm^tau.
  double tangent_type = 0.0;
  /// Coefficient of Tr(A ^ A) on zeta^{12 1bar 2bar}.
  double bundle_trace = 0.0;

  [[nodiscard]] double max() const;
};

/// Throws UnsupportedParametersError for lambda != 0 or a non-diagonal omega.
[[nodiscard]] HsiResiduals hsi_residuals(const JParams& params,
                                         const MetricCoeffs& omega,
                                         const BundleMetricCoeffs& H,
                                         double tau, double kappa,
                                         double alpha_prime);

enum class CollapseLimit { kTorus, kPoint, kUndetermined };

[[nodiscard]] std::string to_string(CollapseLimit limit);

struct CollapseProfile {
  struct Sample {
    double t = 0.0;
    double r2 = 0.0;
    double s2 = 0.0;
    double k2 = 0.0;
  };
  /// Coefficients scaled by (1 + t)^{-1}.
  std::vector<Sample> scaled;
  /// Scaled coefficients at the last sample.
  Sample limit;
  /// Growth exponents p with coefficient ~ (1 + t)^p, fitted between the
  /// sample nearest the middle of the run and the last sample.
  double r2_exponent = 0.0;
  double s2_exponent = 0.0;
  double k2_exponent = 0.0;
  bool r2_vanishes = false;
  bool s2_vanishes = false;
  bool k2_vanishes = false;
  CollapseLimit limit_kind = CollapseLimit::kUndetermined;
};

/// Collapse of (1 + t)^{-1} omega_t. A coefficient is reported as vanishing
/// when its growth exponent is below 1/2. The base block (r2, s2) surviving
/// with k2 vanishing gives a torus; everything vanishing gives a point.
/// With fewer than two samples or t_last <= 0 the limit is undetermined.
[[nodiscard]] CollapseProfile collapse_diagnostic(
    const std::vector<FlowState>& trajectory);

}  // namespace nilflow

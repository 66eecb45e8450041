#include "nilflow/anomaly_flow.hpp"

#include <algorithm>
#include <cmath>

#include "nilflow/errors.hpp"
#include "nilflow/gauduchon.hpp"

namespace nilflow {

FlatFlowRun run_flat_flow(const JParams& params, const MetricCoeffs& omega0,
                          double alpha_prime, double tau, double dt,
                          double t_max, int stride) {
  const AlmostDiagonalReduction red = reduce_almost_diagonal(params, omega0);
  FlatFlowRun run;
  run.constants = conserved_constants(red.metric);
  run.constants.validate();
  run.model = model_constants(params, omega0, alpha_prime, tau);
  const double h0 = red.metric.r2;
  run.classification = classify_model(run.model.K1, run.model.K2, h0);
  run.trajectory =
      integrate_model(run.model.K1, run.model.K2, h0, dt, t_max, stride);
  run.states.reserve(run.trajectory.samples.size());
  for (const ModelSample& s : run.trajectory.samples) {
    const MetricCoeffs sigma_metric = almost_diagonal_solution(run.constants, s.h);
    run.states.push_back({s.t, metric_in_zeta(red.sigma_in_zeta, sigma_metric),
                          std::nullopt});
  }
  return run;
}

namespace {

void require_coupled_gate(const JParams& params, const FlowState& state) {
  if (params.lambda() != 0.0)
    throw UnsupportedParametersError("the coupled flow requires lambda = 0");
  if (!state.omega.is_diagonal())
    throw UnsupportedParametersError("the coupled flow requires a diagonal omega");
  if (!state.H) throw UnsupportedParametersError("the coupled flow requires H");
  state.H->validate();
}

}  // namespace

CoupledDerivative coupled_rhs(const JParams& params, const FlowState& state,
                              const ConservedConstants& c, double kappa,
                              double tau, double alpha_prime) {
  require_coupled_gate(params, state);
  c.validate();
  const BundleMetricCoeffs& H = *state.H;
  const double c1 = c.c1, c2 = c.c2;
  const double rho = params.rho(), x = params.x(), y = params.y();
  const double X = x * x + y * y;
  const double km2 = (kappa - 1.0) * (kappa - 1.0);
  const double kp2 = (kappa + 1.0) * (kappa + 1.0);
  const double r2 = state.omega.r2;
  const double tr2 = H.tr2, ts2 = H.ts2, tk2 = H.tk2;

  CoupledDerivative out;
  out.tr2 = (2.0 * (c2 * kp2 - c1 * rho * km2) * r2 * tk2 -
             c1 * c2 * (kappa - 1.0) * (c1 * x + c2) * tr2) *
            tk2 / (3.0 * c1 * c2 * c2 * r2 * r2 * tr2);
  out.ts2 = (2.0 * (c1 * kp2 * X - c2 * rho * km2) * r2 * tk2 -
             c1 * c1 * (kappa - 1.0) * (c1 * X + c2 * x) * ts2) *
            tk2 / (3.0 * c1 * c1 * c2 * r2 * r2 * ts2);
  out.tk2 = 2.0 *
            (rho * km2 * (c1 * c1 * ts2 * ts2 + c2 * c2 * tr2 * tr2) -
             c1 * c2 * kp2 * (X * tr2 * tr2 + ts2 * ts2)) *
            tk2 * tk2 * tk2 /
            (3.0 * c1 * c1 * c2 * c2 * r2 * tr2 * tr2 * ts2 * ts2);

  const double B = (c1 * c2 - std::norm(c.c5)) / 16.0 * params.pluriclosed_defect();
  const double c_tau = closed_form_trace_tau(params, adapted_coeffs(state.omega), tau);
  const double c_a = closed_form_trace_kappa(params, state.omega, H, kappa);
  out.r2 = c1 / 4.0 * (B - alpha_prime / 4.0 * (c_tau - c_a));
  return out;
}

namespace {

struct CoupledVector {
  double r2, tr2, ts2, tk2;
};

CoupledVector axpy(const CoupledVector& y, double a, const CoupledDerivative& d) {
  return {y.r2 + a * d.r2, y.tr2 + a * d.tr2, y.ts2 + a * d.ts2, y.tk2 + a * d.tk2};
}

bool positive(const CoupledVector& y) {
  return y.r2 > 0.0 && y.tr2 > 0.0 && y.ts2 > 0.0 && y.tk2 > 0.0 &&
         std::isfinite(y.r2) && std::isfinite(y.tr2) && std::isfinite(y.ts2) &&
         std::isfinite(y.tk2);
}

FlowState to_state(double t, const CoupledVector& y, const ConservedConstants& c) {
  return {t, almost_diagonal_solution(c, y.r2), BundleMetricCoeffs{y.tr2, y.ts2, y.tk2}};
}

}  // namespace

CoupledTrajectory integrate_coupled(const JParams& params,
                                    const MetricCoeffs& omega0,
                                    const BundleMetricCoeffs& H0, double kappa,
                                    double tau, double alpha_prime, double dt,
                                    double t_max, int stride) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw InvalidArgumentError("time step must be positive");
  if (!(t_max > 0.0) || !std::isfinite(t_max))
    throw InvalidArgumentError("time horizon must be positive");
  if (stride < 1) throw InvalidArgumentError("stride must be at least 1");
  require_coupled_gate(params, FlowState{0.0, omega0, H0});

  CoupledTrajectory out;
  out.constants = conserved_constants(omega0);
  const ConservedConstants& c = out.constants;
  const auto rhs = [&](double t, const CoupledVector& y) {
    return coupled_rhs(params, to_state(t, y, c), c, kappa, tau, alpha_prime);
  };

  CoupledVector y{omega0.r2, H0.tr2, H0.ts2, H0.tk2};
  double t = 0.0;
  out.states.push_back({0.0, omega0, H0});
  long long n = 0;
  while (t < t_max) {
    double step = std::min(dt, t_max - t);
    if (t_max - (t + step) < 1e-12 * dt) step = t_max - t;
    CoupledVector next{};
    bool ok = false;
    for (int halvings = 0; halvings <= kMaxHalvings && !ok; ++halvings) {
      if (halvings > 0) step *= 0.5;
      const CoupledDerivative a = rhs(t, y);
      const CoupledVector y2 = axpy(y, 0.5 * step, a);
      if (!positive(y2)) continue;
      const CoupledDerivative b = rhs(t + 0.5 * step, y2);
      const CoupledVector y3 = axpy(y, 0.5 * step, b);
      if (!positive(y3)) continue;
      const CoupledDerivative cc = rhs(t + 0.5 * step, y3);
      const CoupledVector y4 = axpy(y, step, cc);
      if (!positive(y4)) continue;
      const CoupledDerivative d = rhs(t + step, y4);
      next = {y.r2 + step / 6.0 * (a.r2 + 2.0 * b.r2 + 2.0 * cc.r2 + d.r2),
              y.tr2 + step / 6.0 * (a.tr2 + 2.0 * b.tr2 + 2.0 * cc.tr2 + d.tr2),
              y.ts2 + step / 6.0 * (a.ts2 + 2.0 * b.ts2 + 2.0 * cc.ts2 + d.ts2),
              y.tk2 + step / 6.0 * (a.tk2 + 2.0 * b.tk2 + 2.0 * cc.tk2 + d.tk2)};
      ok = positive(next);
    }
    if (!ok) {
      out.blow_down = true;
      break;
    }
    t = (step == t_max - t) ? t_max : t + step;
    y = next;
    ++n;
    out.t_last = t;
    if (n % stride == 0 || t >= t_max) out.states.push_back(to_state(t, y, c));
  }
  return out;
}

std::vector<double> stationary_kappa_values(const ConservedConstants& c, int rho) {
  if (rho != 0 && rho != 1)
    throw InvalidArgumentError("stationary_kappa_values: rho must be 0 or 1");
  const double a = c.c2 - rho * c.c1;
  if (a == 0.0) return {0.0};
  if (rho == 0) return {-1.0};
  const double root = 2.0 * std::sqrt(c.c1 * c.c2);
  const double den = c.c1 - c.c2;
  return {(c.c1 + c.c2 - root) / den, (c.c1 + c.c2 + root) / den};
}

double HsiResiduals::max() const {
  return std::max({bundle_hym, bundle_type, anomaly, conformally_balanced,
                   tangent_hym, tangent_type});
}

namespace {

struct TypeAndHym {
  double hym = 0.0;
  double type = 0.0;
};

TypeAndHym raw_instanton_residuals(const CurvatureForms& curv, const Form& omega2,
                                   const ComplexFrame& frame) {
  TypeAndHym out;
  for (int i = 1; i <= kDim; ++i)
    for (int j = i + 1; j <= kDim; ++j) {
      const Form& f = curv(i, j);
      out.hym = std::max(out.hym, wedge(omega2, f).max_abs());
      out.type = std::max({out.type, pq_component(f, frame, 2, 0).max_abs(),
                           pq_component(f, frame, 0, 2).max_abs()});
    }
  return out;
}

}  // namespace

HsiResiduals hsi_residuals(const JParams& params, const MetricCoeffs& omega,
                           const BundleMetricCoeffs& H, double tau, double kappa,
                           double alpha_prime) {
  if (params.lambda() != 0.0)
    throw UnsupportedParametersError("hsi_residuals requires lambda = 0");
  if (!omega.is_diagonal())
    throw UnsupportedParametersError("hsi_residuals requires a diagonal omega");
  const HermitianStructure h = make_structure(params, omega);
  const ComplexFrame& frame = h.basis.frame;
  const Form omega2 = wedge(h.omega, h.omega);

  const CurvatureForms rm = curvature(connection_one_forms_tau(h.sc, tau), h.sc);
  const CurvatureForms a = bundle_curvature(params, omega, H, kappa);

  HsiResiduals out;
  const TypeAndHym bundle = raw_instanton_residuals(a, omega2, frame);
  out.bundle_hym = bundle.hym;
  out.bundle_type = bundle.type;
  const TypeAndHym tangent = raw_instanton_residuals(rm, omega2, frame);
  out.tangent_hym = tangent.hym;
  out.tangent_type = tangent.type;

  const Form tr_a = trace_wedge(a);
  const Form anomaly =
      i_ddbar_omega(h) - (alpha_prime / 4.0) * (trace_wedge(rm) - tr_a);
  out.anomaly = anomaly.max_abs();
  out.conformally_balanced = psi_norm(omega) * d_omega_squared(h).max_abs();
  out.bundle_trace = zeta_1212_coefficient(tr_a, h.basis.coeffs.delta_e).real();
  return out;
}

std::string to_string(CollapseLimit limit) {
  switch (limit) {
    case CollapseLimit::kTorus:
      return "torus";
    case CollapseLimit::kPoint:
      return "point";
    case CollapseLimit::kUndetermined:
      return "undetermined";
  }
  return "undetermined";
}

CollapseProfile collapse_diagnostic(const std::vector<FlowState>& trajectory) {
  CollapseProfile out;
  for (const FlowState& s : trajectory) {
    const double w = 1.0 / (1.0 + s.t);
    out.scaled.push_back({s.t, w * s.omega.r2, w * s.omega.s2, w * s.omega.k2});
  }
  if (trajectory.size() < 2 || !(trajectory.back().t > 0.0)) return out;
  out.limit = out.scaled.back();

  const FlowState& last = trajectory.back();
  const double t_mid = 0.5 * last.t;
  const auto mid_it = std::min_element(
      trajectory.begin(), trajectory.end() - 1, [&](const FlowState& a, const FlowState& b) {
        return std::abs(a.t - t_mid) < std::abs(b.t - t_mid);
      });
  const double span = std::log((1.0 + last.t) / (1.0 + mid_it->t));
  if (!(span > 0.0)) return out;
  const auto exponent = [&](double a, double b) { return std::log(b / a) / span; };
  out.r2_exponent = exponent(mid_it->omega.r2, last.omega.r2);
  out.s2_exponent = exponent(mid_it->omega.s2, last.omega.s2);
  out.k2_exponent = exponent(mid_it->omega.k2, last.omega.k2);
  out.r2_vanishes = out.r2_exponent < 0.5;
  out.s2_vanishes = out.s2_exponent < 0.5;
  out.k2_vanishes = out.k2_exponent < 0.5;
  if (out.r2_vanishes && out.s2_vanishes && out.k2_vanishes)
    out.limit_kind = CollapseLimit::kPoint;
  else if (!out.r2_vanishes && !out.s2_vanishes && out.k2_vanishes)
    out.limit_kind = CollapseLimit::kTorus;
  return out;
}

}  // namespace nilflow

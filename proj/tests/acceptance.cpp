#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nilflow/anomaly_flow.hpp"
#include "nilflow/gauduchon.hpp"
#include "nilflow/hermitian.hpp"
#include "nilflow/sampling.hpp"
#include "nilflow/verification.hpp"

namespace {

using namespace nilflow;

const JParams kN3(0, 0.0, -1.0, 0.0);

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

const CheckSummary& check(const VerifyReport& r, const std::string& name) {
  for (const CheckSummary& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("missing check " + name);
}

/// Shared by criteria 1 and 2.
const VerifyReport& tangent_report() {
  static const VerifyReport report = [] {
    VerifyOptions o;
    o.draws = 100;
    return verify_tangent_oracles(o);
  }();
  return report;
}

Outcome ac1_curvature_oracles() {
  const VerifyReport& r = tangent_report();
  const CheckSummary& c = check(r, "curvature");
  const CheckSummary& s = check(r, "connection");
  const bool ok = c.passed && s.passed && r.seconds < 10.0;
  return {ok, "100 draws, worst curvature error " + sci(c.worst_error) + " at " + c.worst_entry +
                  ", connection " + sci(s.worst_error) + ", " + sci(r.seconds) + " s"};
}

Outcome ac2_trace() {
  const VerifyReport& r = tangent_report();
  const CheckSummary& t = check(r, "trace");
  const CheckSummary& off = check(r, "trace_off_component");
  return {t.passed && off.passed,
          "worst trace error " + sci(t.worst_error) + ", off-component ratio " +
              sci(off.worst_error)};
}

Outcome ac3_bundle_oracles() {
  VerifyOptions o;
  o.draws = 100;
  const VerifyReport r = verify_bundle_oracles(o);
  const CheckSummary& c = check(r, "bundle_curvature");
  const CheckSummary& t = check(r, "bundle_trace");
  return {r.passed(), "100 draws, worst curvature error " + sci(c.worst_error) + ", trace " +
                          sci(t.worst_error) + ", off-component " +
                          sci(check(r, "bundle_trace_off_component").worst_error)};
}

double constants_drift(const ConservedConstants& a, const ConservedConstants& b) {
  const double scale = std::max(a.c1, a.c2);
  return std::max({std::abs(a.c1 - b.c1) / a.c1, std::abs(a.c2 - b.c2) / a.c2,
                   std::abs(a.c3 - b.c3) / scale, std::abs(a.c4 - b.c4) / scale,
                   std::abs(a.c5 - b.c5) / scale});
}

Outcome ac4_conservation() {
  const MetricCoeffs omega0 = MetricCoeffs::diagonal(1.2, 0.8, 1.1);
  const CoupledTrajectory coupled = integrate_coupled(kN3, omega0, {0.9, 1.3, 0.7}, 0.4, -1.0,
                                                      0.3, 1e-3, 10.0, 100);
  const ConservedConstants c0 = conserved_constants(omega0);
  double coupled_drift = 0.0;
  for (const FlowState& s : coupled.states)
    coupled_drift = std::max(coupled_drift, constants_drift(c0, conserved_constants(s.omega)));

  // Flat-bundle reconstruction from a general metric on N3.
  MetricCoeffs general = MetricCoeffs::diagonal(1.4, 0.9, 1.2);
  general.u = Complex(0.2, -0.1);
  general.v = Complex(-0.15, 0.1);
  general.z = Complex(0.05, 0.2);
  const FlatFlowRun flat = run_flat_flow(kN3, general, 0.3, -1.0, 1e-3, 10.0, 100);
  const ConservedConstants g0 = conserved_constants(general);
  double flat_drift = 0.0;
  double k_drift = 0.0;
  for (const FlowState& s : flat.states) {
    flat_drift = std::max(flat_drift, constants_drift(g0, conserved_constants(s.omega)));
    k_drift = std::max(k_drift, std::abs(s.omega.k2 - general.k2));
  }
  const bool reached = !coupled.blow_down && coupled.states.back().t >= 10.0 - 1e-9 &&
                       !flat.trajectory.blow_down;
  return {reached && coupled_drift < 1e-8 && flat_drift < 1e-8 && k_drift < 1e-12,
          "coupled drift " + sci(coupled_drift) + ", flat drift " + sci(flat_drift) +
              ", k^2 drift " + sci(k_drift)};
}

/// Checks the numeric behaviour of one (K1, K2, h0) cell against its class.
/// Returns an empty string on agreement, otherwise the first disagreement.
std::string check_cell(double K1, double K2, double h0) {
  const QualitativeClass q = classify_model(K1, K2, h0);
  const double T = K1 != 0.0 ? 1e3 / std::abs(K1) : 1e3;
  const double dt = 1e-3;
  const ModelTrajectory fwd = integrate_model(K1, K2, h0, dt, T, 1000);
  const ModelTrajectory bwd = integrate_model(-K1, -K2, h0, dt, T, 1000);
  const auto residual = [&](double h) { return std::abs(K1 + K2 / (h * h)); };
  const auto monotone = [&](const ModelTrajectory& tr, double direction) {
    for (std::size_t i = 1; i < tr.samples.size(); ++i)
      if (direction * (tr.samples[i].h - tr.samples[i - 1].h) < -1e-12) return false;
    return true;
  };
  const auto slope = [&](const ModelTrajectory& tr) {
    const ModelSample& end = tr.samples.back();
    const ModelSample& mid = tr.samples[tr.samples.size() / 2];
    return (end.h - mid.h) / (end.t - mid.t);
  };
  const double h_rate = K1 + K2 / (h0 * h0);
  const double dir = h_rate > 0 ? 1.0 : (h_rate < 0 ? -1.0 : 0.0);

  if (q.kind == FlowKind::kStationary) {
    double dev = 0.0;
    for (const auto* tr : {&fwd, &bwd})
      for (const ModelSample& s : tr->samples) dev = std::max(dev, std::abs(s.h - h0));
    if (fwd.blow_down || bwd.blow_down) return "stationary cell blew down";
    if (dev > 1e-10) return "stationary cell drifted by " + sci(dev);
    if (residual(h0) > 1e-10) return "fixed-point residual " + sci(residual(h0));
    return {};
  }
  const bool fwd_global = q.kind == FlowKind::kImmortal || q.kind == FlowKind::kEternal;
  const bool bwd_global = q.kind == FlowKind::kAncient || q.kind == FlowKind::kEternal;
  if (fwd.blow_down == fwd_global) return "forward blow-down flag disagrees";
  if (bwd.blow_down == bwd_global) return "backward blow-down flag disagrees";
  if (!monotone(fwd, dir) || !monotone(bwd, -dir)) return "not monotone";
  if (q.forward_slope && std::abs(slope(fwd) - *q.forward_slope) > 0.01 * std::abs(K1))
    return "forward slope " + sci(slope(fwd));
  // Backward time s = -t: h ~ K1 t means dh/ds -> -K1.
  if (q.backward_slope && std::abs(slope(bwd) + *q.backward_slope) > 0.01 * std::abs(K1))
    return "backward slope " + sci(slope(bwd));
  if (q.converges_forward && residual(fwd.samples.back().h) > 1e-10)
    return "forward fixed-point residual " + sci(residual(fwd.samples.back().h));
  if (q.converges_backward && residual(bwd.samples.back().h) > 1e-10)
    return "backward fixed-point residual " + sci(residual(bwd.samples.back().h));
  if (q.t_plus && std::abs(fwd.t_last - *q.t_plus) > 1e-3 * std::max(1.0, *q.t_plus))
    return "T+ estimate " + sci(fwd.t_last);
  if (q.t_minus && std::abs(bwd.t_last + *q.t_minus) > 1e-3 * std::max(1.0, -*q.t_minus))
    return "T- estimate " + sci(-bwd.t_last);
  return {};
}

Outcome ac5_classification() {
  int cells = 0;
  std::string failures;
  for (double K1 : {-1.0, 0.0, 1.0})
    for (double K2 : {-4.0, 0.0, 4.0}) {
      std::vector<double> h0s{0.5, 1.0, 2.0};
      if (K1 * K2 < 0.0) {
        const double hs = std::sqrt(-K2 / K1);
        h0s = {hs / 2.0, hs, 2.0 * hs};
      }
      for (double h0 : h0s) {
        ++cells;
        const std::string why = check_cell(K1, K2, h0);
        if (!why.empty()) {
          std::ostringstream os;
          os << " (" << K1 << "," << K2 << "," << h0 << "): " << why << ";";
          failures += os.str();
        }
      }
    }
  return {failures.empty(),
          std::to_string(cells) + " cells" + (failures.empty() ? ", all agree" : failures)};
}

int sign_of(double v) { return (v > 0) - (v < 0); }

Outcome ac6_sign_law() {
  Rng rng(606);
  int mismatches = 0;
  for (int n = 0; n < 1000; ++n) {
    // Every fourth draw sits on the pluriclosed locus.
    JParams p = random_params(rng);
    if (n % 4 == 0) p = JParams(p.rho(), p.lambda(), (p.rho() + p.lambda() * p.lambda()) / 2, p.y());
    const MetricCoeffs m = random_metric(rng);
    const double K1 = model_constants(p, m, 1.0, 0.0).K1;
    const int law = sign_of(p.pluriclosed_defect());
    const int numeric = std::abs(K1) < 1e-12 ? 0 : sign_of(K1);
    if (numeric != law || sign_of(gamma1(p, m)) != law || k1_sign(p, m) != law) ++mismatches;
  }
  std::string rows_bad;
  for (const K1SignRow& r : k1_sign_table()) {
    bool ok = true;
    if (r.group == "N3") ok = r.negative && !r.zero && r.positive;
    if (r.group == "N8") ok = !r.negative && r.zero && !r.positive;
    if (r.group == "N2" || r.group == "N5") ok = r.negative && r.zero && r.positive;
    if (r.group == "N6") ok = !r.sampled && !r.negative && !r.zero && r.positive;
    if (!ok) rows_bad += " " + r.group;
  }
  return {mismatches == 0 && rows_bad.empty(),
          "1000 draws, " + std::to_string(mismatches) + " sign mismatches; table rows" +
              (rows_bad.empty() ? " reproduced" : " wrong:" + rows_bad)};
}

Outcome ac7_chern() {
  const MetricCoeffs omega0 = MetricCoeffs::diagonal(1, 1, 1);
  const double tau = -1.0;
  const ModelConstants unit = model_constants(kN3, omega0, 1.0, tau);
  const double alpha_prime = -unit.K1 / unit.K2;
  const CoupledTrajectory tr = integrate_coupled(kN3, omega0, {1.0, 1.0, 1.0}, 1.0, tau,
                                                 alpha_prime, 1e-3, 10.0, 10);
  double err = 0.0;
  double r2_drift = 0.0;
  for (const FlowState& s : tr.states) {
    err = std::max(err, std::abs(std::sqrt(s.H->tr2) - std::pow(2.0 * s.t + 1.0, 1.0 / 12.0)));
    r2_drift = std::max(r2_drift, std::abs(s.omega.r2 - 1.0));
  }
  const bool ok = !tr.blow_down && tr.states.back().t >= 10.0 - 1e-9 && err < 1e-6;
  return {ok, "sup |r~ - (2t+1)^(1/12)| = " + sci(err) + ", r^2 drift " + sci(r2_drift) +
                  ", alpha' = " + sci(alpha_prime)};
}

Outcome ac8_bismut() {
  const MetricCoeffs omega0 = MetricCoeffs::diagonal(1, 1, 1);
  const BundleMetricCoeffs H0{1.0, 1.0, 2.0};
  const double alpha_prime = 1.0;
  const ConservedConstants c = conserved_constants(omega0);
  const ModelConstants flat = model_constants(kN3, omega0, alpha_prime, -1.0);
  const double trace_A = closed_form_trace_kappa(kN3, omega0, H0, -1.0);
  const double K1 = flat.K1 + alpha_prime * c.c1 * trace_A / 16.0;
  const double K2 = flat.K2;
  if (!(K1 * K2 < 0.0)) return {false, "K1 and K2 do not have opposite signs"};

  const CoupledTrajectory tr =
      integrate_coupled(kN3, omega0, H0, -1.0, -1.0, alpha_prime, 1e-3, 30.0, 1000);
  const FlowState& last = tr.states.back();
  const double r2 = last.omega.r2;
  const double model_residual = std::abs(K1 + K2 / (r2 * r2));
  const HsiResiduals res = hsi_residuals(kN3, last.omega, *last.H, -1.0, -1.0, alpha_prime);
  const double groups = std::max({res.bundle_hym, res.bundle_type, res.anomaly,
                                  res.conformally_balanced, res.tangent_hym, res.tangent_type});
  const double r4 = last.H->tr2 * last.H->tr2, s4 = last.H->ts2 * last.H->ts2;
  const double expected_trace = -8.0 * (r4 + s4) * last.H->tk2 * last.H->tk2 / (r4 * s4);
  const double unit_trace =
      hsi_residuals(kN3, omega0, {1.0, 1.0, 1.0}, -1.0, -1.0, alpha_prime).bundle_trace;
  const bool ok = !tr.blow_down && model_residual < 1e-12 && groups < 1e-10 &&
                  std::abs(res.bundle_trace - expected_trace) < 1e-10 &&
                  std::abs(unit_trace + 16.0) < 1e-12;
  return {ok, "r^2 -> " + sci(r2) + ", |K1 + K2/r^4| = " + sci(model_residual) +
                  ", max HSI residual " + sci(groups) + ", Tr A coefficient " +
                  sci(res.bundle_trace) + " (unit H: " + sci(unit_trace) + ")"};
}

/// Balanced structure with arbitrary u and v = z = 0, (x, y) solved from the
/// balanced condition.
std::pair<JParams, MetricCoeffs> random_balanced(Rng& rng) {
  const MetricCoeffs m = random_almost_diagonal_metric(rng);
  const double lambda = rng.uniform(0.0, 2.0);
  return {JParams(rng.integer(0, 1), lambda, (lambda * m.u.imag() - m.s2) / m.r2,
                  lambda * m.u.real() / m.r2),
          m};
}

Outcome ac9_preservation() {
  Rng rng(909);
  int balanced_changes = 0, balanced_start = 0;
  for (int n = 0; n < 20; ++n) {
    const auto [p, m] = n % 2 == 0
                            ? random_balanced(rng)
                            : std::pair<JParams, MetricCoeffs>{random_params(rng),
                                                               random_metric(rng)};
    const FlatFlowRun run = run_flat_flow(p, m, rng.uniform(-1, 1), rng.uniform(-3, 3), 1e-3,
                                          2.0, 200);
    const bool b0 = is_balanced(p, m);
    balanced_start += b0;
    for (const FlowState& s : run.states) balanced_changes += is_balanced(p, s.omega) != b0;
  }

  const JParams gate(0, 0.0, 1.0, 0.0);
  int lck_changes = 0, lck_start = 0;
  for (int n = 0; n < 20; ++n) {
    MetricCoeffs m = random_metric(rng);
    if (n % 2 == 0) {
      m.u = Complex(0, 1) * m.z * std::conj(m.v) / m.k2;
      m.s2 = m.r2 + (std::norm(m.v) - std::norm(m.z)) / m.k2;
    }
    const FlatFlowRun run =
        run_flat_flow(gate, m, rng.uniform(-1, 1), rng.uniform(-3, 3), 1e-3, 2.0, 200);
    const bool l0 = is_lck(gate, m);
    lck_start += l0;
    for (const FlowState& s : run.states) lck_changes += is_lck(gate, s.omega) != l0;
  }

  int psi_mismatches = 0, psi_balanced = 0;
  for (int n = 0; n < 100; ++n) {
    const auto [p, m] = n % 2 == 0
                            ? random_balanced(rng)
                            : std::pair<JParams, MetricCoeffs>{random_params(rng),
                                                               random_metric(rng)};
    double tau = rng.uniform(-3.0, 3.0);
    if (std::abs(tau - 1.0) < 0.05) tau = -1.0;
    const bool b = is_balanced(p, m);
    psi_balanced += b;
    psi_mismatches += nabla_psi_check(p, make_structure(p, m).basis.coeffs, tau) != b;
  }
  const bool ok = balanced_changes == 0 && lck_changes == 0 && psi_mismatches == 0 &&
                  balanced_start == 10 && lck_start == 10 && psi_balanced >= 50;
  return {ok, "balanced flips " + std::to_string(balanced_changes) + " (" +
                  std::to_string(balanced_start) + "/20 balanced), lcK flips " +
                  std::to_string(lck_changes) + " (" + std::to_string(lck_start) +
                  "/20 lcK), nabla Psi vs balanced mismatches " +
                  std::to_string(psi_mismatches) + "/100"};
}

Outcome ac10_structural() {
  VerifyOptions o;
  o.draws = 1000;
  const VerifyReport r = verify_structural(o);
  double worst = 0.0;
  for (const CheckSummary& c : r.checks) worst = std::max(worst, c.worst_error);
  return {r.passed() && r.seconds < 5.0,
          "1000 draws, worst error " + sci(worst) + ", " + sci(r.seconds) + " s"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 curvature oracles", ac1_curvature_oracles},
      {"AC2 trace coefficient", ac2_trace},
      {"AC3 bundle oracles", ac3_bundle_oracles},
      {"AC4 conserved quantities", ac4_conservation},
      {"AC5 model classification", ac5_classification},
      {"AC6 sign of K1", ac6_sign_law},
      {"AC7 Chern bundle closed form", ac7_chern},
      {"AC8 Bismut HSI solution", ac8_bismut},
      {"AC9 preservation", ac9_preservation},
      {"AC10 structural suite", ac10_structural},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.passed;
    std::printf("%s %-30s %s\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

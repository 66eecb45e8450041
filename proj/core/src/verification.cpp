#include "nilflow/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include "nilflow/errors.hpp"
#include "nilflow/gauduchon.hpp"
#include "nilflow/io.hpp"
#include "nilflow/sampling.hpp"
#include "nilflow/tolerance.hpp"

namespace nilflow {

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckSummary& c) { return c.informational || c.passed; });
}

const CheckSummary* VerifyReport::worst() const {
  const CheckSummary* out = nullptr;
  for (const CheckSummary& c : checks) {
    if (c.informational) continue;
    if (!c.passed) return &c;
    if (!out || c.worst_error > out->worst_error) out = &c;
  }
  return out;
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j;
  j["suite"] = suite;
  j["passed"] = passed();
  j["seconds"] = seconds;
  j["checks"] = nlohmann::json::array();
  for (const CheckSummary& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"worst_error", c.worst_error},
                           {"worst_draw", c.worst_draw},
                           {"worst_entry", c.worst_entry},
                           {"informational", c.informational},
                           {"passed", c.passed}});
  }
  j["draws"] = nlohmann::json::array();
  for (const DrawRecord& d : draws)
    j["draws"].push_back({{"index", d.index}, {"inputs", d.inputs}, {"errors", d.errors}});
  return j;
}

namespace {

std::string mask_name(Mask m) {
  std::string s = "e^{";
  for (int b = 0; b < kDim; ++b)
    if (m & (1u << b)) s += std::to_string(b + 1);
  return s + "}";
}

std::string entry_name(const std::string& symbol, const EntryComparison& c) {
  return symbol + "^" + std::to_string(c.i) + "_" + std::to_string(c.j) + " " +
         mask_name(c.mask);
}

/// Accumulates per-draw errors into check summaries, in insertion order.
class Collector {
 public:
  Collector(VerifyReport& report, double tolerance) : report_(report), tol_(tolerance) {}

  void add(const std::string& name, int draw, double error, const std::string& where,
           double threshold = -1.0, bool informational = false) {
    auto it = index_.find(name);
    if (it == index_.end()) {
      CheckSummary s;
      s.name = name;
      s.informational = informational;
      report_.checks.push_back(s);
      thresholds_.push_back(threshold < 0.0 ? tol_ : threshold);
      it = index_.emplace(name, report_.checks.size() - 1).first;
    }
    CheckSummary& s = report_.checks[it->second];
    const double bound = thresholds_[it->second];
    const double e = std::isnan(error) ? INFINITY : error;
    if (s.worst_draw < 0 || e > s.worst_error) {
      s.worst_error = e;
      s.worst_draw = draw;
      s.worst_entry = where;
    }
    if (!(e <= bound)) s.passed = false;
    report_.draws.back().errors[name] = e;
  }

 private:
  VerifyReport& report_;
  double tol_;
  std::map<std::string, std::size_t> index_;
  std::vector<double> thresholds_;
};

double scalar_error(double brute, double closed) {
  return std::abs(brute - closed) /
         std::max(std::abs(closed), tol::kAbsoluteFloor / tol::kRelative);
}

void require_draws(const VerifyOptions& o) {
  if (o.draws < 0) throw InvalidArgumentError("number of draws must be non-negative");
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

VerifyReport verify_tangent_oracles(const VerifyOptions& o) {
  require_draws(o);
  const auto start = std::chrono::steady_clock::now();
  VerifyReport report;
  report.suite = "tangent";
  Collector col(report, o.tolerance);
  Rng rng(o.seed);
  const Mask perturbed = mask_of({1, 3});
  for (int n = 0; n < o.draws; ++n) {
    const JParams p = random_params(rng);
    const MetricCoeffs m = random_metric(rng);
    const double tau = rng.uniform(-3.0, 3.0);
    report.draws.push_back({n, {{"params", p}, {"metric", m}, {"tau", tau}}, {}});

    const HermitianStructure h = make_structure(p, m);
    const AdaptedCoeffs& a = h.basis.coeffs;
    const ConnectionForms sb = connection_one_forms_tau(h.sc, tau);
    const EntryComparison cs = compare_entries(sb, closed_form_connection_tau(p, a, tau));
    col.add("connection", n, cs.max_relative_error, entry_name("sigma", cs));

    const CurvatureForms ob = curvature(sb, h.sc);
    CurvatureForms oc = closed_form_curvature_tau(p, a, tau);
    oc(1, 2)[perturbed] += o.perturbation;
    oc(2, 1)[perturbed] -= o.perturbation;
    const EntryComparison cc = compare_entries(ob, oc);
    col.add("curvature", n, cc.max_relative_error, entry_name("Omega", cc));

    const EntryComparison cp =
        compare_entries(ob, closed_form_curvature_tau(p, a, tau, TableVariant::kUncorrected));
    col.add("curvature_uncorrected", n, cp.max_relative_error, entry_name("Omega", cp), -1.0,
            true);

    const Form tr = trace_wedge(ob);
    const double c_brute = zeta_1212_coefficient(tr, a.delta_e).real();
    const double c_closed = closed_form_trace_tau(p, a, tau);
    col.add("trace", n, scalar_error(c_brute, c_closed), "Tr coefficient");
    col.add("trace_off_component", n, off_1234_ratio(tr), "Tr off zeta^{12 1bar 2bar}",
            o.off_component_tolerance);
  }
  report.seconds = seconds_since(start);
  return report;
}

VerifyReport verify_bundle_oracles(const VerifyOptions& o) {
  require_draws(o);
  const auto start = std::chrono::steady_clock::now();
  VerifyReport report;
  report.suite = "bundle";
  Collector col(report, o.tolerance);
  Rng rng(o.seed ^ 0x9e3779b97f4a7c15ULL);
  const Mask perturbed = mask_of({1, 3});
  for (int n = 0; n < o.draws; ++n) {
    const JParams p = random_params_lambda0(rng);
    const MetricCoeffs m = random_diagonal_metric(rng);
    const BundleMetricCoeffs H = random_bundle_metric(rng);
    const double kappa = rng.uniform(-3.0, 3.0);
    report.draws.push_back(
        {n, {{"params", p}, {"metric", m}, {"bundle", H}, {"kappa", kappa}}, {}});

    const EntryComparison cs = compare_entries(bundle_connection_kappa(p, m, H, kappa),
                                               closed_form_bundle_connection_kappa(p, m, H, kappa));
    col.add("bundle_connection", n, cs.max_relative_error, entry_name("sigma", cs));

    const CurvatureForms ab = bundle_curvature(p, m, H, kappa);
    CurvatureForms ac = bundle_curvature_closed_form(p, m, H, kappa);
    ac(1, 2)[perturbed] += o.perturbation;
    ac(2, 1)[perturbed] -= o.perturbation;
    const EntryComparison cc = compare_entries(ab, ac);
    col.add("bundle_curvature", n, cc.max_relative_error, entry_name("A", cc));

    const EntryComparison cp =
        compare_entries(ab, bundle_curvature_closed_form(p, m, H, kappa, TableVariant::kUncorrected));
    col.add("bundle_curvature_uncorrected", n, cp.max_relative_error, entry_name("A", cp), -1.0,
            true);

    const Form tr = trace_wedge(ab);
    const double delta = std::sqrt(m.r2 * m.s2);
    const double c_brute = zeta_1212_coefficient(tr, delta).real();
    const double c_closed = closed_form_trace_kappa(p, m, H, kappa);
    col.add("bundle_trace", n, scalar_error(c_brute, c_closed), "Tr A coefficient");
    col.add("bundle_trace_off_component", n, off_1234_ratio(tr), "Tr A off zeta^{12 1bar 2bar}",
            o.off_component_tolerance);
  }
  report.seconds = seconds_since(start);
  return report;
}

namespace {

Form random_form(Rng& rng, int degree = -1) {
  Form f;
  for (int m = 0; m < kBasisSize; ++m) {
    if (degree >= 0 && nilflow::degree(static_cast<Mask>(m)) != degree) continue;
    const double re = rng.uniform(-1.0, 1.0);
    const double im = rng.uniform(-1.0, 1.0);
    f[static_cast<Mask>(m)] = Complex(re, im);
  }
  return f;
}

double rel(const Form& diff, double scale) {
  return diff.max_abs() / std::max(scale, 1.0);
}

}  // namespace

VerifyReport verify_structural(const VerifyOptions& o) {
  require_draws(o);
  const auto start = std::chrono::steady_clock::now();
  VerifyReport report;
  report.suite = "structural";
  Collector col(report, o.tolerance);
  Rng rng(o.seed ^ 0xd1b54a32d192ed03ULL);
  for (int n = 0; n < o.draws; ++n) {
    const JParams p = random_params(rng);
    const MetricCoeffs m = random_metric(rng);
    const HermitianStructure h = make_structure(p, m);
    const StructureConstants& sc = h.sc;
    const double s = std::max(1.0, sc.max_abs());
    const int pa = rng.integer(0, kDim);
    const int pb = rng.integer(0, kDim);
    const Form a = random_form(rng, pa);
    const Form b = random_form(rng, pb);
    const Form mixed = random_form(rng);
    report.draws.push_back({n, {{"params", p}, {"metric", m}, {"deg_a", pa}, {"deg_b", pb}}, {}});

    col.add("d_squared", n, rel(d(d(mixed, sc), sc), s * s * mixed.max_abs()), "d d a");

    const double sign = (pa * pb) % 2 == 0 ? 1.0 : -1.0;
    const Form ab = wedge(a, b);
    col.add("graded_commutativity", n, rel(ab - sign * wedge(b, a), ab.max_abs()),
            "a^b - (-1)^{pq} b^a");

    const double lsign = pa % 2 == 0 ? 1.0 : -1.0;
    const Form lhs = d(ab, sc);
    const Form rhs = wedge(d(a, sc), b) + lsign * wedge(a, d(b, sc));
    col.add("leibniz", n, rel(lhs - rhs, s * a.max_abs() * b.max_abs()), "d(a^b)");

    const std::map<Bidegree, Form> parts = decompose_pq(mixed, h.basis.frame);
    Form sum;
    double purity = 0.0;
    double bidegree_leak = 0.0;
    for (const auto& [bd, part] : parts) {
      sum += part;
      const auto again = decompose_pq(part, h.basis.frame);
      for (const auto& [bd2, piece] : again)
        if (bd2 != bd) purity = std::max(purity, piece.max_abs());
      const Form dpart = d(part, sc);
      for (const auto& [bd2, piece] : decompose_pq(dpart, h.basis.frame)) {
        const bool allowed = (bd2.first == bd.first + 1 && bd2.second == bd.second) ||
                             (bd2.first == bd.first && bd2.second == bd.second + 1);
        if (!allowed) bidegree_leak = std::max(bidegree_leak, piece.max_abs());
      }
    }
    col.add("pq_reconstruction", n,
            std::max(rel(sum - mixed, mixed.max_abs()), purity / std::max(1.0, mixed.max_abs())),
            "sum of (p,q) parts");
    col.add("integrability_bidegree", n, bidegree_leak / (s * std::max(1.0, mixed.max_abs())),
            "d of a (p,q) form");
  }
  report.seconds = seconds_since(start);
  return report;
}

}  // namespace nilflow

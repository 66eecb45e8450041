#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nilflow/anomaly_flow.hpp"
#include "nilflow/errors.hpp"
#include "nilflow/gauduchon.hpp"
#include "nilflow/io.hpp"
#include "nilflow/verification.hpp"

namespace {

using nlohmann::json;
using namespace nilflow;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalidConfig = 2;

/// Raised for configurations that parse but are inconsistent.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a subcommand needs; filled from flags and the optional JSON
/// config file, with flags taking precedence.
struct RunConfig {
  std::string group = "N3";
  std::optional<int> rho;
  std::optional<double> lambda;
  std::optional<double> x;
  std::optional<double> y;
  std::vector<double> metric;
  std::vector<double> bundle;
  double tau = -1.0;
  double kappa = -1.0;
  double alpha_prime = 0.0;
  double dt = 1e-3;
  double t_max = 10.0;
  std::uint64_t seed = 20240601;
  std::string out;
  std::string format = "csv";
  std::string config_path;

  int draws = 100;
  std::string suite = "all";
  double perturbation = 0.0;
  int stride = 100;
  bool no_flow = false;
  std::vector<double> k1_values{-1.0, 0.0, 1.0};
  std::vector<double> k2_values{-4.0, 0.0, 4.0};
  std::vector<double> h0_values;
  int samples = 400;
};

JParams group_defaults(const std::string& g) {
  if (g == "N2") return {0, 0.0, 0.0, 1.0};
  if (g == "N3") return {0, 0.0, -1.0, 0.0};
  if (g == "N5") return {1, 0.0, 0.0, 0.0};
  if (g == "N8") return {0, 0.0, 0.0, 0.0};
  throw ConfigError("unknown group '" + g + "' (expected N2, N3, N5 or N8)");
}

JParams params_of(const RunConfig& c) {
  const JParams base = group_defaults(c.group);
  try {
    return {c.rho.value_or(base.rho()), c.lambda.value_or(base.lambda()),
            c.x.value_or(base.x()), c.y.value_or(base.y())};
  } catch (const InvalidArgumentError& e) {
    throw ConfigError(e.what());
  }
}

MetricCoeffs metric_of(const RunConfig& c) {
  const std::vector<double>& m = c.metric;
  if (m.empty()) return MetricCoeffs::diagonal(1.0, 1.0, 1.0);
  if (m.size() != 3 && m.size() != 5 && m.size() != 9)
    throw ConfigError("--metric takes 3, 5 or 9 values: r2,s2,k2[,u_re,u_im[,v_re,v_im,z_re,z_im]]");
  MetricCoeffs out = MetricCoeffs::diagonal(m[0], m[1], m[2]);
  if (m.size() >= 5) out.u = {m[3], m[4]};
  if (m.size() == 9) {
    out.v = {m[5], m[6]};
    out.z = {m[7], m[8]};
  }
  return out;
}

std::optional<BundleMetricCoeffs> bundle_of(const RunConfig& c) {
  if (c.bundle.empty()) return std::nullopt;
  if (c.bundle.size() != 3) throw ConfigError("--bundle takes 3 values: tr2,ts2,tk2");
  return BundleMetricCoeffs{c.bundle[0], c.bundle[1], c.bundle[2]};
}

void validate(const RunConfig& c) {
  if (!(c.dt > 0.0)) throw ConfigError("--dt must be positive");
  if (!(c.t_max > 0.0)) throw ConfigError("--t-max must be positive");
  if (c.format != "csv" && c.format != "json")
    throw ConfigError("--format must be csv or json");
  if (c.draws < 0) throw ConfigError("--draws must be non-negative");
  if (c.stride < 1) throw ConfigError("--stride must be at least 1");
}

/// Copies config-file values into options that were not given on the
/// command line.
void apply_config_file(RunConfig& c, const CLI::App& app) {
  if (c.config_path.empty()) return;
  std::ifstream in(c.config_path);
  if (!in) throw ConfigError("cannot open config file " + c.config_path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");

  const auto given = [&](const std::string& flag) {
    for (const CLI::App* a : {&app, app.get_subcommands().empty()
                                        ? &app
                                        : app.get_subcommands().front()}) {
      const CLI::Option* o = a->get_option_no_throw(flag);
      if (o && o->count() > 0) return true;
    }
    return false;
  };
  const auto take = [&](const char* key, const std::string& flag, auto& field) {
    if (!j.contains(key) || given(flag)) return;
    try {
      using T = std::decay_t<decltype(field)>;
      if constexpr (std::is_same_v<T, std::optional<int>>)
        field = j.at(key).get<int>();
      else if constexpr (std::is_same_v<T, std::optional<double>>)
        field = j.at(key).get<double>();
      else
        field = j.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
  };
  take("group", "--group", c.group);
  take("rho", "--rho", c.rho);
  take("lambda", "--lambda", c.lambda);
  take("x", "--x", c.x);
  take("y", "--y", c.y);
  take("metric", "--metric", c.metric);
  take("bundle", "--bundle", c.bundle);
  take("tau", "--tau", c.tau);
  take("kappa", "--kappa", c.kappa);
  take("alpha_prime", "--alpha-prime", c.alpha_prime);
  take("dt", "--dt", c.dt);
  take("t_max", "--t-max", c.t_max);
  take("seed", "--seed", c.seed);
  take("out", "--out", c.out);
  take("format", "--format", c.format);
  take("draws", "--draws", c.draws);
  take("suite", "--suite", c.suite);
  take("stride", "--stride", c.stride);
  take("k1", "--k1", c.k1_values);
  take("k2", "--k2", c.k2_values);
  take("h0", "--h0", c.h0_values);
  take("samples", "--samples", c.samples);
}

void write_output(const RunConfig& c, const std::string& content) {
  if (c.out.empty()) return;
  std::ofstream f(c.out);
  if (!f) throw ConfigError("cannot write " + c.out);
  f << content;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::scientific << v;
  return os.str();
}

// ---------------------------------------------------------------------------

int cmd_verify(const RunConfig& c) {
  if (c.suite != "all" && c.suite != "tangent" && c.suite != "bundle" &&
      c.suite != "structural")
    throw ConfigError("--suite must be all, tangent, bundle or structural");
  if (c.draws == 0) std::cerr << "warning: --draws 0, nothing to verify\n";
  VerifyOptions o;
  o.draws = c.draws;
  o.seed = c.seed;
  o.perturbation = c.perturbation;

  std::vector<VerifyReport> reports;
  if (c.suite == "all" || c.suite == "tangent") reports.push_back(verify_tangent_oracles(o));
  if (c.suite == "all" || c.suite == "bundle") reports.push_back(verify_bundle_oracles(o));
  if (c.suite == "all" || c.suite == "structural") reports.push_back(verify_structural(o));

  bool ok = true;
  json all = json::array();
  for (const VerifyReport& r : reports) {
    for (const CheckSummary& s : r.checks) {
      const char* status = s.informational ? "INFO" : (s.passed ? "PASS" : "FAIL");
      std::cout << status << "  " << r.suite << "/" << s.name << "  worst " << fmt(s.worst_error)
                << " at " << s.worst_entry << " (draw " << s.worst_draw << ")\n";
    }
    if (!r.passed()) {
      ok = false;
      const CheckSummary* w = r.worst();
      std::cout << "verification failed: " << r.suite << "/" << w->name << " worst entry "
                << w->worst_entry << " error " << fmt(w->worst_error) << "\n";
    }
    all.push_back(r.to_json());
  }
  write_output(c, all.dump(2) + "\n");
  return ok ? kExitOk : kExitFailure;
}

std::string trajectory_text(const RunConfig& c, const std::vector<FlowState>& states,
                            const json& meta) {
  if (c.format == "csv") {
    std::ostringstream os;
    write_trajectory_csv(os, states);
    return os.str();
  }
  return trajectory_json(states, meta).dump(2) + "\n";
}

int cmd_flow(const RunConfig& c) {
  const JParams p = params_of(c);
  const MetricCoeffs m = metric_of(c);
  const std::optional<BundleMetricCoeffs> H = bundle_of(c);
  json meta = {{"params", p}, {"tau", c.tau}, {"alpha_prime", c.alpha_prime},
               {"dt", c.dt}, {"t_max", c.t_max}};

  if (!H) {
    const FlatFlowRun run = run_flat_flow(p, m, c.alpha_prime, c.tau, c.dt, c.t_max, c.stride);
    meta["constants"] = run.constants;
    meta["model"] = run.model;
    meta["classification"] = run.classification;
    meta["blow_down"] = run.trajectory.blow_down;
    std::cout << "flat-bundle flow: K1 = " << fmt(run.model.K1) << ", K2 = " << fmt(run.model.K2)
              << "\nclassification: " << run.classification.description() << "\n";
    if (run.trajectory.blow_down)
      std::cout << "blow-down at t ~ " << fmt(run.trajectory.t_last)
                << "; last r2 = " << fmt(run.states.back().omega.r2) << "\n";
    else
      std::cout << "reached t = " << fmt(run.trajectory.t_last)
                << "; r2 = " << fmt(run.states.back().omega.r2) << "\n";
    write_output(c, trajectory_text(c, run.states, meta));
    return kExitOk;
  }

  meta["kappa"] = c.kappa;
  const CoupledTrajectory run =
      integrate_coupled(p, m, *H, c.kappa, c.tau, c.alpha_prime, c.dt, c.t_max, c.stride);
  meta["constants"] = run.constants;
  meta["blow_down"] = run.blow_down;
  const FlowState& last = run.states.back();
  const CoupledDerivative rate =
      coupled_rhs(p, last, run.constants, c.kappa, c.tau, c.alpha_prime);
  const HsiResiduals res = hsi_residuals(p, last.omega, *last.H, c.tau, c.kappa, c.alpha_prime);
  meta["final_rates"] = {{"r2", rate.r2}, {"tr2", rate.tr2}, {"ts2", rate.ts2}, {"tk2", rate.tk2}};
  meta["hsi_residuals"] = res;
  std::cout << "coupled flow to t = " << fmt(last.t) << (run.blow_down ? " (blow-down)" : "")
            << "\nfinal r2 = " << fmt(last.omega.r2) << ", H = (" << fmt(last.H->tr2) << ", "
            << fmt(last.H->ts2) << ", " << fmt(last.H->tk2) << ")"
            << "\nd r2/dt = " << fmt(rate.r2) << "\nHSI residuals max = " << fmt(res.max())
            << (res.max() < 1e-10 ? " (all below 1e-10)" : "") << "\n";
  write_output(c, trajectory_text(c, run.states, meta));
  return kExitOk;
}

/// Runs f(i) for i in [0, n) on a few threads.
template <typename F>
void parallel_for(std::size_t n, F f) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
  for (std::thread& t : pool) t.join();
}

/// Kind observed from a forward run and a backward run (h' = -K1 - K2/h^2).
FlowKind observed_kind(double K1, double K2, double h0, double dt, double horizon) {
  const ModelTrajectory fwd = integrate_model(K1, K2, h0, dt, horizon, 1000);
  const ModelTrajectory bwd = integrate_model(-K1, -K2, h0, dt, horizon, 1000);
  double drift = 0.0;
  for (const auto& s : fwd.samples) drift = std::max(drift, std::abs(s.h - h0));
  for (const auto& s : bwd.samples) drift = std::max(drift, std::abs(s.h - h0));
  if (!fwd.blow_down && !bwd.blow_down && drift < 1e-10 * std::max(1.0, h0))
    return FlowKind::kStationary;
  if (!fwd.blow_down && !bwd.blow_down) return FlowKind::kEternal;
  if (!fwd.blow_down) return FlowKind::kImmortal;
  if (!bwd.blow_down) return FlowKind::kAncient;
  throw ConsistencyError("solution blows down in both time directions");
}

int cmd_classify(const RunConfig& c) {
  struct Cell {
    double K1, K2, h0;
    QualitativeClass predicted;
    FlowKind observed = FlowKind::kStationary;
  };
  std::vector<Cell> cells;
  for (double K1 : c.k1_values)
    for (double K2 : c.k2_values) {
      std::vector<double> h0s = c.h0_values;
      if (h0s.empty()) {
        if (K1 * K2 < 0.0) {
          const double hs = std::sqrt(-K2 / K1);
          h0s = {hs / 2.0, hs, 2.0 * hs};
        } else {
          h0s = {0.5, 1.0, 2.0};
        }
      }
      for (double h0 : h0s) cells.push_back({K1, K2, h0, classify_model(K1, K2, h0)});
    }
  parallel_for(cells.size(), [&](std::size_t i) {
    cells[i].observed = observed_kind(cells[i].K1, cells[i].K2, cells[i].h0, 1e-2, c.t_max);
  });

  bool ok = true;
  json rows = json::array();
  for (const Cell& cell : cells) {
    const bool match = cell.observed == cell.predicted.kind;
    ok &= match;
    std::cout << "K1=" << cell.K1 << " K2=" << cell.K2 << " h0=" << cell.h0 << "  -> "
              << cell.predicted.description() << "  [numeric: " << to_string(cell.observed)
              << (match ? ", agrees" : ", DISAGREES") << "]\n";
    rows.push_back({{"K1", cell.K1}, {"K2", cell.K2}, {"h0", cell.h0},
                    {"classification", cell.predicted},
                    {"numeric", to_string(cell.observed)}, {"agrees", match}});
  }

  // Both immortal and ancient solutions on one group with K1 != 0.
  const JParams p = params_of(c);
  const MetricCoeffs m = metric_of(c);
  const ModelConstants unit = model_constants(p, m, 1.0, c.tau);
  json demo = nullptr;
  if (unit.K1 != 0.0 && unit.K2 != 0.0) {
    const double h0 = reduce_almost_diagonal(p, m).metric.r2;
    const double k1 = unit.K1;
    // alpha' giving K2 = K1 h0^2 (same sign) and K2 = -4 K1 h0^2 (fixed point 2 h0).
    const double a_same = k1 * h0 * h0 / unit.K2;
    const double a_opposite = -4.0 * k1 * h0 * h0 / unit.K2;
    const QualitativeClass q1 = classify_model(k1, unit.K2 * a_same, h0);
    const QualitativeClass q2 = classify_model(k1, unit.K2 * a_opposite, h0);
    std::cout << "group " << c.group << " (K1 = " << fmt(k1) << "): alpha' = " << fmt(a_same)
              << " gives " << to_string(q1.kind) << ", alpha' = " << fmt(a_opposite) << " gives "
              << to_string(q2.kind) << "\n";
    demo = {{"group", c.group}, {"K1", k1},
            {"runs", {{{"alpha_prime", a_same}, {"classification", q1}},
                      {{"alpha_prime", a_opposite}, {"classification", q2}}}}};
  }
  write_output(c, json{{"grid", rows}, {"immortal_and_ancient", demo}}.dump(2) + "\n");
  return ok ? kExitOk : kExitFailure;
}

int cmd_table_k1(const RunConfig& c) {
  const std::vector<K1SignRow> rows = k1_sign_table(c.seed, c.samples);
  const auto mark = [](bool b) { return b ? "yes" : " - "; };
  std::cout << "group  K1<0  K1=0  K1>0\n";
  json j = json::array();
  for (const K1SignRow& r : rows) {
    std::cout << r.group << "     " << mark(r.negative) << "   " << mark(r.zero) << "   "
              << mark(r.positive) << "   " << r.note << "\n";
    j.push_back({{"group", r.group}, {"negative", r.negative}, {"zero", r.zero},
                 {"positive", r.positive}, {"sampled", r.sampled}, {"note", r.note}});
  }
  write_output(c, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_hsi(const RunConfig& c) {
  const JParams p = params_of(c);
  const MetricCoeffs m = metric_of(c);
  const BundleMetricCoeffs H = bundle_of(c).value_or(BundleMetricCoeffs{});
  FlowState state{0.0, m, H};
  if (!c.no_flow) {
    const CoupledTrajectory run =
        integrate_coupled(p, m, H, c.kappa, c.tau, c.alpha_prime, c.dt, c.t_max, c.stride);
    state = run.states.back();
  }
  const HsiResiduals r = hsi_residuals(p, state.omega, *state.H, c.tau, c.kappa, c.alpha_prime);
  json j = {{"t", state.t}, {"state", state}, {"residuals", r}};
  std::cout << j.dump(2) << "\n";
  write_output(c, j.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant Anomaly flow on 2-step nilpotent Lie groups"};
  app.require_subcommand(1);
  RunConfig c;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", c.config_path, "JSON file mirroring the flags");
    sub->add_option("--group", c.group, "N2, N3, N5 or N8 (sets default rho, lambda, x, y)");
    sub->add_option("--rho", c.rho, "rho in {0, 1}");
    sub->add_option("--lambda", c.lambda, "lambda >= 0");
    sub->add_option("--x", c.x, "x");
    sub->add_option("--y", c.y, "y");
    sub->add_option("--metric", c.metric, "r2,s2,k2[,u_re,u_im[,v_re,v_im,z_re,z_im]]")
        ->delimiter(',');
    sub->add_option("--bundle", c.bundle, "tr2,ts2,tk2")->delimiter(',');
    sub->add_option("--tau", c.tau, "Gauduchon parameter of the tangent connection");
    sub->add_option("--kappa", c.kappa, "Gauduchon parameter of the bundle connection");
    sub->add_option("--alpha-prime", c.alpha_prime, "slope parameter");
    sub->add_option("--dt", c.dt, "time step");
    sub->add_option("--t-max", c.t_max, "time horizon");
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--out", c.out, "output file");
    sub->add_option("--format", c.format, "json or csv");
    sub->add_option("--stride", c.stride, "record every n-th step");
  };

  CLI::App* verify = app.add_subcommand("verify", "random-draw oracle suites");
  add_common(verify);
  verify->add_option("--draws", c.draws, "number of random draws");
  verify->add_option("--suite", c.suite, "all, tangent, bundle or structural");
  verify->add_option("--inject-perturbation", c.perturbation,
                     "perturb one closed-form coefficient (negative control)");
  CLI::App* flow = app.add_subcommand("flow", "integrate the flat-bundle or coupled flow");
  add_common(flow);
  CLI::App* classify = app.add_subcommand("classify", "model-problem classification sweep");
  add_common(classify);
  classify->add_option("--k1", c.k1_values, "K1 grid values")->delimiter(',');
  classify->add_option("--k2", c.k2_values, "K2 grid values")->delimiter(',');
  classify->add_option("--h0", c.h0_values, "initial values (default around the fixed point)")
      ->delimiter(',');
  CLI::App* table = app.add_subcommand("table-k1", "achievable signs of K1 per group");
  add_common(table);
  table->add_option("--samples", c.samples, "samples per group");
  CLI::App* hsi = app.add_subcommand("hsi", "Hull-Strominger-Ivanov residuals");
  add_common(hsi);
  hsi->add_flag("--no-flow", c.no_flow, "evaluate at the initial data without flowing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  try {
    apply_config_file(c, app);
    validate(c);
    if (verify->parsed()) return cmd_verify(c);
    if (flow->parsed()) return cmd_flow(c);
    if (classify->parsed()) {
      if (!classify->get_option("--t-max")->count() && c.config_path.empty()) c.t_max = 50.0;
      return cmd_classify(c);
    }
    if (table->parsed()) return cmd_table_k1(c);
    if (hsi->parsed()) return cmd_hsi(c);
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const InvalidMetricError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const UnsupportedParametersError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const InvalidArgumentError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

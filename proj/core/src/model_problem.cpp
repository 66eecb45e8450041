#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "nilflow/anomaly_flow.hpp"
#include "nilflow/errors.hpp"
#include "nilflow/gauduchon.hpp"
#include "nilflow/sampling.hpp"
#include "nilflow/tolerance.hpp"

namespace nilflow {

void ConservedConstants::validate() const {
  if (!(c1 > 0.0) || !(c2 > 0.0) || !(c1 * c2 > std::norm(c5)))
    throw InvalidMetricError("conserved constants need c1 > 0, c2 > 0 and "
                             "c1 c2 > |c5|^2");
}

ConservedConstants conserved_constants(const MetricCoeffs& m) {
  const double n = psi_norm(m);
  const Complex i{0.0, 1.0};
  ConservedConstants c;
  c.c1 = n * (m.r2 * m.k2 - std::norm(m.z));
  c.c2 = n * (m.s2 * m.k2 - std::norm(m.v));
  c.c3 = n * (m.r2 * m.v - i * m.z * std::conj(m.u));
  c.c4 = n * (m.s2 * m.z + i * m.u * m.v);
  c.c5 = n * (m.k2 * m.u - i * m.z * std::conj(m.v));
  return c;
}

MetricCoeffs almost_diagonal_solution(const ConservedConstants& c, double r2) {
  if (!(r2 > 0.0) || !std::isfinite(r2))
    throw InvalidArgumentError("almost_diagonal_solution: r2 must be positive");
  c.validate();
  MetricCoeffs m;
  m.r2 = r2;
  m.s2 = c.c2 / c.c1 * r2;
  m.k2 = (c.c1 * c.c2 - std::norm(c.c5)) / 8.0;
  m.u = c.c5 / c.c1 * r2;
  return m;
}

namespace {

using Hermitian3 = std::array<std::array<Complex, 3>, 3>;

// 2 omega = i sum h_{a bbar} zeta^a ^ zeta^bbar.
Hermitian3 hermitian_matrix(const MetricCoeffs& m) {
  const Complex i{0.0, 1.0};
  Hermitian3 h{};
  h[0][0] = m.r2;
  h[1][1] = m.s2;
  h[2][2] = m.k2;
  h[0][1] = -i * m.u;
  h[1][2] = -i * m.v;
  h[0][2] = -i * m.z;
  h[1][0] = std::conj(h[0][1]);
  h[2][1] = std::conj(h[1][2]);
  h[2][0] = std::conj(h[0][2]);
  return h;
}

}  // namespace

MetricCoeffs metric_in_zeta(const CoframeChange& p, const MetricCoeffs& sm) {
  const Hermitian3 hs = hermitian_matrix(sm);
  Hermitian3 h{};
  for (int c = 0; c < 3; ++c)
    for (int d = 0; d < 3; ++d)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          h[c][d] += p[a][c] * hs[a][b] * std::conj(p[b][d]);
  const Complex i{0.0, 1.0};
  MetricCoeffs m;
  m.r2 = h[0][0].real();
  m.s2 = h[1][1].real();
  m.k2 = h[2][2].real();
  m.u = i * h[0][1];
  m.v = i * h[1][2];
  m.z = i * h[0][2];
  return m;
}

ModelConstants model_constants(const JParams& params, const MetricCoeffs& omega0,
                               double alpha_prime, double tau) {
  const MetricCoeffs reduced = reduce_almost_diagonal(params, omega0).metric;
  const ConservedConstants c = conserved_constants(reduced);
  c.validate();
  ModelConstants mc;
  mc.alpha_prime = alpha_prime;
  mc.tau = tau;
  mc.B = (c.c1 * c.c2 - std::norm(c.c5)) / 16.0 * params.pluriclosed_defect();
  const double r4 = reduced.r2 * reduced.r2;
  mc.C = closed_form_trace_tau(params, adapted_coeffs(reduced), tau) * r4;
  mc.K1 = c.c1 * mc.B / 4.0;
  mc.K2 = -alpha_prime * c.c1 * mc.C / 16.0;
  return mc;
}

std::string to_string(FlowKind kind) {
  switch (kind) {
    case FlowKind::kStationary:
      return "stationary";
    case FlowKind::kImmortal:
      return "immortal";
    case FlowKind::kAncient:
      return "ancient";
    case FlowKind::kEternal:
      return "eternal";
  }
  return "unknown";
}

std::string QualitativeClass::description() const {
  std::ostringstream os;
  os.precision(10);
  os << to_string(kind);
  if (fixed_point) os << "; fixed point h* = " << *fixed_point;
  if (converges_forward) os << "; h -> h* as t -> +inf";
  if (converges_backward) os << "; h -> h* as t -> -inf";
  if (forward_slope) os << "; h ~ " << *forward_slope << " t as t -> +inf";
  if (backward_slope) os << "; h ~ " << *backward_slope << " t as t -> -inf";
  if (t_minus) os << "; T- = " << *t_minus;
  if (t_plus) os << "; T+ = " << *t_plus;
  if (from_explicit_solution_only) os << "; classified from the explicit solution";
  return os.str();
}

QualitativeClass classify_model(double K1, double K2, double h0) {
  if (!(h0 > 0.0) || !std::isfinite(h0))
    throw InvalidArgumentError("classify_model: h0 must be positive");
  QualitativeClass q;
  if (K1 == 0.0 && K2 == 0.0) {
    q.kind = FlowKind::kStationary;
    return q;
  }
  if (K1 == 0.0) {
    // h^3 = h0^3 + 3 K2 t.
    const double end = -h0 * h0 * h0 / (3.0 * K2);
    if (K2 > 0.0) {
      q.kind = FlowKind::kImmortal;
      q.t_minus = end;
    } else {
      q.kind = FlowKind::kAncient;
      q.t_plus = end;
    }
    return q;
  }
  if (K2 == 0.0) {
    // h = h0 + K1 t.
    q.from_explicit_solution_only = true;
    const double end = -h0 / K1;
    if (K1 > 0.0) {
      q.kind = FlowKind::kImmortal;
      q.forward_slope = K1;
      q.t_minus = end;
    } else {
      q.kind = FlowKind::kAncient;
      q.backward_slope = K1;
      q.t_plus = end;
    }
    return q;
  }
  if (K1 > 0.0 && K2 > 0.0) {
    q.kind = FlowKind::kImmortal;
    q.forward_slope = K1;
    return q;
  }
  if (K1 < 0.0 && K2 < 0.0) {
    q.kind = FlowKind::kAncient;
    q.backward_slope = K1;
    return q;
  }
  const double hs = std::sqrt(-K2 / K1);
  q.fixed_point = hs;
  if (std::abs(h0 - hs) < kFixedPointTie * std::max(1.0, hs)) {
    q.kind = FlowKind::kStationary;
    return q;
  }
  const bool above = h0 > hs;
  if (K1 > 0.0) {
    q.converges_backward = true;
    if (above) {
      q.kind = FlowKind::kEternal;
      q.forward_slope = K1;
    } else {
      q.kind = FlowKind::kAncient;
    }
  } else {
    q.converges_forward = true;
    if (above) {
      q.kind = FlowKind::kEternal;
      q.backward_slope = K1;
    } else {
      q.kind = FlowKind::kImmortal;
    }
  }
  return q;
}

namespace {

double model_rhs(double K1, double K2, double h) { return K1 + K2 / (h * h); }

bool rk4_step(double K1, double K2, double h, double dt, double& out) {
  const double a = model_rhs(K1, K2, h);
  const double h2 = h + 0.5 * dt * a;
  if (!(h2 > 0.0)) return false;
  const double b = model_rhs(K1, K2, h2);
  const double h3 = h + 0.5 * dt * b;
  if (!(h3 > 0.0)) return false;
  const double c = model_rhs(K1, K2, h3);
  const double h4 = h + dt * c;
  if (!(h4 > 0.0)) return false;
  const double d = model_rhs(K1, K2, h4);
  out = h + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d);
  return out > 0.0 && std::isfinite(out);
}

void check_run_arguments(double dt, double t_max, int stride) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw InvalidArgumentError("time step must be positive");
  if (!(t_max > 0.0) || !std::isfinite(t_max))
    throw InvalidArgumentError("time horizon must be positive");
  if (stride < 1) throw InvalidArgumentError("stride must be at least 1");
}

bool out_of_domain(double K1, double K2, double h) {
  return h < kBlowDownFloor || std::abs(model_rhs(K1, K2, h)) > kBlowDownRate;
}

ModelTrajectory sample_explicit(double K1, double K2, double h0, double dt,
                                double t_max, int stride) {
  ModelTrajectory out;
  out.samples.push_back({0.0, h0});
  const auto steps = static_cast<long long>(std::ceil(t_max / dt - 1e-9));
  const double h03 = h0 * h0 * h0;
  for (long long n = 1; n <= steps; ++n) {
    const double t = std::min(static_cast<double>(n) * dt, t_max);
    double h = 0.0;
    if (K2 == 0.0) {
      h = h0 + K1 * t;
    } else {
      const double cube = h03 + 3.0 * K2 * t;
      h = cube > 0.0 ? std::cbrt(cube) : 0.0;
    }
    if (out_of_domain(K1, K2, h)) {
      out.blow_down = true;
      break;
    }
    out.t_last = t;
    if (n % stride == 0 || n == steps) out.samples.push_back({t, h});
  }
  if (out.blow_down) {
    if (out.samples.back().t != out.t_last) {
      const double t = out.t_last;
      const double h = K2 == 0.0 ? h0 + K1 * t : std::cbrt(h03 + 3.0 * K2 * t);
      out.samples.push_back({t, h});
    }
    out.t_last = K2 == 0.0 ? -h0 / K1 : -h03 / (3.0 * K2);
  }
  return out;
}

}  // namespace

ModelTrajectory integrate_model(double K1, double K2, double h0, double dt,
                                double t_max, int stride) {
  if (!(h0 > 0.0) || !std::isfinite(h0))
    throw InvalidArgumentError("integrate_model: h0 must be positive");
  check_run_arguments(dt, t_max, stride);
  if (K1 == 0.0 || K2 == 0.0)
    return sample_explicit(K1, K2, h0, dt, t_max, stride);

  ModelTrajectory out;
  out.samples.push_back({0.0, h0});
  double t = 0.0;
  double h = h0;
  long long n = 0;
  while (t < t_max) {
    double step = std::min(dt, t_max - t);
    if (t_max - (t + step) < 1e-12 * dt) step = t_max - t;
    double next = 0.0;
    int halvings = 0;
    while (!rk4_step(K1, K2, h, step, next)) {
      if (++halvings > kMaxHalvings) break;
      step *= 0.5;
    }
    if (halvings > kMaxHalvings) {
      out.blow_down = true;
      break;
    }
    t = (step == t_max - t) ? t_max : t + step;
    h = next;
    ++n;
    out.t_last = t;
    const bool done = t >= t_max;
    const bool escaped = out_of_domain(K1, K2, h);
    if (n % stride == 0 || done || escaped) out.samples.push_back({t, h});
    if (escaped) {
      out.blow_down = true;
      break;
    }
  }
  return out;
}

double gamma1(const JParams& params, const MetricCoeffs& omega0) {
  const double D = det_quantity(omega0);
  return omega0.k2 * omega0.k2 * params.pluriclosed_defect() / D;
}

int k1_sign(const JParams& params, const MetricCoeffs& omega0) {
  const ModelConstants mc = model_constants(params, omega0, 0.0, 1.0);
  const ConservedConstants c = conserved_constants(omega0);
  const double scale = c.c1 * (c.c1 * c.c2) / 64.0 *
                       (params.rho() + params.lambda() * params.lambda() +
                        2.0 * std::abs(params.x()));
  if (std::abs(mc.K1) <= tol::kAbsoluteFloor * std::max(1.0, scale)) return 0;
  return mc.K1 > 0.0 ? 1 : -1;
}

std::vector<K1SignRow> k1_sign_table(std::uint64_t seed, int samples_per_group) {
  if (samples_per_group < 1)
    throw InvalidArgumentError("k1_sign_table: need at least one sample");
  Rng rng(seed);
  std::vector<K1SignRow> rows;
  const auto sampled_row = [&](GroupId g) {
    K1SignRow row;
    row.group = std::string(to_string(g));
    for (int n = 0; n < samples_per_group; ++n) {
      const JParams p = random_catalog_params(rng, g);
      const MetricCoeffs m = random_metric(rng);
      const int s = k1_sign(p, m);
      row.negative |= s < 0;
      row.zero |= s == 0;
      row.positive |= s > 0;
    }
    row.note = "sampled over the lambda = 0 catalog";
    return row;
  };
  rows.push_back(sampled_row(GroupId::N2));
  rows.push_back(sampled_row(GroupId::N3));
  {
    K1SignRow row{"N4", true, true, true, false,
                  "quoted: no lambda = 0 parametrisation"};
    rows.push_back(row);
  }
  rows.push_back(sampled_row(GroupId::N5));
  {
    K1SignRow row{"N6", false, false, true, false,
                  "quoted: no lambda = 0 parametrisation"};
    rows.push_back(row);
  }
  rows.push_back(sampled_row(GroupId::N8));
  return rows;
}

}  // namespace nilflow

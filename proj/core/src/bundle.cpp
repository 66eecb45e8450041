#include <cmath>
#include <utility>

#include "nilflow/errors.hpp"
#include "nilflow/gauduchon.hpp"

namespace nilflow {

namespace {

using Term = std::pair<Mask, double>;

Form terms(std::initializer_list<Term> list) {
  Form f;
  for (const auto& [m, c] : list) f[m] += c;
  return f;
}

Mask m2(int i, int j) { return mask_of({i, j}); }
Mask m1(int i) { return mask_of({i}); }

void require_gate(const JParams& params, const MetricCoeffs& omega,
                  const BundleMetricCoeffs& H) {
  if (params.lambda() != 0.0) {
    throw UnsupportedParametersError("bundle connection requires lambda = 0");
  }
  if (!omega.is_diagonal()) {
    throw UnsupportedParametersError("bundle connection requires diagonal omega");
  }
  (void)det_quantity(omega);
  H.validate();
}

void complete(FormMatrix& f) {
  f(2, 3) = -f(1, 4);
  f(2, 4) = f(1, 3);
  f(2, 5) = -f(1, 6);
  f(2, 6) = f(1, 5);
  f(4, 5) = -f(3, 6);
  f(4, 6) = f(3, 5);
  f.antisymmetrize_from_upper();
}

struct Bundle {
  double rho, x, y, r, s, k, r2, s2, k2, tr2, ts2, tk2;
};

Bundle unpack(const JParams& p, const MetricCoeffs& o, const BundleMetricCoeffs& H) {
  return {double(p.rho()), p.x(), p.y(), std::sqrt(o.r2), std::sqrt(o.s2),
          std::sqrt(o.k2), o.r2, o.s2, o.k2, H.tr2, H.ts2, H.tk2};
}

}  // namespace

ConnectionForms closed_form_bundle_connection_kappa(const JParams& params,
                                                    const MetricCoeffs& omega,
                                                    const BundleMetricCoeffs& H,
                                                    double kap) {
  require_gate(params, omega, H);
  const auto b = unpack(params, omega, H);
  const double km = kap - 1.0, kp = kap + 1.0;
  ConnectionForms s;
  s(1, 2) = terms({{m1(6), -b.tk2 / (b.k * b.tr2) * km}});
  s(1, 5) = terms({{m1(1), -b.tk2 / (2.0 * b.k * b.tr2) * kp},
                   {m1(3), b.r * b.tk2 / (2.0 * b.s * b.k * b.tr2) * b.rho * km}});
  s(1, 6) = terms({{m1(2), b.tk2 / (2.0 * b.k * b.tr2) * kp},
                   {m1(4), b.r * b.tk2 / (2.0 * b.s * b.k * b.tr2) * b.rho * km}});
  s(3, 4) = terms({{m1(5), b.tk2 / (b.k * b.ts2) * b.y * km},
                   {m1(6), -b.tk2 / (b.k * b.ts2) * b.x * km}});
  s(3, 5) = terms({{m1(1), -b.s * b.tk2 / (2.0 * b.r * b.k * b.ts2) * b.rho * km},
                   {m1(3), -b.tk2 / (2.0 * b.k * b.ts2) * b.x * kp},
                   {m1(4), -b.tk2 / (2.0 * b.k * b.ts2) * b.y * kp}});
  s(3, 6) = terms({{m1(2), -b.s * b.tk2 / (2.0 * b.r * b.k * b.ts2) * b.rho * km},
                   {m1(3), -b.tk2 / (2.0 * b.k * b.ts2) * b.y * kp},
                   {m1(4), b.tk2 / (2.0 * b.k * b.ts2) * b.x * kp}});
  complete(s);
  return s;
}

CurvatureForms bundle_curvature_closed_form(const JParams& params,
                                            const MetricCoeffs& omega,
                                            const BundleMetricCoeffs& H,
                                            double kap, TableVariant variant) {
  require_gate(params, omega, H);
  const auto [rho, x, y, r, s, k, r2, s2, k2, tr2, ts2, tk2] =
      unpack(params, omega, H);
  const double tr4 = tr2 * tr2, ts4 = ts2 * ts2, tk4 = tk2 * tk2;
  const double km = kap - 1.0, kp = kap + 1.0;
  const double X = x * x + y * y;

  CurvatureForms a;
  const double c12 = -rho * km * (kp * r2 * tk2 + 2.0 * k2 * tr2) * tk2 /
                     (2.0 * r * s * k2 * tr4);
  a(1, 2) = terms({
      {m2(1, 2), (4.0 * km * k2 * tr2 * tk2 - kp * kp * r2 * tk4) / (2.0 * r2 * k2 * tr4)},
      {m2(1, 4), c12},
      {m2(2, 3), c12},
      {m2(3, 4), km * (rho * km * r2 * tk2 + 4.0 * x * k2 * tr2) * tk2 / (2.0 * s2 * k2 * tr4)},
  });
  const double p = -(rho * km * km + x * kp * kp) * tk4 / (4.0 * k2 * tr2 * ts2);
  const double q = -y * kp * kp * tk4 / (4.0 * k2 * tr2 * ts2);
  a(1, 3) = terms({{m2(1, 3), p}, {m2(2, 4), p}, {m2(1, 4), q}, {m2(2, 3), -q}});
  a(1, 4) = terms({{m2(1, 3), -q}, {m2(2, 4), -q}, {m2(1, 4), p}, {m2(2, 3), -p}});
  a(1, 5) = terms({{m2(2, 6), -km * kp * tk4 / (2.0 * k2 * tr4)},
                   {m2(4, 6), -rho * km * km * r * tk4 / (2.0 * s * k2 * tr4)}});
  a(1, 6) = terms({{m2(1, 6), -km * kp * tk4 / (2.0 * k2 * tr4)},
                   {m2(3, 6), rho * km * km * r * tk4 / (2.0 * s * k2 * tr4)}});
  const double g34 = rho * km * (kp * s2 * tk2 + 2.0 * k2 * ts2) * tk2 / (2.0 * r * s * k2 * ts4);
  a(3, 4) = terms({
      {m2(1, 2), km * (rho * km * s2 * tk2 + 4.0 * x * k2 * ts2) * tk2 / (2.0 * r2 * k2 * ts4)},
      {m2(1, 3), y * g34},
      {m2(2, 4), -y * g34},
      {m2(1, 4), -x * g34},
      {m2(2, 3), -x * g34},
      {m2(3, 4), X * (4.0 * km * k2 * ts2 - kp * kp * s2 * tk2) * tk2 / (2.0 * s2 * k2 * ts4)},
  });
  const double f = rho * km * km * s * tk4 / (2.0 * r * k2 * ts4);
  const double g = km * kp * tk4 / (2.0 * k2 * ts4);
  a(3, 5) = terms({{m2(2, 5), -f * y},
                   {m2(2, 6), f * x},
                   {m2(3, 5), -g * y * y},
                   {m2(3, 6), g * x * y},
                   {m2(4, 5), g * x * y},
                   {m2(4, 6), -g * x * x}});
  if (variant == TableVariant::kCorrected) {
    // The uncorrected block of Omega^3_6 proportional to (kappa-1)(kappa+1) has
    // its first form index shifted down by one (e^{25}, e^{26}, e^{35},
    // e^{36} in place of e^{35}, e^{36}, e^{45}, e^{46}).
    a(3, 6) = terms({{m2(1, 5), f * y},
                     {m2(1, 6), -f * x},
                     {m2(3, 5), g * x * y},
                     {m2(4, 6), -g * x * y},
                     {m2(3, 6), -g * x * x},
                     {m2(4, 5), g * y * y}});
  } else {
    a(3, 6) = terms({{m2(1, 5), f * y},
                     {m2(1, 6), -f * x},
                     {m2(2, 5), g * x * y},
                     {m2(3, 6), -g * x * y},
                     {m2(2, 6), -g * x * x},
                     {m2(3, 5), g * y * y}});
  }
  const double h = -rho * y * km * kp * s * tk4 / (2.0 * r * k2 * ts4);
  const double w = rho * km * kp * (r2 * ts4 + x * s2 * tr4) * tk4 / (2.0 * r * s * k2 * tr4 * ts4);
  a(5, 6) = terms({
      {m2(1, 2), -(rho * km * km * s2 * tr4 - kp * kp * r2 * ts4) * tk4 / (2.0 * r2 * k2 * tr4 * ts4)},
      {m2(1, 3), h},
      {m2(2, 4), -h},
      {m2(1, 4), w},
      {m2(2, 3), w},
      {m2(3, 4), -(rho * km * km * r2 * ts4 - X * kp * kp * s2 * tr4) * tk4 / (2.0 * s2 * k2 * tr4 * ts4)},
  });
  complete(a);
  return a;
}

double closed_form_trace_kappa(const JParams& params, const MetricCoeffs& omega,
                               const BundleMetricCoeffs& H, double kap) {
  require_gate(params, omega, H);
  const auto b = unpack(params, omega, H);
  const double X = b.x * b.x + b.y * b.y;
  const double tr6 = b.tr2 * b.tr2 * b.tr2, ts6 = b.ts2 * b.ts2 * b.ts2;
  const double km = kap - 1.0, kp = kap + 1.0;
  const double bracket =
      b.rho * km *
          ((2.0 * kap * b.r2 * b.tk2 + b.k2 * b.tr2) * ts6 +
           X * (2.0 * kap * b.s2 * b.tk2 + b.k2 * b.ts2) * tr6) +
      4.0 * b.x * km * (X * b.tr2 * b.tr2 + b.ts2 * b.ts2) * b.k2 * b.tr2 * b.ts2 -
      b.x * kp * kp * (X * b.s2 * tr6 + b.r2 * ts6) * b.tk2;
  return km * b.tk2 * b.tk2 / (2.0 * b.k2 * tr6 * ts6) * bracket;
}

}  // namespace nilflow

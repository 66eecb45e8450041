#include <cmath>
#include <utility>

#include "nilflow/gauduchon.hpp"

namespace nilflow {

namespace {

using Term = std::pair<Mask, double>;

Form two_form(std::initializer_list<Term> terms) {
  Form f;
  for (const auto& [m, c] : terms) f[m] += c;
  return f;
}

Mask m2(int i, int j) { return mask_of({i, j}); }
Mask m1(int i) { return mask_of({i}); }

/// Completes a table given on the pairs (1,2) (1,3) (1,4) (1,5) (1,6) (3,4)
/// (3,5) (3,6) (5,6) using the J-relations
///   F^2_3 = -F^1_4, F^2_4 = F^1_3, F^2_5 = -F^1_6, F^2_6 = F^1_5,
///   F^4_5 = -F^3_6, F^4_6 = F^3_5,
/// and antisymmetry.
void complete_by_relations(FormMatrix& f) {
  f(2, 3) = -f(1, 4);
  f(2, 4) = f(1, 3);
  f(2, 5) = -f(1, 6);
  f(2, 6) = f(1, 5);
  f(4, 5) = -f(3, 6);
  f(4, 6) = f(3, 5);
  f.antisymmetrize_from_upper();
}

struct Adapted {
  double rho, lam, x, y;
  double r2, s2, k, u1, u2, D;
};

Adapted unpack(const JParams& p, const AdaptedCoeffs& a) {
  return {double(p.rho()), p.lambda(), p.x(), p.y(), a.r_e2, a.s_e2,
          std::sqrt(a.k_e2), a.u_e.real(), a.u_e.imag(), a.delta_e};
}

}  // namespace

ConnectionForms closed_form_connection_tau(const JParams& params,
                                           const AdaptedCoeffs& adapted,
                                           double t) {
  const auto [rho, lam, x, y, r2, s2, k, u1, u2, D] = unpack(params, adapted);
  (void)s2;
  const double D2 = D * D;
  const double U = u1 * u1 + u2 * u2;
  const double tm = t - 1.0;
  const double tp = t + 1.0;
  const double h = k / (2.0 * r2 * D);

  ConnectionForms s;
  s(1, 2) = two_form({{m1(6), -k / r2 * tm}});
  s(1, 3) = two_form({{m1(5), lam * k / (2.0 * D) * tm},
                      {m1(6), k * u1 / (r2 * D) * tm}});
  s(1, 4) = two_form({{m1(6), -k * (lam * r2 - 2.0 * u2) / (2.0 * r2 * D) * tm}});
  s(1, 5) = two_form({{m1(1), -k / (2.0 * r2) * tp},
                      {m1(3), h * (rho * r2 * tm + (u2 - lam * r2) * tp)},
                      {m1(4), -h * u1 * tp}});
  s(1, 6) = two_form({{m1(2), k / (2.0 * r2) * tp},
                      {m1(3), -h * u1 * tp},
                      {m1(4), h * (rho * r2 * tm - (u2 - lam * r2) * tp)}});
  const double q = U - lam * r2 * u2 + r2 * r2 * x;
  s(3, 4) = two_form({{m1(5), -k * (lam * u1 - r2 * y) / D2 * tm},
                      {m1(6), -k * q / (r2 * D2) * tm}});
  s(3, 5) = two_form({{m1(1), -h * (rho * r2 * tm - u2 * tp)},
                      {m1(2), h * u1 * tp},
                      {m1(3), -k * q / (2.0 * r2 * D2) * tp},
                      {m1(4), k * (lam * u1 - r2 * y) / (2.0 * D2) * tp}});
  s(3, 6) = two_form({{m1(1), h * u1 * tp},
                      {m1(2), -h * (rho * r2 * tm + u2 * tp)},
                      {m1(3), k * (lam * u1 - r2 * y) / (2.0 * D2) * tp},
                      {m1(4), k * q / (2.0 * r2 * D2) * tp}});
  complete_by_relations(s);
  return s;
}

CurvatureForms closed_form_curvature_tau(const JParams& params,
                                         const AdaptedCoeffs& adapted, double t,
                                         TableVariant variant) {
  const auto [rho, lam, x, y, r2, s2, k, u1, u2, D] = unpack(params, adapted);
  const double D2 = D * D;
  const double r4 = r2 * r2, r6 = r4 * r2, r8 = r4 * r4;
  const double U = u1 * u1 + u2 * u2;
  const double l2 = lam * lam;
  const double P = t * t - 2.0 * t + 5.0;
  const double tm = t - 1.0, tp = t + 1.0;
  const double tm2 = tm * tm, tp2 = tp * tp;
  const double T3 = t * t + 3.0;
  const double R = rho * tm * (t + 3.0);
  const double du = u1 * u1 - u2 * u2;

  CurvatureForms o;
  o(1, 2) = two_form({
      {m2(1, 2), -P * D2},
      {m2(1, 3), P * u1 * D},
      {m2(2, 4), P * u1 * D},
      {m2(1, 4), (P * u2 - (R + lam * T3) * r2) * D},
      {m2(2, 3), -(P * u2 + (R - lam * T3) * r2) * D},
      {m2(3, 4), -(P * U - 2.0 * lam * T3 * u2 * r2 -
                   (rho * tm2 - l2 * tp2 + 4.0 * x * tm) * r4)},
      {m2(5, 6), -lam * tm2 * (lam * r2 - 2.0 * u2) * r2},
  });
  o(1, 3) = two_form({
      {m2(1, 2), P * u1 * D},
      {m2(1, 3), -(P * u1 * u1 + 0.5 * (rho * tm2 - 2.0 * l2 * tm -
                                        rho * lam * tm * (t + 3.0) + x * tp2) * r4)},
      {m2(1, 4), -(P * u1 * u2 - (R + lam * T3) * u1 * r2 + y / 2.0 * tp2 * r4)},
      {m2(2, 3), P * u1 * u2 + (R - lam * T3) * u1 * r2 + y / 2.0 * tp2 * r4},
      {m2(2, 4), -(P * u1 * u1 + 0.5 * (rho * tm2 - 2.0 * l2 * tm +
                                        rho * lam * tm * (t + 3.0) + x * tp2) * r4)},
      {m2(3, 4), (P * U * u1 - 2.0 * lam * T3 * u1 * u2 * r2 +
                  (l2 * T3 * u1 + x * P * u1 + y * tp2 * u2) * r4 -
                  lam * y * T3 * r6) / D},
      {m2(5, 6), tm2 * (lam * r2 - 2.0 * u2) * (lam * u1 - y * r2) * r2 / D},
  });
  o(1, 4) = two_form({
      {m2(1, 2), (P * u2 + 2.0 * lam * tm * r2) * D},
      {m2(1, 3), -(P * u1 * u2 + 2.0 * lam * tm * u1 * r2 - y / 2.0 * tp2 * r4)},
      {m2(2, 4), -(P * u1 * u2 + 2.0 * lam * tm * u1 * r2 - y / 2.0 * tp2 * r4)},
      {m2(1, 4), -(P * u2 * u2 - (R + lam * P) * u2 * r2 +
                   0.5 * (rho * tm2 - 2.0 * l2 * tm + rho * lam * tm * (t + 3.0) +
                          x * tp2) * r4)},
      {m2(2, 3), P * u2 * u2 + (R - lam * P) * u2 * r2 +
                     0.5 * (rho * tm2 - 2.0 * l2 * tm - rho * lam * tm * (t + 3.0) +
                            x * tp2) * r4},
      {m2(3, 4), (P * U * u2 +
                  2.0 * lam * (tm * u1 * u1 - (t * t - t + 4.0) * u2 * u2) * r2 +
                  (l2 * T3 * u2 + x * P * u2 - y * tp2 * u1) * r4 -
                  lam * x * T3 * r6) / D},
      {m2(5, 6), -tm2 * (2.0 * lam * u2 * u2 -
                         (lam * s2 + l2 * u2 - 2.0 * y * u1) * r2 + lam * x * r4) *
                     r2 / D},
  });
  o(1, 5) = two_form({
      {m2(1, 5), -lam / 2.0 * tm * (tp * u2 - rho * tm * r2) * r2},
      {m2(1, 6), tm * (rho * tm - lam / 2.0 * tp) * u1 * r2},
      {m2(2, 5), -lam / 2.0 * tm * tp * u1 * r2},
      {m2(2, 6), -0.5 * tm * (2.0 * tp * s2 + 2.0 * rho * tm * u2 - lam * tp * u2 -
                              rho * lam * tm * r2) * r2},
      {m2(3, 5), lam / (2.0 * D) * tm * tp * (U - lam * u2 * r2 + x * r4) * r2},
      {m2(3, 6), 1.0 / (2.0 * D) * tm * tp *
                     (2.0 * u1 * s2 - (l2 * u1 - 2.0 * x * u1 + 2.0 * y * u2) * r2 +
                      lam * y * r4) * r2},
      {m2(4, 5), -lam / (2.0 * D) * tm * tp * (lam * u1 - y * r2) * r4},
      {m2(4, 6), 1.0 / (2.0 * D) * tm *
                     (2.0 * rho * tm * U + tp * (2.0 * s2 * u2 - lam * U) -
                      (2.0 * rho * tm * s2 +
                       tp * (2.0 * lam * s2 - l2 * u2 - 2.0 * x * u2 - 2.0 * y * u1)) * r2 -
                      lam * x * tp * r4) * r2},
  });
  o(1, 6) = two_form({
      {m2(1, 5), -lam / 2.0 * tm * tp * u1 * r2},
      {m2(1, 6), -0.5 * tm * (2.0 * tp * s2 - 2.0 * rho * tm * u2 - lam * tp * u2 +
                              rho * lam * tm * r2) * r2},
      {m2(2, 5), lam / 2.0 * tm * (tp * u2 + rho * tm * r2) * r2},
      {m2(2, 6), tm * (rho * tm + lam / 2.0 * tp) * u1 * r2},
      {m2(3, 5), -lam / (2.0 * D) * tm * tp * (lam * u1 - y * r2) * r4},
      {m2(3, 6), -1.0 / (2.0 * D) * tm *
                     (2.0 * rho * tm * U - tp * (2.0 * s2 * u2 - lam * U) -
                      (2.0 * rho * tm * s2 -
                       tp * (2.0 * lam * s2 - l2 * u2 - 2.0 * x * u2 - 2.0 * y * u1)) * r2 +
                      lam * x * tp * r4) * r2},
      {m2(4, 5), -lam / (2.0 * D) * tm * tp * (U - lam * u2 * r2 + x * r4) * r2},
      {m2(4, 6), -1.0 / (2.0 * D) * tm * tp *
                     (2.0 * u1 * s2 - (l2 * u1 - 2.0 * x * u1 + 2.0 * y * u2) * r2 +
                      lam * y * r4) * r2},
  });
  o(3, 4) = two_form({
      {m2(1, 2), -(P * U + 4.0 * lam * tm * u2 * r2 - tm * (rho * tm + 4.0 * x) * r4)},
      {m2(1, 3), (P * U * u1 + 4.0 * lam * tm * u1 * u2 * r2 -
                  (2.0 * l2 * tm * u1 + rho * lam * tm * (t + 3.0) * u1 - x * P * u1 +
                   y * tp2 * u2) * r4 +
                  y * tm * (rho * (t + 3.0) + 2.0 * lam) * r6) / D},
      {m2(1, 4), (P * U * u2 -
                  (R * U + lam * T3 * u1 * u1 + lam * (t * t - 4.0 * t + 7.0) * u2 * u2) * r2 -
                  (2.0 * l2 * tm * u2 - rho * lam * tm * (t + 3.0) * u2 - x * P * u2 -
                   y * tp2 * u1) * r4 -
                  x * tm * (rho * (t + 3.0) - 2.0 * lam) * r6) / D},
      {m2(2, 3), -(P * U * u2 +
                   (R * U - lam * T3 * u1 * u1 - lam * (t * t - 4.0 * t + 7.0) * u2 * u2) * r2 -
                   (2.0 * l2 * tm * u2 + rho * lam * tm * (t + 3.0) * u2 - x * P * u2 -
                    y * tp2 * u1) * r4 +
                   x * tm * (rho * (t + 3.0) + 2.0 * lam) * r6) / D},
      {m2(2, 4), (P * U * u1 + 4.0 * lam * tm * u1 * u2 * r2 -
                  (2.0 * l2 * tm * u1 - rho * lam * tm * (t + 3.0) * u1 - x * P * u1 +
                   y * tp2 * u2) * r4 -
                  y * tm * (rho * (t + 3.0) - 2.0 * lam) * r6) / D},
      {m2(3, 4), -P / D2 * (U * U - 2.0 * lam * U * u2 * r2 + (2.0 * x + l2) * U * r4 -
                            2.0 * lam * (x * u2 + y * u1) * r6 + (x * x + y * y) * r8)},
      {m2(5, 6), lam * tm2 * (lam * r2 - 2.0 * u2) * r2},
  });

  const double o35_45 =
      -1.0 / (2.0 * D2) * tm * tp *
      (lam * U * u1 + (lam * s2 * u1 - 2.0 * l2 * u1 * u2 - 2.0 * y * U) * r2 +
       2.0 * lam * (x * u1 + y * u2) * r4 - 2.0 * x * y * r6) * r2;
  // The uncorrected e^{15} coefficient of Omega^3_5 carries lambda |u_e|^2 where
  // first-principles curvature gives lambda (u_e1^2 - u_e2^2).
  const double o35_15_u =
      variant == TableVariant::kCorrected ? lam * du : lam * U;
  o(3, 5) = two_form({
      {m2(1, 5), -1.0 / (2.0 * D) * tm * tp * (o35_15_u + (lam * s2 - 2.0 * y * u1) * r2) * r2},
      {m2(1, 6), 1.0 / D * tm * tp * (lam * u2 - s2 - x * r2) * u1 * r2},
      {m2(2, 5), 1.0 / D * tm * (lam * u1 - y * r2) * (tp * u2 + rho * tm * r2) * r2},
      {m2(2, 6), 1.0 / (2.0 * D) * tm *
                     (2.0 * rho * tm * U + lam * tp * du + 2.0 * tp * s2 * u2 -
                      (2.0 * rho * lam * tm * u2 + lam * tp * s2 - 2.0 * x * tp * u2) * r2 +
                      2.0 * rho * x * tm * r4) * r2},
      {m2(3, 5), -1.0 / (2.0 * D2) * tm *
                     (lam * tp * U * u2 +
                      (rho * lam * tm * U + l2 * tp * du - lam * tp * s2 * u2) * r2 -
                      (rho * lam * s2 * tm - lam * tp * (lam * s2 - 4.0 * y * u1)) * r4 +
                      2.0 * y * y * tp * r6) * r2},
      {m2(3, 6), -1.0 / (2.0 * D2) * tm *
                     ((2.0 * rho * tm + lam * tp) * U * u1 -
                      (2.0 * rho * tm * s2 * u1 -
                       tp * (lam * s2 * u1 - 2.0 * l2 * u1 * u2 - 2.0 * y * U)) * r2 +
                      2.0 * lam * tp * (x * u1 + y * u2) * r4 - 2.0 * x * y * tp * r6) * r2},
      {m2(4, 5), o35_45},
      {m2(4, 6), -1.0 / (2.0 * D2) * tm *
                     ((2.0 * rho * tm * u2 - tp * (lam * u2 - 2.0 * s2)) * U +
                      (rho * lam * tm * s2 + lam * tp * (lam * s2 - 4.0 * x * u2)) * r4 +
                      2.0 * x * x * tp * r6 -
                      (rho * tm * (lam * U + 2.0 * s2 * u2) +
                       tp * (3.0 * lam * s2 * u2 + l2 * du - 4.0 * x * U)) * r2) * r2},
  });
  o(3, 6) = two_form({
      {m2(1, 5), 1.0 / D * tm * (lam * u1 - y * r2) * (tp * u2 - rho * tm * r2) * r2},
      {m2(1, 6), -1.0 / (2.0 * D) * tm *
                     (2.0 * rho * tm * U - tp * (lam * du + 2.0 * s2 * u2) -
                      (2.0 * rho * lam * tm * u2 - lam * tp * s2 + 2.0 * x * tp * u2) * r2 +
                      2.0 * rho * x * tm * r4) * r2},
      {m2(2, 5), 1.0 / (2.0 * D) * tm * tp * (lam * du + (lam * s2 - 2.0 * y * u1) * r2) * r2},
      {m2(2, 6), -1.0 / D * tm * tp * (lam * u2 - s2 - x * r2) * u1 * r2},
      {m2(3, 6), -1.0 / (2.0 * D2) * tm *
                     ((2.0 * tp * s2 - (2.0 * rho * tm + lam * tp) * u2) * U -
                      (rho * lam * tm * s2 - lam * tp * (lam * s2 - 4.0 * x * u2)) * r4 +
                      2.0 * x * x * tp * r6 +
                      (rho * tm * (2.0 * s2 * u2 + lam * U) -
                       tp * (3.0 * lam * s2 * u2 + l2 * du - 4.0 * x * U)) * r2) * r2},
      {m2(4, 5), 1.0 / (2.0 * D2) * tm *
                     (lam * tp * u2 * U -
                      (rho * lam * tm * U - lam * tp * (lam * du - s2 * u2)) * r2 +
                      (rho * lam * tm * s2 + lam * tp * (lam * s2 - 4.0 * y * u1)) * r4 +
                      2.0 * y * y * tp * r6) * r2},
      {m2(4, 6), -1.0 / (2.0 * D2) * tm *
                     ((2.0 * rho * tm - lam * tp) * u1 * U -
                      2.0 * lam * tp * (x * u1 + y * u2) * r4 + 2.0 * x * y * tp * r6 -
                      (2.0 * rho * tm * s2 * u1 + lam * tp * s2 * u1 -
                       2.0 * tp * (l2 * u1 * u2 + y * U)) * r2) * r2},
  });
  // The uncorrected Omega^3_6 omits its e^{35} component, which equals the
  // e^{45} component of Omega^3_5.
  if (variant == TableVariant::kCorrected) o(3, 6)[m2(3, 5)] = o35_45;

  const Form extra = two_form({
      {m2(1, 2), -4.0 * tm * (lam * u2 - s2 - x * r2) * r2},
      {m2(1, 3), 2.0 / D * tm *
                     (2.0 * u1 * (lam * u2 - s2) - (rho * lam + l2 + 2.0 * x) * u1 * r2 +
                      (rho + lam) * y * r4) * r2},
      {m2(1, 4), 2.0 / D * tm * (2.0 * u2 + (rho - lam) * r2) * (lam * u2 - s2 - x * r2) * r2},
      {m2(2, 3), -2.0 / D * tm * (2.0 * u2 - (rho + lam) * r2) * (lam * u2 - s2 - x * r2) * r2},
      {m2(2, 4), 2.0 / D * tm *
                     (2.0 * u1 * (lam * u2 - s2) + (rho * lam - l2 - 2.0 * x) * u1 * r2 -
                      (rho - lam) * y * r4) * r2},
      {m2(3, 4), -4.0 / D2 * tm *
                     ((lam * u2 - s2) * U + (lam * u2 * s2 - l2 * U - x * U) * r2 +
                      (2.0 * lam * (x * u2 + y * u1) - x * s2) * r4 -
                      (x * x + y * y) * r6) * r2},
  });
  o(5, 6) = extra - o(1, 2) - o(3, 4);

  const double scale = k * k / (2.0 * r4 * D2);
  for (auto [i, j] : {std::pair{1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 6}, {3, 4},
                      {3, 5}, {3, 6}, {5, 6}})
    o(i, j) *= scale;
  complete_by_relations(o);
  return o;
}

double closed_form_trace_tau(const JParams& params, const AdaptedCoeffs& adapted,
                             double t) {
  const auto [rho, lam, x, y, r2, s2, k, u1, u2, D] = unpack(params, adapted);
  const double U = u1 * u1 + u2 * u2;
  const double l2 = lam * lam;
  const double X = x * x + y * y;
  const double du = u1 * u1 - u2 * u2;
  const double P = s2 * s2 - 2.0 * lam * s2 * u2 + 2.0 * x * U;
  const double w = lam * u1 * y * (s2 - lam * u2);
  const double A = (rho - l2 + 5.0 * x) * P - 3.0 * l2 * x * du - 6.0 * w + 6.0 * y * y * U +
                   t * (rho + l2 - 2.0 * x) * P +
                   t * t * ((-2.0 * rho + x) * P - l2 * x * du - 2.0 * w + 2.0 * y * y * U);
  const double Q = lam * s2 - 2.0 * u2 * x - 2.0 * u1 * y;
  const double B = r2 * lam *
                   ((rho - l2 + 2.0 * x) * Q - 6.0 * u2 * X + t * (rho + l2 - 2.0 * x) * Q +
                    t * t * (-2.0 * rho * Q - 2.0 * u2 * X));
  const double C = r2 * r2 * X *
                   ((rho - l2 + 5.0 * x) + t * (rho + l2 - 2.0 * x) + t * t * (-2.0 * rho + x));
  const double k4 = k * k * k * k;
  const double D4 = D * D * D * D;
  return -(t - 1.0) * k4 / (2.0 * D4) * (A + B + C);
}

}  // namespace nilflow

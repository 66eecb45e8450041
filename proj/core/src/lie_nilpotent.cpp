#include "nilflow/lie_nilpotent.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "nilflow/errors.hpp"
#include "nilflow/exterior.hpp"

namespace nilflow {

JParams::JParams(int rho, double lambda, double x, double y)
    : rho_(rho), lambda_(lambda), x_(x), y_(y) {
  if (rho != 0 && rho != 1) {
    throw InvalidArgumentError("rho must be 0 or 1, got " + std::to_string(rho));
  }
  if (!std::isfinite(lambda) || !std::isfinite(x) || !std::isfinite(y)) {
    throw InvalidArgumentError("complex structure parameters must be finite");
  }
  if (lambda < 0.0) {
    throw InvalidArgumentError("lambda must be non-negative");
  }
}

ComplexStructureEquations complex_structure_equations(const JParams& p) {
  return {double(p.rho()), 1.0, p.lambda(), Complex(p.x(), p.y())};
}

StructureConstants real_structure_constants(const JParams& p,
                                            const AdaptedCoeffs& a) {
  if (!(a.r_e2 > 0.0 && a.s_e2 > 0.0 && a.k_e2 > 0.0 && a.delta_e > 0.0)) {
    throw InvalidMetricError("adapted coefficients must be positive");
  }
  const double rho = p.rho();
  const double lam = p.lambda();
  const double x = p.x();
  const double y = p.y();
  const double r2 = a.r_e2;
  const double k = std::sqrt(a.k_e2);
  const double dl = a.delta_e;
  const double dl2 = dl * dl;
  const double u1 = a.u_e.real();
  const double u2 = a.u_e.imag();

  StructureConstants sc;
  sc.set(5, 1, 3, k / dl * (rho + lam));
  sc.set(5, 2, 4, -k / dl * (rho - lam));
  sc.set(5, 3, 4, 2.0 * k / dl2 * (r2 * y - lam * u1));

  sc.set(6, 1, 2, -2.0 * k / r2);
  sc.set(6, 1, 3, 2.0 * k * u1 / (r2 * dl));
  sc.set(6, 1, 4, k / (r2 * dl) * (r2 * (rho - lam) + 2.0 * u2));
  sc.set(6, 2, 3, k / (r2 * dl) * (r2 * (rho + lam) - 2.0 * u2));
  sc.set(6, 2, 4, 2.0 * k * u1 / (r2 * dl));
  sc.set(6, 3, 4,
         -2.0 * k / (r2 * dl2) *
             (r2 * r2 * x - lam * r2 * u2 + u1 * u1 + u2 * u2));
  return sc;
}

NilpotencyReport check_nilpotency(const StructureConstants& sc) {
  NilpotencyReport report;
  const double scale = std::max(1.0, sc.max_abs());

  report.jacobi_ok = true;
  for (int k = 1; k <= kDim; ++k) {
    const Form dd = d(d_generator(sc, k), sc);
    if (!dd.is_zero(tol::kAbsoluteFloor * scale * scale)) report.jacobi_ok = false;
  }

  // [e_i, e_j] = -sum_k c^k_{ij} e_k, so [g, [g, g]] = 0 iff
  // sum_k c^k_{ij} c^l_{mk} = 0 for all i, j, m, l.
  report.two_step = true;
  for (int i = 1; i <= kDim && report.two_step; ++i)
    for (int j = i + 1; j <= kDim && report.two_step; ++j)
      for (int m = 1; m <= kDim && report.two_step; ++m)
        for (int l = 1; l <= kDim; ++l) {
          double s = 0.0;
          for (int k = 1; k <= kDim; ++k) s += sc(k, i, j) * sc(l, m, k);
          if (std::abs(s) > tol::kAbsoluteFloor * scale * scale) {
            report.two_step = false;
            break;
          }
        }

  Eigen::Matrix<double, kDim, 15> dmat;
  for (int k = 1; k <= kDim; ++k) {
    int col = 0;
    for (int i = 1; i <= kDim; ++i)
      for (int j = i + 1; j <= kDim; ++j) dmat(k - 1, col++) = sc(k, i, j);
  }
  Eigen::FullPivLU<Eigen::Matrix<double, kDim, 15>> lu(dmat);
  lu.setThreshold(tol::kAbsoluteFloor);
  report.b1 = kDim - static_cast<int>(lu.rank());
  return report;
}

std::string_view to_string(GroupId id) {
  switch (id) {
    case GroupId::N2: return "N2";
    case GroupId::N3: return "N3";
    case GroupId::N4: return "N4";
    case GroupId::N5: return "N5";
    case GroupId::N6: return "N6";
    case GroupId::N8: return "N8";
    case GroupId::Unknown: return "Unknown";
  }
  return "Unknown";
}

GroupId classify_group(const JParams& p) {
  if (p.lambda() != 0.0) return GroupId::Unknown;
  if (p.rho() == 0) {
    if (p.y() != 0.0) return GroupId::N2;
    if (p.x() != 0.0) return GroupId::N3;
    return GroupId::N8;
  }
  if (1.0 + 4.0 * p.x() > 4.0 * p.y() * p.y()) return GroupId::N5;
  return GroupId::Unknown;
}

}  // namespace nilflow

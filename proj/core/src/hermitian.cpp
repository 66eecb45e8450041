#include "nilflow/hermitian.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "nilflow/errors.hpp"

namespace nilflow {

namespace {

const Complex kI(0.0, 1.0);

double magnitude_scale(std::initializer_list<double> values) {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return std::max(s, 1.0);
}

}  // namespace

AdaptedCoeffs AdaptedCoeffs::make(double r_e2, double s_e2, double k_e2,
                                  Complex u_e) {
  if (!(r_e2 > 0.0 && s_e2 > 0.0 && k_e2 > 0.0)) {
    throw InvalidMetricError("adapted coefficients must be positive");
  }
  const double delta2 = r_e2 * s_e2 - std::norm(u_e);
  if (!(delta2 > 0.0)) {
    throw InvalidMetricError("r_e^2 s_e^2 - |u_e|^2 must be positive");
  }
  return {r_e2, s_e2, k_e2, u_e, std::sqrt(delta2)};
}

void BundleMetricCoeffs::validate() const {
  if (!(tr2 > 0.0 && ts2 > 0.0 && tk2 > 0.0) || !std::isfinite(tr2) ||
      !std::isfinite(ts2) || !std::isfinite(tk2)) {
    throw InvalidMetricError("bundle metric coefficients must be positive");
  }
}

double det_quantity(const MetricCoeffs& m) {
  const double vals[] = {m.r2, m.s2, m.k2, m.u.real(), m.u.imag(),
                         m.v.real(), m.v.imag(), m.z.real(), m.z.imag()};
  for (double v : vals)
    if (!std::isfinite(v)) throw InvalidMetricError("non-finite coefficient");
  if (!(m.r2 > 0.0 && m.s2 > 0.0 && m.k2 > 0.0)) {
    throw InvalidMetricError("r2, s2, k2 must be positive");
  }
  if (!(m.r2 * m.s2 > std::norm(m.u) && m.s2 * m.k2 > std::norm(m.v) &&
        m.r2 * m.k2 > std::norm(m.z))) {
    throw InvalidMetricError("a 2x2 principal minor is not positive");
  }
  const double D = m.r2 * m.s2 * m.k2 +
                   2.0 * (kI * std::conj(m.u) * std::conj(m.v) * m.z).real() -
                   m.k2 * std::norm(m.u) - m.r2 * std::norm(m.v) -
                   m.s2 * std::norm(m.z);
  if (!(D > 0.0)) throw InvalidMetricError("D = 8i det(omega) is not positive");
  return D;
}

double psi_norm(const MetricCoeffs& m) { return std::sqrt(8.0 / det_quantity(m)); }

Form fundamental_form(const MetricCoeffs& m, const ComplexFrame& f) {
  (void)det_quantity(m);
  Form two_omega = kI * (m.r2 * f.zeta_form({1}, {1}) +
                         m.s2 * f.zeta_form({2}, {2}) +
                         m.k2 * f.zeta_form({3}, {3}));
  two_omega += m.u * f.zeta_form({1}, {2}) - std::conj(m.u) * f.zeta_form({2}, {1});
  two_omega += m.v * f.zeta_form({2}, {3}) - std::conj(m.v) * f.zeta_form({3}, {2});
  two_omega += m.z * f.zeta_form({1}, {3}) - std::conj(m.z) * f.zeta_form({3}, {1});
  return 0.5 * two_omega;
}

AdaptedCoeffs adapted_coeffs(const MetricCoeffs& m) {
  const double D = det_quantity(m);
  AdaptedCoeffs a = AdaptedCoeffs::make(
      m.r2 - std::norm(m.z) / m.k2, m.s2 - std::norm(m.v) / m.k2, m.k2,
      m.u - kI * std::conj(m.v) * m.z / m.k2);
  // Same quantity, evaluated through D for accuracy.
  a.delta_e = std::sqrt(D / m.k2);
  return a;
}

AdaptedBasis adapted_basis(const JParams& /*params*/, const MetricCoeffs& m) {
  const AdaptedCoeffs a = adapted_coeffs(m);
  const double r = std::sqrt(a.r_e2);
  const double k = std::sqrt(a.k_e2);
  const double dl = a.delta_e;

  // tau^a = e^{2a-1} + i e^{2a}. Inverting
  //   tau^1 = r sigma^1 + (i conj(u_e)/r) sigma^2, tau^2 = (delta/r) sigma^2,
  //   tau^3 = k sigma^3
  // gives sigma in tau; zeta follows from reversing the v, z reduction.
  using Row3 = std::array<Complex, 3>;
  const Row3 sigma1 = {1.0 / r, -kI * std::conj(a.u_e) / (r * dl), 0.0};
  const Row3 sigma2 = {0.0, r / dl, 0.0};
  const Row3 sigma3 = {0.0, 0.0, 1.0 / k};

  std::array<Row3, 3> zeta_in_tau;
  zeta_in_tau[0] = sigma1;
  zeta_in_tau[1] = sigma2;
  for (int c = 0; c < 3; ++c)
    zeta_in_tau[2][c] = sigma3[c] + kI * m.v / m.k2 * sigma2[c] +
                        kI * m.z / m.k2 * sigma1[c];

  std::array<ComplexFrame::Row, 3> rows{};
  for (int a_idx = 0; a_idx < 3; ++a_idx)
    for (int c = 0; c < 3; ++c) {
      rows[a_idx][2 * c] = zeta_in_tau[a_idx][c];
      rows[a_idx][2 * c + 1] = kI * zeta_in_tau[a_idx][c];
    }
  return {ComplexFrame(rows), a};
}

AlmostDiagonalReduction reduce_almost_diagonal(const JParams& /*params*/,
                                               const MetricCoeffs& m) {
  (void)det_quantity(m);
  AlmostDiagonalReduction out;
  out.sigma_in_zeta = {{{1.0, 0.0, 0.0},
                        {0.0, 1.0, 0.0},
                        {-kI * m.z / m.k2, -kI * m.v / m.k2, 1.0}}};
  out.metric = {m.r2 - std::norm(m.z) / m.k2,
                m.s2 - std::norm(m.v) / m.k2,
                m.k2,
                m.u - kI * std::conj(m.v) * m.z / m.k2,
                {},
                {}};
  return out;
}

HermitianStructure make_structure(const JParams& params, const MetricCoeffs& m) {
  AdaptedBasis basis = adapted_basis(params, m);
  StructureConstants sc = real_structure_constants(params, basis.coeffs);
  Form omega = fundamental_form(m, basis.frame);
  return {params, m, std::move(basis), sc, std::move(omega)};
}

Form d_omega_squared(const HermitianStructure& h) {
  return d(wedge(h.omega, h.omega), h.sc);
}

Form i_ddbar_omega(const HermitianStructure& h) {
  const Form delbar = del_delbar(h.omega, h.basis.frame, h.sc).delbar;
  return kI * del_delbar(delbar, h.basis.frame, h.sc).del;
}

Complex balanced_defect(const JParams& p, const MetricCoeffs& m) {
  const Complex lhs = (m.s2 * m.k2 - std::norm(m.v)) +
                      Complex(p.x(), p.y()) * (m.r2 * m.k2 - std::norm(m.z));
  const Complex rhs =
      kI * p.lambda() * (m.k2 * std::conj(m.u) + kI * m.v * std::conj(m.z));
  return lhs - rhs;
}

bool is_balanced(const JParams& params, const MetricCoeffs& m) {
  const HermitianStructure h = make_structure(params, m);
  const double sc_scale = std::max(1.0, h.sc.max_abs());
  const bool by_forms = d_omega_squared(h).is_zero(tol::kVanishing * sc_scale);

  const double coeff_scale = magnitude_scale(
      {m.s2 * m.k2, std::norm(m.v), std::abs(Complex(params.x(), params.y())) *
                                        (m.r2 * m.k2 + std::norm(m.z)),
       params.lambda() * (m.k2 * std::abs(m.u) + std::abs(m.v) * std::abs(m.z))});
  const bool by_formula =
      std::abs(balanced_defect(params, m)) <= tol::kVanishing * coeff_scale;

  if (by_forms != by_formula) {
    throw ConsistencyError("balanced test: exterior route and closed form differ");
  }
  return by_forms;
}

bool is_lck(const JParams& p, const MetricCoeffs& m) {
  (void)det_quantity(m);
  if (!(p.rho() == 0 && p.lambda() == 0.0 && p.y() == 0.0 && p.x() == 1.0)) {
    return false;
  }
  const double a = m.r2 * m.k2 - std::norm(m.z);
  const double b = m.s2 * m.k2 - std::norm(m.v);
  const Complex lhs = m.k2 * m.u;
  const Complex rhs = kI * m.z * std::conj(m.v);
  const double scale = magnitude_scale({a, b, std::abs(lhs), std::abs(rhs)});
  return std::abs(a - b) <= tol::kVanishing * scale &&
         std::abs(lhs - rhs) <= tol::kVanishing * scale;
}

double lee_form_residual(const JParams& params, const MetricCoeffs& m) {
  const HermitianStructure h = make_structure(params, m);
  const Form domega = d(h.omega, h.sc);
  const double norm = domega.max_abs();
  if (norm == 0.0) return 0.0;

  // Columns: e^k ^ omega, restricted to 3-form coefficients (all real).
  std::vector<int> masks;
  for (int mask = 0; mask < kBasisSize; ++mask)
    if (degree(static_cast<Mask>(mask)) == 3) masks.push_back(mask);
  Eigen::MatrixXd A(masks.size(), kDim);
  Eigen::VectorXd b(masks.size());
  for (int k = 0; k < kDim; ++k) {
    const Form col = wedge(Form::basis(static_cast<Mask>(1u << k)), h.omega);
    for (std::size_t r = 0; r < masks.size(); ++r)
      A(r, k) = col[static_cast<Mask>(masks[r])].real();
  }
  for (std::size_t r = 0; r < masks.size(); ++r)
    b(r) = domega[static_cast<Mask>(masks[r])].real();
  const Eigen::VectorXd theta = A.colPivHouseholderQr().solve(b);
  return (A * theta - b).cwiseAbs().maxCoeff() / norm;
}

bool is_pluriclosed(const JParams& params, const MetricCoeffs& m) {
  const HermitianStructure h = make_structure(params, m);
  const double scale = std::max(1.0, h.sc.max_abs() * h.sc.max_abs());
  return i_ddbar_omega(h).is_zero(tol::kVanishing * scale);
}

}  // namespace nilflow

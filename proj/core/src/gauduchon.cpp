#include "nilflow/gauduchon.hpp"

#include <algorithm>
#include <cmath>

#include "nilflow/errors.hpp"

namespace nilflow {

namespace {

/// J on basis vectors: Je_{2a-1} = e_{2a}, Je_{2a} = -e_{2a-1} (0-based
/// indices below).
constexpr int j_partner(int k) { return (k % 2 == 0) ? k + 1 : k - 1; }
constexpr double j_sign(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

using Tensor3 = std::array<std::array<std::array<double, kDim>, kDim>, kDim>;

Tensor3 three_form_tensor(const Form& f) {
  Tensor3 t{};
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      for (int c = 0; c < kDim; ++c) {
        if (a == b || b == c || a == c) continue;
        Vector6 va{}, vb{}, vc{};
        va[a] = 1.0;
        vb[b] = 1.0;
        vc[c] = 1.0;
        const std::array<Vector6, 3> vs{va, vb, vc};
        t[a][b][c] = evaluate(f, vs).real();
      }
  return t;
}

}  // namespace

double FormMatrix::max_abs() const {
  double mx = 0.0;
  for (const auto& row : m_)
    for (const auto& f : row) mx = std::max(mx, f.max_abs());
  return mx;
}

double FormMatrix::antisymmetry_defect() const {
  double mx = 0.0;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      mx = std::max(mx, (m_[i][j] + m_[j][i]).max_abs());
  return mx;
}

void FormMatrix::antisymmetrize_from_upper() {
  for (int i = 0; i < kDim; ++i) {
    m_[i][i] = Form{};
    for (int j = 0; j < i; ++j) m_[i][j] = -m_[j][i];
  }
}

EntryComparison compare_entries(const FormMatrix& a, const FormMatrix& b) {
  EntryComparison out;
  // An entry passes at relative tolerance rel when its error is <= rel;
  // the scale floor turns kRelative into the absolute floor kAbsoluteFloor.
  constexpr double floor = tol::kAbsoluteFloor / tol::kRelative;
  for (int i = 1; i <= kDim; ++i)
    for (int j = 1; j <= kDim; ++j) {
      const Form diff = a(i, j) - b(i, j);
      const double scale = std::max({a(i, j).max_abs(), b(i, j).max_abs(), floor});
      for (int m = 0; m < kBasisSize; ++m) {
        const double err = std::abs(diff[static_cast<Mask>(m)]) / scale;
        if (err > out.max_relative_error) {
          out = {err, i, j, static_cast<Mask>(m)};
        }
      }
    }
  return out;
}

ConnectionForms connection_one_forms_tau(const StructureConstants& sc,
                                         double tau) {
  const Form omega = Form::monomial({1, 2}) + Form::monomial({3, 4}) +
                     Form::monomial({5, 6});
  const Tensor3 dw = three_form_tensor(d(omega, sc));

  ConnectionForms sigma;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      Form f;
      for (int k = 0; k < kDim; ++k) {
        const double lc = 0.5 * (sc(i + 1, j + 1, k + 1) - sc(k + 1, i + 1, j + 1) +
                                 sc(j + 1, k + 1, i + 1));
        const double jjj = j_sign(k) * j_sign(j) * j_sign(i) *
                           dw[j_partner(k)][j_partner(j)][j_partner(i)];
        const double jii = j_sign(k) * dw[j_partner(k)][j][i];
        const double v = lc + (1.0 - tau) / 4.0 * jjj - (1.0 + tau) / 4.0 * jii;
        f[static_cast<Mask>(1u << k)] = v;
      }
      sigma(i + 1, j + 1) = f;
    }
  return sigma;
}

CurvatureForms curvature(const ConnectionForms& sigma,
                         const StructureConstants& sc) {
  CurvatureForms omega;
  for (int i = 1; i <= kDim; ++i)
    for (int j = 1; j <= kDim; ++j) {
      Form f = d(sigma(i, j), sc);
      for (int k = 1; k <= kDim; ++k) f += wedge(sigma(i, k), sigma(k, j));
      omega(i, j) = f;
    }
  return omega;
}

Form trace_wedge(const CurvatureForms& curv) {
  Form t;
  for (int i = 1; i <= kDim; ++i)
    for (int j = i + 1; j <= kDim; ++j) t += wedge(curv(i, j), curv(i, j));
  return t;
}

Complex zeta_1212_coefficient(const Form& four_form, double delta_e) {
  return four_form[mask_of({1, 2, 3, 4})] * (delta_e * delta_e / 4.0);
}

double off_1234_ratio(const Form& four_form) {
  const Mask main = mask_of({1, 2, 3, 4});
  double off = 0.0;
  for (int m = 0; m < kBasisSize; ++m)
    if (m != main) off = std::max(off, std::abs(four_form[static_cast<Mask>(m)]));
  const double dom = std::abs(four_form[main]);
  if (off == 0.0) return 0.0;
  return dom == 0.0 ? INFINITY : off / dom;
}

namespace {

void require_bundle_gate(const JParams& params, const MetricCoeffs& omega,
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

}  // namespace

ConnectionForms bundle_connection_kappa(const JParams& params,
                                        const MetricCoeffs& omega,
                                        const BundleMetricCoeffs& H,
                                        double kappa) {
  require_bundle_gate(params, omega, H);
  const StructureConstants sc_h = real_structure_constants(
      params, AdaptedCoeffs::make(H.tr2, H.ts2, H.tk2, 0.0));
  const ConnectionForms tilde = connection_one_forms_tau(sc_h, kappa);

  const double mr = std::sqrt(omega.r2 / H.tr2);
  const double ms = std::sqrt(omega.s2 / H.ts2);
  const double mk = std::sqrt(omega.k2 / H.tk2);
  const std::array<double, kDim> M{mr, mr, ms, ms, mk, mk};

  ConnectionForms sigma;
  for (int i = 1; i <= kDim; ++i)
    for (int j = i + 1; j <= kDim; ++j) {
      Form f;
      for (int k = 1; k <= kDim; ++k) {
        const Mask mk_mask = static_cast<Mask>(1u << (k - 1));
        f[mk_mask] = tilde(i, j)[mk_mask] * (M[i - 1] / (M[j - 1] * M[k - 1]));
      }
      sigma(i, j) = f;
    }
  sigma.antisymmetrize_from_upper();
  return sigma;
}

CurvatureForms bundle_curvature(const JParams& params, const MetricCoeffs& omega,
                                const BundleMetricCoeffs& H, double kappa) {
  const ConnectionForms sigma = bundle_connection_kappa(params, omega, H, kappa);
  const StructureConstants sc = real_structure_constants(
      params, AdaptedCoeffs::make(omega.r2, omega.s2, omega.k2, 0.0));
  return curvature(sigma, sc);
}

InstantonCheck is_instanton(const CurvatureForms& curv, const Form& omega_form,
                            const ComplexFrame& frame) {
  InstantonCheck out;
  const double scale = curv.max_abs();
  if (scale == 0.0) {
    out.pq_ok = out.hym_ok = true;
    return out;
  }
  const Form omega2 = wedge(omega_form, omega_form);
  for (int i = 1; i <= kDim; ++i)
    for (int j = i + 1; j <= kDim; ++j) {
      const Form& f = curv(i, j);
      out.pq_residual = std::max(
          {out.pq_residual, pq_component(f, frame, 2, 0).max_abs() / scale,
           pq_component(f, frame, 0, 2).max_abs() / scale});
      out.hym_residual =
          std::max(out.hym_residual, wedge(omega2, f).max_abs() / scale);
    }
  out.pq_ok = out.pq_residual <= tol::kVanishing;
  out.hym_ok = out.hym_residual <= tol::kVanishing;
  return out;
}

bool nabla_psi_check(const JParams& params, const AdaptedCoeffs& adapted,
                     double tau) {
  const StructureConstants sc = real_structure_constants(params, adapted);
  const ConnectionForms sigma = connection_one_forms_tau(sc, tau);
  const Form sum = sigma(1, 2) + sigma(3, 4) + sigma(5, 6);
  return sum.is_zero(tol::kVanishing * std::max(1.0, sc.max_abs()));
}

}  // namespace nilflow

#include "nilflow/exterior.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "nilflow/errors.hpp"

namespace nilflow {

namespace {

constexpr Mask kHolomorphicBits = 0b000111;

struct SignTable {
  std::array<std::array<signed char, kBasisSize>, kBasisSize> s{};
  constexpr SignTable() {
    for (int a = 0; a < kBasisSize; ++a)
      for (int b = 0; b < kBasisSize; ++b)
        s[a][b] = static_cast<signed char>(
            wedge_sign(static_cast<Mask>(a), static_cast<Mask>(b)));
  }
};
constexpr SignTable kSigns{};

/// Determinant of a small dense real matrix (p <= 6) by Gaussian elimination
/// with partial pivoting.
double small_det(std::array<std::array<double, kDim>, kDim> m, int p) {
  double det = 1.0;
  for (int c = 0; c < p; ++c) {
    int piv = c;
    for (int r = c + 1; r < p; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < p; ++r) {
      const double f = m[r][c] / m[c][c];
      for (int k = c; k < p; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

int bidegree_p(Mask m) { return degree(static_cast<Mask>(m & kHolomorphicBits)); }
int bidegree_q(Mask m) { return degree(static_cast<Mask>(m >> 3)); }

void check_index(int i) {
  if (i < 1 || i > kDim) {
    throw InvalidArgumentError("form index out of range: " + std::to_string(i));
  }
}

}  // namespace

Form Form::scalar(Complex c) { return basis(0, c); }

Form Form::basis(Mask m, Complex c) {
  Form f;
  f.coeffs_[m & (kBasisSize - 1)] = c;
  return f;
}

Form Form::monomial(std::initializer_list<int> indices, Complex c) {
  Form f = scalar(c);
  for (int i : indices) {
    check_index(i);
    f = wedge(f, basis(static_cast<Mask>(1u << (i - 1))));
  }
  return f;
}

Form& Form::operator+=(const Form& o) {
  for (int m = 0; m < kBasisSize; ++m) coeffs_[m] += o.coeffs_[m];
  return *this;
}

Form& Form::operator-=(const Form& o) {
  for (int m = 0; m < kBasisSize; ++m) coeffs_[m] -= o.coeffs_[m];
  return *this;
}

Form& Form::operator*=(Complex s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Form Form::degree_part(int p) const {
  Form f;
  for (int m = 0; m < kBasisSize; ++m)
    if (degree(static_cast<Mask>(m)) == p) f.coeffs_[m] = coeffs_[m];
  return f;
}

Form Form::conj() const {
  Form f;
  for (int m = 0; m < kBasisSize; ++m) f.coeffs_[m] = std::conj(coeffs_[m]);
  return f;
}

Form Form::real_part() const {
  Form f;
  for (int m = 0; m < kBasisSize; ++m) f.coeffs_[m] = coeffs_[m].real();
  return f;
}

double Form::max_abs() const {
  double mx = 0.0;
  for (const auto& c : coeffs_) mx = std::max(mx, std::abs(c));
  return mx;
}

Form Form::pruned(double abs_tol) const {
  Form f = *this;
  for (auto& c : f.coeffs_)
    if (std::abs(c) <= abs_tol) c = 0.0;
  return f;
}

bool Form::approx_equal(const Form& o, double rel, double abs_floor) const {
  const double scale = std::max(max_abs(), o.max_abs());
  const double tolerance = std::max(rel * scale, abs_floor);
  for (int m = 0; m < kBasisSize; ++m)
    if (std::abs(coeffs_[m] - o.coeffs_[m]) > tolerance) return false;
  return true;
}

double Form::relative_distance(const Form& o) const {
  const double scale = std::max(max_abs(), o.max_abs());
  if (scale == 0.0) return 0.0;
  return (*this - o).max_abs() / scale;
}

Form wedge(const Form& a, const Form& b) {
  Form out;
  const auto& ca = a.coefficients();
  const auto& cb = b.coefficients();
  for (int i = 0; i < kBasisSize; ++i) {
    if (ca[i] == Complex{}) continue;
    for (int j = 0; j < kBasisSize; ++j) {
      if ((i & j) || cb[j] == Complex{}) continue;
      out[static_cast<Mask>(i | j)] += double(kSigns.s[i][j]) * ca[i] * cb[j];
    }
  }
  return out;
}

Form wedge(std::initializer_list<Form> factors) {
  Form out = Form::scalar(1.0);
  for (const auto& f : factors) out = wedge(out, f);
  return out;
}

Form d_generator(const StructureConstants& sc, int k) {
  check_index(k);
  Form f;
  for (int i = 1; i <= kDim; ++i)
    for (int j = i + 1; j <= kDim; ++j)
      if (const double c = sc(k, i, j); c != 0.0) f[mask_of({i, j})] = c;
  return f;
}

Form d(const Form& a, const StructureConstants& sc) {
  std::array<Form, kDim> dgen;
  for (int k = 1; k <= kDim; ++k) dgen[k - 1] = d_generator(sc, k);

  Form out;
  for (int m = 1; m < kBasisSize; ++m) {
    const Complex coef = a[static_cast<Mask>(m)];
    if (coef == Complex{}) continue;
    // e^I = e^{I<k} ^ e^k ^ e^{I>k}; replace the middle factor by de^k.
    int position = 0;
    for (int b = 0; b < kDim; ++b) {
      if (!((m >> b) & 1)) continue;
      const Mask below = static_cast<Mask>(m & ((1 << b) - 1));
      const Mask above = static_cast<Mask>(m & ~((1 << (b + 1)) - 1));
      const double sgn = (position % 2) ? -1.0 : 1.0;
      const auto& dk = dgen[b].coefficients();
      for (int pair = 0; pair < kBasisSize; ++pair) {
        if (dk[pair] == Complex{}) continue;
        if ((pair & below) || (pair & above)) continue;
        const int s1 = kSigns.s[below][pair];
        const int s2 = kSigns.s[below | pair][above];
        out[static_cast<Mask>(below | pair | above)] +=
            sgn * s1 * s2 * coef * dk[pair];
      }
      ++position;
    }
  }
  return out;
}

Complex evaluate(const Form& a, std::span<const Vector6> vectors) {
  const int p = static_cast<int>(vectors.size());
  if (p > kDim) return 0.0;
  Complex total = 0.0;
  for (int m = 0; m < kBasisSize; ++m) {
    if (degree(static_cast<Mask>(m)) != p || a[static_cast<Mask>(m)] == Complex{})
      continue;
    std::array<std::array<double, kDim>, kDim> sub{};
    int col = 0;
    for (int b = 0; b < kDim; ++b) {
      if (!((m >> b) & 1)) continue;
      for (int r = 0; r < p; ++r) sub[r][col] = vectors[r][b];
      ++col;
    }
    total += a[static_cast<Mask>(m)] * small_det(sub, p);
  }
  return total;
}

ExteriorMap::ExteriorMap(const Matrix6& images)
    : table_(kBasisSize * kBasisSize, Complex{}) {
  std::array<Form, kDim> one_forms;
  for (int r = 0; r < kDim; ++r)
    for (int c = 0; c < kDim; ++c)
      one_forms[r][static_cast<Mask>(1u << c)] = images[r][c];

  std::array<Form, kBasisSize> column;
  column[0] = Form::scalar(1.0);
  for (int m = 1; m < kBasisSize; ++m) {
    // Strip the highest index: e^I = e^{I'} ^ e^top.
    int top = kDim - 1;
    while (!((m >> top) & 1)) --top;
    column[m] = wedge(column[m & ~(1 << top)], one_forms[top]);
  }
  for (int i = 0; i < kBasisSize; ++i)
    for (int j = 0; j < kBasisSize; ++j)
      table_[j * kBasisSize + i] = column[i][static_cast<Mask>(j)];
}

Form ExteriorMap::apply(const Form& a) const {
  Form out;
  for (int i = 0; i < kBasisSize; ++i) {
    const Complex c = a[static_cast<Mask>(i)];
    if (c == Complex{}) continue;
    for (int j = 0; j < kBasisSize; ++j)
      out[static_cast<Mask>(j)] += table_[j * kBasisSize + i] * c;
  }
  return out;
}

ComplexFrame::ComplexFrame(const std::array<Row, 3>& zeta_in_e)
    : rows_(zeta_in_e) {
  const Complex I(0.0, 1.0);
  double scale = 0.0;
  for (const auto& row : rows_)
    for (const auto& c : row) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw InvalidFrameError("non-finite frame coefficient");
      scale = std::max(scale, std::abs(c));
    }
  if (scale == 0.0) throw InvalidFrameError("zero frame");
  for (const auto& row : rows_)
    for (int a = 0; a < 3; ++a)
      if (std::abs(row[2 * a + 1] - I * row[2 * a]) > 1e-12 * scale)
        throw InvalidFrameError("row is not of type (1,0)");

  Eigen::Matrix<Complex, kDim, kDim> b;
  for (int a = 0; a < 3; ++a)
    for (int m = 0; m < kDim; ++m) {
      b(a, m) = rows_[a][m];
      b(a + 3, m) = std::conj(rows_[a][m]);
    }
  Eigen::FullPivLU<Eigen::Matrix<Complex, kDim, kDim>> lu(b);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw InvalidFrameError("singular change of basis");
  const Eigen::Matrix<Complex, kDim, kDim> inv = lu.inverse();

  ExteriorMap::Matrix6 to{}, from{};
  for (int r = 0; r < kDim; ++r)
    for (int c = 0; c < kDim; ++c) {
      from[r][c] = b(r, c);
      to[r][c] = inv(r, c);
    }
  to_complex_ = std::make_shared<const ExteriorMap>(to);
  from_complex_ = std::make_shared<const ExteriorMap>(from);
}

ComplexFrame ComplexFrame::standard() {
  std::array<Row, 3> rows{};
  for (int a = 0; a < 3; ++a) {
    rows[a][2 * a] = 1.0;
    rows[a][2 * a + 1] = Complex(0.0, 1.0);
  }
  return ComplexFrame(rows);
}

Form ComplexFrame::zeta(int a) const {
  if (a < 1 || a > 3) throw InvalidArgumentError("zeta index out of range");
  Form f;
  for (int m = 0; m < kDim; ++m) f[static_cast<Mask>(1u << m)] = rows_[a - 1][m];
  return f;
}

Form ComplexFrame::zeta_bar(int a) const { return zeta(a).conj(); }

ComplexMonomial complex_monomial(std::initializer_list<int> holomorphic,
                                 std::initializer_list<int> antiholomorphic) {
  Mask mask = 0;
  int sign = 1;
  auto push = [&](int bit) {
    const Mask b = static_cast<Mask>(1u << bit);
    const int s = wedge_sign(mask, b);
    if (s == 0) {
      sign = 0;
      return;
    }
    sign *= s;
    mask = static_cast<Mask>(mask | b);
  };
  for (int h : holomorphic) {
    if (h < 1 || h > 3) throw InvalidArgumentError("zeta index out of range");
    push(h - 1);
  }
  for (int a : antiholomorphic) {
    if (a < 1 || a > 3) throw InvalidArgumentError("zeta index out of range");
    push(a + 2);
  }
  return {mask, sign};
}

Form ComplexFrame::zeta_form(std::initializer_list<int> holomorphic,
                             std::initializer_list<int> antiholomorphic) const {
  const auto [mask, sign] = complex_monomial(holomorphic, antiholomorphic);
  if (sign == 0) return Form{};
  return from_complex_basis(Form::basis(mask, double(sign)));
}

Form ComplexFrame::to_complex_basis(const Form& a) const {
  return to_complex_->apply(a);
}

Form ComplexFrame::from_complex_basis(const Form& a) const {
  return from_complex_->apply(a);
}

Complex ComplexFrame::zeta_coefficient(
    const Form& a, std::initializer_list<int> holomorphic,
    std::initializer_list<int> antiholomorphic) const {
  const auto [mask, sign] = complex_monomial(holomorphic, antiholomorphic);
  if (sign == 0) return 0.0;
  return double(sign) * to_complex_basis(a)[mask];
}

std::map<Bidegree, Form> decompose_pq(const Form& a, const ComplexFrame& frame) {
  const Form c = frame.to_complex_basis(a);
  std::map<Bidegree, Form> parts;
  for (int m = 0; m < kBasisSize; ++m) {
    const Complex v = c[static_cast<Mask>(m)];
    if (v == Complex{}) continue;
    parts[{bidegree_p(static_cast<Mask>(m)), bidegree_q(static_cast<Mask>(m))}]
        [static_cast<Mask>(m)] = v;
  }
  for (auto& [pq, f] : parts) f = frame.from_complex_basis(f);
  return parts;
}

Form pq_component(const Form& a, const ComplexFrame& frame, int p, int q) {
  const Form c = frame.to_complex_basis(a);
  Form part;
  for (int m = 0; m < kBasisSize; ++m)
    if (bidegree_p(static_cast<Mask>(m)) == p &&
        bidegree_q(static_cast<Mask>(m)) == q)
      part[static_cast<Mask>(m)] = c[static_cast<Mask>(m)];
  return frame.from_complex_basis(part);
}

DelDelbar del_delbar(const Form& a, const ComplexFrame& frame,
                     const StructureConstants& sc) {
  DelDelbar out;
  for (const auto& [pq, component] : decompose_pq(a, frame)) {
    const Form dc = d(component, sc);
    out.del += pq_component(dc, frame, pq.first + 1, pq.second);
    out.delbar += pq_component(dc, frame, pq.first, pq.second + 1);
  }
  return out;
}

}  // namespace nilflow

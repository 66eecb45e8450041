#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "nilflow/structure_constants.hpp"
#include "nilflow/tolerance.hpp"

namespace nilflow {

using Complex = std::complex<double>;

inline constexpr int kDim = 6;
inline constexpr int kBasisSize = 1 << kDim;

/// A strictly increasing multi-index over {1..6}, encoded as a 6-bit mask
/// (bit i-1 set <=> index i present).
using Mask = std::uint8_t;

[[nodiscard]] constexpr int degree(Mask m) {
  int n = 0;
  for (int b = 0; b < kDim; ++b) n += (m >> b) & 1;
  return n;
}

/// Mask for a set of 1-based indices; order is irrelevant.
[[nodiscard]] constexpr Mask mask_of(std::initializer_list<int> indices) {
  Mask m = 0;
  for (int i : indices) m = static_cast<Mask>(m | (1u << (i - 1)));
  return m;
}

/// Sign of e^A ^ e^B relative to e^{A|B}; 0 when A and B overlap.
[[nodiscard]] constexpr int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int swaps = 0;
  for (int i = 0; i < kDim; ++i) {
    if (!((a >> i) & 1)) continue;
    for (int j = 0; j < i; ++j) swaps += (b >> j) & 1;
  }
  return (swaps & 1) ? -1 : 1;
}

/// A left-invariant complex-valued differential form on the 6-dimensional
/// Lie algebra, stored as 64 coefficients over the monomials e^I.
///
/// Mixed degrees are allowed; operations act degree by degree.
class Form {
 public:
  Form() { coeffs_.fill(Complex{}); }

  static Form scalar(Complex c);
  /// e^I for a mask I, times c.
  static Form basis(Mask m, Complex c = 1.0);
  /// The ordered product e^{i_1} ^ ... ^ e^{i_p} (1-based); repeated
  /// indices give zero, unsorted indices pick up the permutation sign.
  static Form monomial(std::initializer_list<int> indices, Complex c = 1.0);

  [[nodiscard]] Complex operator[](Mask m) const { return coeffs_[m]; }
  Complex& operator[](Mask m) { return coeffs_[m]; }

  [[nodiscard]] const std::array<Complex, kBasisSize>& coefficients() const {
    return coeffs_;
  }

  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  Form& operator*=(Complex s);

  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator-(Form a) { return a *= -1.0; }
  friend Form operator*(Complex s, Form a) { return a *= s; }
  friend Form operator*(Form a, Complex s) { return a *= s; }

  /// Homogeneous component of degree p.
  [[nodiscard]] Form degree_part(int p) const;
  [[nodiscard]] Form conj() const;
  [[nodiscard]] Form real_part() const;
  [[nodiscard]] double max_abs() const;
  [[nodiscard]] bool is_zero(double abs_tol = 0.0) const {
    return max_abs() <= abs_tol;
  }
  /// Zeroes coefficients with |c| <= abs_tol.
  [[nodiscard]] Form pruned(double abs_tol = tol::kPrune) const;

  /// Coefficient-wise comparison: |a_I - b_I| <= max(rel * scale, abs_floor)
  /// where scale is the largest coefficient magnitude of either form.
  [[nodiscard]] bool approx_equal(const Form& o, double rel = tol::kRelative,
                                  double abs_floor = tol::kAbsoluteFloor) const;

  /// Largest coefficient-wise difference divided by the larger max_abs().
  [[nodiscard]] double relative_distance(const Form& o) const;

  friend bool operator==(const Form&, const Form&) = default;

 private:
  std::array<Complex, kBasisSize> coeffs_;
};

[[nodiscard]] Form wedge(const Form& a, const Form& b);
[[nodiscard]] Form wedge(std::initializer_list<Form> factors);

/// Image of a generator under the Chevalley-Eilenberg differential:
/// de^k = sum_{i<j} c^k_{ij} e^{ij}.
[[nodiscard]] Form d_generator(const StructureConstants& sc, int k);

/// Chevalley-Eilenberg differential extended as an antiderivation.
[[nodiscard]] Form d(const Form& a, const StructureConstants& sc);

using Vector6 = std::array<double, kDim>;

/// Evaluates the degree-p part of a form on p vectors (determinant
/// convention: e^{12}(e_1, e_2) = 1).
[[nodiscard]] Complex evaluate(const Form& a, std::span<const Vector6> vectors);

/// Linear map on the exterior algebra induced by a linear map on 1-forms.
/// Row m of `images` is the image of e^m expressed in the target basis.
class ExteriorMap {
 public:
  using Matrix6 = std::array<std::array<Complex, kDim>, kDim>;

  explicit ExteriorMap(const Matrix6& images);

  [[nodiscard]] Form apply(const Form& a) const;

 private:
  std::vector<Complex> table_;  // 64 x 64, column I = image of e^I
};

/// Bidegree (p, q) with respect to the complex structure.
using Bidegree = std::pair<int, int>;

/// A (1,0)-coframe zeta^1..zeta^3 expressed in the real coframe e^1..e^6 on
/// which the complex structure acts by Je^1 = -e^2, Je^3 = -e^4,
/// Je^5 = -e^6. Forms with respect to zeta^a and conj(zeta^a) are obtained
/// through the invertible 6x6 change of basis (zeta, conj zeta) <-> e.
///
/// In the complex basis masks use bits 0..2 for zeta^1..zeta^3 and bits 3..5
/// for conj(zeta^1)..conj(zeta^3).
class ComplexFrame {
 public:
  using Row = std::array<Complex, kDim>;

  /// Throws InvalidFrameError if the rows are not of type (1,0) for the
  /// standard J or the induced 6x6 change of basis is singular.
  explicit ComplexFrame(const std::array<Row, 3>& zeta_in_e);

  /// zeta^a = e^{2a-1} + i e^{2a}.
  static ComplexFrame standard();

  [[nodiscard]] const std::array<Row, 3>& rows() const { return rows_; }

  /// zeta^a, 1-based, expressed in e.
  [[nodiscard]] Form zeta(int a) const;
  [[nodiscard]] Form zeta_bar(int a) const;

  /// zeta^{h_1} ^ ... ^ zeta^{h_p} ^ conj(zeta^{a_1}) ^ ... ^ conj(zeta^{a_q}),
  /// expressed in e. zeta_form({1,2},{1,2}) is zeta^{12 1bar 2bar}.
  [[nodiscard]] Form zeta_form(std::initializer_list<int> holomorphic,
                               std::initializer_list<int> antiholomorphic) const;

  /// Re-expresses a form given in e in the complex basis.
  [[nodiscard]] Form to_complex_basis(const Form& a) const;
  [[nodiscard]] Form from_complex_basis(const Form& a) const;

  /// Coefficient of a complex monomial (same index conventions as
  /// zeta_form) in the expansion of `a`.
  [[nodiscard]] Complex zeta_coefficient(
      const Form& a, std::initializer_list<int> holomorphic,
      std::initializer_list<int> antiholomorphic) const;

 private:
  std::array<Row, 3> rows_;
  std::shared_ptr<const ExteriorMap> to_complex_;
  std::shared_ptr<const ExteriorMap> from_complex_;
};

/// Mask in the complex basis for zeta^{H} ^ conj(zeta)^{A}, with the sign
/// picked up by sorting (holomorphic indices first, in the order given).
struct ComplexMonomial {
  Mask mask;
  int sign;
};
[[nodiscard]] ComplexMonomial complex_monomial(
    std::initializer_list<int> holomorphic,
    std::initializer_list<int> antiholomorphic);

/// Splits a form into components of pure bidegree. Only bidegrees with a
/// nonzero component are present; the components sum to `a`.
[[nodiscard]] std::map<Bidegree, Form> decompose_pq(const Form& a,
                                                    const ComplexFrame& frame);

/// The (p, q) component of `a` (zero form if absent).
[[nodiscard]] Form pq_component(const Form& a, const ComplexFrame& frame,
                                int p, int q);

struct DelDelbar {
  Form del;
  Form delbar;
};

/// del a and delbar a: the (p+1, q) and (p, q+1) parts of d applied to each
/// (p, q) component of a.
[[nodiscard]] DelDelbar del_delbar(const Form& a, const ComplexFrame& frame,
                                   const StructureConstants& sc);

}  // namespace nilflow

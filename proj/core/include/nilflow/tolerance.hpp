#pragma once

/// Numerical tolerances shared by every comparison in the library.
///
/// Identity checks between two computation routes (brute force against a
/// closed form, exterior calculus against a coefficient formula) use a
/// relative tolerance with an absolute floor. Predicates that test whether a
/// form vanishes use an absolute tolerance on coefficients normalised by the
/// largest coefficient of the object under test.

namespace nilflow::tol {

/// Relative tolerance for identity checks between independent routes.
inline constexpr double kRelative = 1e-9;

/// Absolute floor paired with kRelative.
inline constexpr double kAbsoluteFloor = 1e-12;

/// Vanishing threshold for instanton / pluriclosed style predicates.
inline constexpr double kVanishing = 1e-10;

/// Coefficients below this magnitude are treated as structurally zero when
/// pruning forms.
inline constexpr double kPrune = 1e-14;

/// |a - b| <= max(kRelative * max(|a|, |b|), kAbsoluteFloor)
[[nodiscard]] inline bool close(double a, double b, double rel = kRelative,
                                double abs_floor = kAbsoluteFloor) {
  const double diff = a > b ? a - b : b - a;
  const double ma = a < 0 ? -a : a;
  const double mb = b < 0 ? -b : b;
  const double scale = ma > mb ? ma : mb;
  const double bound = rel * scale;
  return diff <= (bound > abs_floor ? bound : abs_floor);
}

}  // namespace nilflow::tol

#pragma once

#include <array>

namespace nilflow {

/// Real structure constants c^k_{ij} of a 6-dimensional Lie algebra with
/// respect to a coframe e^1..e^6, so that de^k = sum_{i<j} c^k_{ij} e^{ij}.
///
/// Stored densely (6 x 6 x 6) with antisymmetry in (i, j) enforced by set().
/// Indices are 1-based to match the usual notation e^1..e^6.
class StructureConstants {
 public:
  StructureConstants() = default;

  [[nodiscard]] double operator()(int k, int i, int j) const {
    return c_[offset(k, i, j)];
  }

  /// Sets c^k_{ij} = value and c^k_{ji} = -value. Requires i != j.
  void set(int k, int i, int j, double value);

  [[nodiscard]] bool is_abelian() const;

  /// Largest |c^k_{ij}|.
  [[nodiscard]] double max_abs() const;

  friend bool operator==(const StructureConstants&,
                         const StructureConstants&) = default;

 private:
  static constexpr int offset(int k, int i, int j) {
    return ((k - 1) * 6 + (i - 1)) * 6 + (j - 1);
  }
  std::array<double, 216> c_{};
};

}  // namespace nilflow

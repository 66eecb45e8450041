#include "nilflow/structure_constants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nilflow/errors.hpp"

namespace nilflow {

void StructureConstants::set(int k, int i, int j, double value) {
  for (int idx : {k, i, j}) {
    if (idx < 1 || idx > 6) {
      throw InvalidArgumentError("structure constant index out of range: " +
                                 std::to_string(idx));
    }
  }
  if (i == j) {
    throw InvalidArgumentError("c^k_{ii} is zero by antisymmetry");
  }
  c_[offset(k, i, j)] = value;
  c_[offset(k, j, i)] = -value;
}

bool StructureConstants::is_abelian() const {
  return std::all_of(c_.begin(), c_.end(), [](double v) { return v == 0.0; });
}

double StructureConstants::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace nilflow

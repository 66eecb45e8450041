#include "nilflow/sampling.hpp"

#include <string>

#include "nilflow/errors.hpp"
#include "nilflow/hermitian.hpp"

namespace nilflow {

namespace {

bool positive_definite(const MetricCoeffs& m) {
  try {
    (void)det_quantity(m);
    return true;
  } catch (const InvalidMetricError&) {
    return false;
  }
}

Complex random_complex(Rng& rng, double half_width) {
  const double re = rng.uniform(-half_width, half_width);
  const double im = rng.uniform(-half_width, half_width);
  return {re, im};
}

double grid_value(Rng& rng, double lo, double hi) {
  const int steps = static_cast<int>((hi - lo) * 8.0);
  return lo + rng.integer(0, steps) / 8.0;
}

}  // namespace

JParams random_params(Rng& rng) {
  const int rho = rng.integer(0, 1);
  const double lambda = rng.uniform(0.0, 2.0);
  const double x = rng.uniform(-2.0, 2.0);
  const double y = rng.uniform(-2.0, 2.0);
  return {rho, lambda, x, y};
}

JParams random_params_lambda0(Rng& rng) {
  const int rho = rng.integer(0, 1);
  const double x = rng.uniform(-2.0, 2.0);
  const double y = rng.uniform(-2.0, 2.0);
  return {rho, 0.0, x, y};
}

MetricCoeffs random_metric(Rng& rng) {
  for (;;) {
    MetricCoeffs m;
    m.r2 = rng.uniform(0.5, 2.0);
    m.s2 = rng.uniform(0.5, 2.0);
    m.k2 = rng.uniform(0.5, 2.0);
    m.u = random_complex(rng, 0.3);
    m.v = random_complex(rng, 0.3);
    m.z = random_complex(rng, 0.3);
    if (positive_definite(m)) return m;
  }
}

MetricCoeffs random_almost_diagonal_metric(Rng& rng) {
  for (;;) {
    MetricCoeffs m;
    m.r2 = rng.uniform(0.5, 2.0);
    m.s2 = rng.uniform(0.5, 2.0);
    m.k2 = rng.uniform(0.5, 2.0);
    m.u = random_complex(rng, 0.3);
    if (positive_definite(m)) return m;
  }
}

MetricCoeffs random_diagonal_metric(Rng& rng) {
  const double r2 = rng.uniform(0.4, 2.4);
  const double s2 = rng.uniform(0.4, 2.4);
  const double k2 = rng.uniform(0.4, 2.4);
  return MetricCoeffs::diagonal(r2, s2, k2);
}

BundleMetricCoeffs random_bundle_metric(Rng& rng) {
  BundleMetricCoeffs h;
  h.tr2 = rng.uniform(0.4, 2.4);
  h.ts2 = rng.uniform(0.4, 2.4);
  h.tk2 = rng.uniform(0.4, 2.4);
  return h;
}

JParams random_catalog_params(Rng& rng, GroupId group) {
  switch (group) {
    case GroupId::N2:
      return {0, 0.0, grid_value(rng, -2.0, 2.0), 1.0};
    case GroupId::N3:
      return {0, 0.0, rng.integer(0, 1) == 0 ? -1.0 : 1.0, 0.0};
    case GroupId::N5:
      for (;;) {
        const double y = grid_value(rng, 0.0, 1.0);
        const double x = grid_value(rng, -2.0, 2.0);
        if (1.0 + 4.0 * x > 4.0 * y * y) return {1, 0.0, x, y};
      }
    case GroupId::N8:
      return {0, 0.0, 0.0, 0.0};
    default:
      throw InvalidArgumentError("group " + std::string(to_string(group)) +
                                 " has no lambda = 0 parametrisation");
  }
}

}  // namespace nilflow

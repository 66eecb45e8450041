#include <gtest/gtest.h>

#include "nilflow/hermitian.hpp"
#include "nilflow/sampling.hpp"

namespace nilflow {
namespace {

TEST(Rng, EngineIsStandardMt19937_64) {
  // The standard fixes the 10000th output for the default seed.
  Rng rng(5489);
  std::uint64_t x = 0;
  for (int n = 0; n < 10000; ++n) x = rng.next_u64();
  EXPECT_EQ(x, 9981545732273789042ULL);
}

TEST(Rng, DoublesAndIntegersInRange) {
  Rng rng(61);
  bool lo = false, hi = false;
  for (int n = 0; n < 10000; ++n) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const int k = rng.integer(-2, 3);
    EXPECT_GE(k, -2);
    EXPECT_LE(k, 3);
    lo |= k == -2;
    hi |= k == 3;
  }
  EXPECT_TRUE(lo && hi);
}

TEST(Rng, SameSeedSameSequence) {
  Rng a(62), b(62), c(63);
  for (int n = 0; n < 100; ++n) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_NE(x, c.uniform());
  }
}

TEST(Sampling, RangesAndPositivity) {
  Rng rng(64);
  for (int n = 0; n < 500; ++n) {
    const JParams p = random_params(rng);
    EXPECT_GE(p.lambda(), 0.0);
    EXPECT_LT(p.lambda(), 2.0);
    EXPECT_GE(p.x(), -2.0);
    EXPECT_LT(p.y(), 2.0);
    EXPECT_EQ(random_params_lambda0(rng).lambda(), 0.0);
    EXPECT_GT(det_quantity(random_metric(rng)), 0.0);
    EXPECT_TRUE(random_almost_diagonal_metric(rng).is_almost_diagonal());
    const MetricCoeffs d = random_diagonal_metric(rng);
    EXPECT_TRUE(d.is_diagonal());
    EXPECT_GE(d.r2, 0.4);
    EXPECT_LT(d.k2, 2.4);
    EXPECT_NO_THROW(random_bundle_metric(rng).validate());
  }
}

TEST(Sampling, CatalogGridReachesPluriclosedBoundary) {
  Rng rng(65);
  bool n5_zero = false;
  for (int n = 0; n < 400; ++n) {
    const JParams p = random_catalog_params(rng, GroupId::N5);
    EXPECT_GT(1 + 4 * p.x(), 4 * p.y() * p.y());
    n5_zero |= p.pluriclosed_defect() == 0.0;
  }
  EXPECT_TRUE(n5_zero);
}

}  // namespace
}  // namespace nilflow

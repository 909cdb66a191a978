#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "dilatrix/dilation.hpp"
#include "test_support.hpp"

using namespace dilatrix;
using dilatrix::testing::random_interval_set;

namespace {

bool contains_set(const IntervalSet& outer, const IntervalSet& inner) {
  for (const auto& c : inner.components()) {
    if (!outer.covers_open(c)) return false;
  }
  return true;
}

}  // namespace

TEST(DilateExact, SymmetricIntervalScales) {
  const auto Ft = dilate_exact(IntervalSet::normalize({{-1, 1}}), 3.0);
  ASSERT_EQ(Ft.size(), 1u);
  EXPECT_EQ(Ft.components()[0], (Interval{-3, 3}));
  EXPECT_EQ(Ft.topology(), Topology::open);
}

TEST(DilateExact, UnitIntervalMatchesOracle) {
  const auto F = IntervalSet::normalize({{0, 1}});
  const auto Ft = dilate_exact(F, 3.0);
  ASSERT_EQ(Ft.size(), 1u);
  EXPECT_EQ(Ft.components()[0], (Interval{-1, 2}));
  const auto grid = dilate_grid_oracle(F, 3.0, 1e-3);
  ASSERT_EQ(grid.size(), 1u);
  EXPECT_NEAR(grid.components()[0].lo, -1.0, 1e-3);
  EXPECT_NEAR(grid.components()[0].hi, 2.0, 1e-3);
}

TEST(DilateExact, SpanningPairExcludedByStrictInequality) {
  const auto F = IntervalSet::normalize({{0, 1}, {2, 3}});
  const auto Ft = dilate_exact(F, 2.0);
  ASSERT_EQ(Ft.size(), 2u);
  EXPECT_EQ(Ft.components()[0], (Interval{-0.5, 1.5}));
  EXPECT_EQ(Ft.components()[1], (Interval{1.5, 3.5}));
  EXPECT_FALSE(Ft.contains(1.5));
  const auto grid = dilate_grid_oracle(F, 2.0, 1e-3);
  EXPECT_EQ(grid.size(), 2u);
  EXPECT_LE(symmetric_difference_measure(Ft, grid), 4.0 * boundary_count(Ft) * 1e-3);
}

TEST(DilateExact, RejectsBadParameter) {
  const auto F = IntervalSet::normalize({{0, 1}});
  EXPECT_THROW(dilate_exact(F, 1.0), std::invalid_argument);
  EXPECT_THROW(dilate_exact(F, 0.5), std::invalid_argument);
  EXPECT_THROW(dilate_exact(F, std::nan("")), std::invalid_argument);
}

TEST(DilateExact, EmptyInputGivesEmptyOutput) { EXPECT_TRUE(dilate_exact(IntervalSet{}, 2.0).empty()); }

TEST(GridOracle, SymmetricCaseWithinOneStep) {
  const auto grid = dilate_grid_oracle(IntervalSet::normalize({{-1, 1}}), 3.0, 1e-3);
  ASSERT_EQ(grid.size(), 1u);
  EXPECT_NEAR(grid.components()[0].lo, -3.0, 1e-3);
  EXPECT_NEAR(grid.components()[0].hi, 3.0, 1e-3);
}

TEST(GridOracle, HoleReproduced) {
  const auto grid = dilate_grid_oracle(IntervalSet::normalize({{0, 1}, {2, 3}}), 2.0, 1e-3);
  EXPECT_FALSE(grid.contains(1.5));
  EXPECT_TRUE(grid.contains(1.49));
  EXPECT_TRUE(grid.contains(1.51));
}

TEST(GridOracle, FarComponentsStaySeparate) {
  const auto grid = dilate_grid_oracle(IntervalSet::normalize({{0, 1}, {10, 11}}), 2.0, 1e-3);
  ASSERT_EQ(grid.size(), 2u);
  EXPECT_NEAR(grid.components()[0].lo, -0.5, 1e-3);
  EXPECT_NEAR(grid.components()[0].hi, 1.5, 1e-3);
  EXPECT_NEAR(grid.components()[1].lo, 9.5, 1e-3);
  EXPECT_NEAR(grid.components()[1].hi, 11.5, 1e-3);
}

TEST(GridOracle, RejectsCoarseStep) {
  EXPECT_THROW(dilate_grid_oracle(IntervalSet::normalize({{0, 0.1}}), 2.0, 0.5), std::invalid_argument);
  EXPECT_THROW(dilate_grid_oracle(IntervalSet::normalize({{0, 1}}), 1.0, 1e-3), std::invalid_argument);
}

TEST(Alpha, SymmetricGauge) { EXPECT_DOUBLE_EQ(alpha_1d(IntervalSet::normalize({{-1, 1}}), 2.0), 2.0); }

TEST(Alpha, HoleBetweenComponents) {
  EXPECT_DOUBLE_EQ(alpha_1d(IntervalSet::normalize({{0, 1}, {2, 3}}), 1.5), 2.0);
}

TEST(Alpha, ClampedInside) { EXPECT_DOUBLE_EQ(alpha_1d(IntervalSet::normalize({{0, 1}}), 0.5), 1.0); }

TEST(Alpha, EmptySetIsInfinite) { EXPECT_TRUE(std::isinf(alpha_1d(IntervalSet{}, 0.0))); }

// ---------------------------------------------------------------------------
// Properties on random sets.

class DilationProperties : public ::testing::Test {
 protected:
  Rng rng{20240611};
};

TEST_F(DilationProperties, ContainsOriginalAndMonotoneInT) {
  for (int k = 0; k < 300; ++k) {
    const auto F = random_interval_set(rng, 8, -10, 10);
    const double t1 = uniform(rng, 1.0001, 10.0);
    const double t2 = uniform(rng, t1, 10.0);
    const auto F1 = dilate_exact(F, t1);
    const auto F2 = dilate_exact(F, t2);
    EXPECT_TRUE(contains_set(F1, F));
    EXPECT_TRUE(contains_set(F2, F1));
  }
}

TEST_F(DilationProperties, AffineEquivariance) {
  for (int k = 0; k < 200; ++k) {
    // Dyadic coefficients keep the affine images exact in binary arithmetic.
    const auto F = random_interval_set(rng, 6, -10, 10);
    const double a = (uniform01(rng) < 0.5 ? -1.0 : 1.0) * std::ldexp(1.0, static_cast<int>(uniform_index(rng, 5)) - 2);
    const double b = std::ldexp(std::round(uniform(rng, -64, 64)), -3);
    const double t = 1.0 + std::ldexp(std::round(uniform(rng, 1, 64)), -3);
    const auto lhs = dilate_exact(F.affine(a, b), t);
    const auto rhs = dilate_exact(F, t).affine(a, b);
    ASSERT_EQ(lhs.size(), rhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      EXPECT_NEAR(lhs.components()[i].lo, rhs.components()[i].lo, 1e-12 * (1 + std::abs(rhs.components()[i].lo)));
      EXPECT_NEAR(lhs.components()[i].hi, rhs.components()[i].hi, 1e-12 * (1 + std::abs(rhs.components()[i].hi)));
    }
  }
}

TEST_F(DilationProperties, ConvexCaseMatchesMinkowskiFormula) {
  for (int k = 0; k < 200; ++k) {
    const double p = uniform(rng, -5, 5);
    const double q = p + uniform(rng, 0.01, 5);
    const double t = uniform(rng, 1.001, 10);
    const auto Ft = dilate_exact(IntervalSet::normalize({{p, q}}), t);
    ASSERT_EQ(Ft.size(), 1u);
    const double tau = 0.5 * (t + 1), sigma = 0.5 * (t - 1);
    EXPECT_NEAR(Ft.components()[0].lo, tau * p - sigma * q, 1e-12 * (1 + std::abs(p) + std::abs(q)) * t);
    EXPECT_NEAR(Ft.components()[0].hi, tau * q - sigma * p, 1e-12 * (1 + std::abs(p) + std::abs(q)) * t);
  }
}

TEST_F(DilationProperties, AlphaDualToDilation) {
  int checked = 0;
  for (int k = 0; k < 2000; ++k) {
    const auto F = random_interval_set(rng, 6, -10, 10);
    const double x = uniform(rng, -20, 20);
    const double t = uniform(rng, 1.001, 10);
    const double alpha = alpha_1d(F, x);
    if (std::abs(alpha - t) < 1e-9) continue;  // boundary tie
    EXPECT_EQ(alpha < t, dilate_exact(F, t).contains(x)) << "x=" << x << " t=" << t;
    ++checked;
  }
  EXPECT_GT(checked, 1900);
}

TEST_F(DilationProperties, OracleEquivalence) {
  for (int k = 0; k < 40; ++k) {
    const auto F = random_interval_set(rng, 8, -10, 10, 0.05);
    const double t = uniform(rng, 1.0001, 10);
    const auto exact = dilate_exact(F, t);
    const auto grid = dilate_grid_oracle(F, t, 1e-2);
    EXPECT_LE(symmetric_difference_measure(exact, grid), 4.0 * boundary_count(exact) * 1e-2);
  }
}

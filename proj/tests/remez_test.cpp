#include <gtest/gtest.h>

#include <cmath>

#include "dilatrix/remez.hpp"

using namespace dilatrix;

namespace {

PolynomialMap identity_2d() { return {2, 2, {{0, {1, 0}, 1.0}, {1, {0, 1}, 1.0}}}; }

ConvexPolytope square(double r) { return {2, {{-r, -r}, {r, -r}, {r, r}, {-r, r}}}; }

}  // namespace

TEST(Chebyshev, Values) {
  for (int d = 0; d <= 12; ++d) EXPECT_EQ(chebyshev(d, 1.0), 1.0);
  EXPECT_EQ(chebyshev(3, 2.0), 26.0);
  EXPECT_EQ(chebyshev(2, 2.0), 7.0);
  EXPECT_NEAR(chebyshev_inverse(2, 7.0), 2.0, 1e-15);
  EXPECT_NEAR(chebyshev(4, 0.3), std::cos(4 * std::acos(0.3)), 1e-15);
  EXPECT_EQ(chebyshev(3, -2.0), -26.0);
  EXPECT_NEAR(chebyshev(70, 1.01), std::cosh(70 * std::acosh(1.01)), 1e-9 * std::cosh(70 * std::acosh(1.01)));
}

TEST(Chebyshev, InverseRejectsBadInput) {
  EXPECT_THROW(chebyshev_inverse(2, 0.5), std::invalid_argument);
  EXPECT_THROW(chebyshev_inverse(0, 2.0), std::invalid_argument);
}

TEST(ChebyshevProperties, RoundTrip) {
  for (int d = 1; d <= 10; ++d) {
    for (int k = 0; k <= 600; ++k) {
      const double y = std::pow(10.0, k / 100.0);
      EXPECT_NEAR(chebyshev(d, chebyshev_inverse(d, y)), y, 1e-10 * y) << d << " " << y;
    }
  }
}

TEST(ChebyshevMap, MatchesRecurrence) {
  for (int d = 0; d <= 6; ++d) {
    const auto P = chebyshev_map(d);
    EXPECT_EQ(P.degree(), d);
    for (double x : {-1.3, -0.2, 0.7, 2.5}) EXPECT_NEAR(P({x})[0], chebyshev(d, x), 1e-12 * (1 + std::abs(chebyshev(d, x))));
  }
}

TEST(EvalF, Examples) {
  EXPECT_EQ(eval_f(identity_2d(), Seminorm::sup_norm(), {2, -3}), 3.0);
  EXPECT_EQ(eval_f(univariate({0, 0, 1}), Seminorm::l2_norm(), {3}), 9.0);
  const PolynomialMap P(2, 2, {{0, {2, 0}, 1.0}, {0, {0, 1}, -1.0}, {1, {1, 1}, 2.0}});
  EXPECT_EQ(eval_f(P, Seminorm::l2_norm(), {1, 1}), 2.0);
  EXPECT_EQ(eval_f(P, Seminorm::l1_norm(), {1, 1}), 2.0);
  EXPECT_EQ(eval_f(P, Seminorm::polytope_gauge(square(0.5)), {1, 1}), 4.0);
}

TEST(PolynomialMap, RejectsMalformedTerms) {
  EXPECT_THROW(PolynomialMap(2, 1, {{1, {1, 0}, 1.0}}), std::invalid_argument);
  EXPECT_THROW(PolynomialMap(2, 1, {{0, {1}, 1.0}}), std::invalid_argument);
  EXPECT_THROW(PolynomialMap(2, 1, {{0, {-1, 0}, 1.0}}), std::invalid_argument);
  EXPECT_THROW(Seminorm::polytope_gauge(ConvexPolytope(2, {{0, 0}, {1, 0}, {0, 1}})), std::invalid_argument);
  EXPECT_EQ(PolynomialMap(1, 1, {{0, {5}, 0.0}, {0, {2}, 1.0}}).degree(), 2);
}

TEST(SeminormProperties, SymmetricHomogeneousSubadditive) {
  Rng rng(5);
  const Seminorm norms[] = {Seminorm::sup_norm(), Seminorm::l1_norm(), Seminorm::l2_norm(),
                            Seminorm::polytope_gauge(square(0.7))};
  for (const auto& norm : norms) {
    for (int k = 0; k < 200; ++k) {
      std::vector<double> x{uniform(rng, -2, 2), uniform(rng, -2, 2)}, y{uniform(rng, -2, 2), uniform(rng, -2, 2)};
      const std::vector<double> minus{-x[0], -x[1]}, scaled{3 * x[0], 3 * x[1]}, sum{x[0] + y[0], x[1] + y[1]};
      EXPECT_NEAR(norm(minus), norm(x), 1e-14);
      EXPECT_NEAR(norm(scaled), 3 * norm(x), 1e-13);
      EXPECT_LE(norm(sum), norm(x) + norm(y) + 1e-13);
    }
  }
}

TEST(Profiles, GaugeModulus) {
  const auto g = gauge_profile();
  EXPECT_EQ(g.modulus(1.0), 1.0);
  EXPECT_NEAR(g.modulus(1.0 / 3.0), 0.5, 1e-15);
  EXPECT_EQ(g.chebyshev_degree(), 1.0);
  EXPECT_EQ(g.chebyshev_constant(), 2.0);
  EXPECT_EQ(polynomial_profile(3).chebyshev_constant(), 4.0);
}

TEST(Profiles, QuadraticChainOnGrid) {
  const auto p = polynomial_profile(2);
  for (int k = 1; k <= 100; ++k) {
    const double eps = k / 100.0;
    EXPECT_LE(p.modulus(eps), 4 * std::sqrt(eps / 2) + 1e-15);
  }
}

TEST(ProfilesProperties, ChainAndConsistency) {
  EXPECT_TRUE(profile_chain_check(gauge_profile()).pass);
  for (int d = 1; d <= 10; ++d) {
    const auto r = profile_chain_check(polynomial_profile(d));
    EXPECT_TRUE(r.pass) << d << " " << r.note << " gap=" << r.gap;
    EXPECT_LE(r.parameters.at("identityError"), 1e-12);
  }
}

TEST(EstimateDelta, SupNormGaugeIsTight) {
  const auto est = estimate_delta(identity_2d(), Seminorm::sup_norm(), 1.0 / 3.0, 50, 1000, {-1, -1}, {1, 1}, 1);
  EXPECT_GE(est.value, 0.49);
  EXPECT_LE(est.value, 0.5);
}

TEST(EstimateDelta, LinearBelowBound) {
  const auto est = estimate_delta(univariate({0, 1}), Seminorm::sup_norm(), 0.5, 100, 1000, {-1}, {1}, 2);
  EXPECT_LE(est.value, 2.0 / (chebyshev_inverse(1, 2.0) + 1.0) + 1e-12);
}

TEST(EstimateDelta, ChebyshevIsNearlyExtremal) {
  const double eps = 0.01;
  const double bound = polynomial_profile(2).modulus(eps);
  const auto est = estimate_delta(chebyshev_map(2), Seminorm::sup_norm(), eps, 200, 4000, {-1}, {10}, 3);
  EXPECT_LE(est.value, bound + 2.0 / 4000);
  EXPECT_GE(est.value, bound - 0.01);
}

TEST(EstimateDeltaProperties, NeverAboveBound) {
  Rng rng(7);
  for (int k = 0; k < 30; ++k) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 3));
    const int d = 1 + static_cast<int>(uniform_index(rng, 4));
    const auto P = random_polynomial_map(rng, n, d, 1 + static_cast<int>(uniform_index(rng, 3)));
    const double eps = uniform(rng, 0.05, 0.95);
    const auto est = estimate_delta(P, Seminorm::l2_norm(), eps, 40, 500, Point(n, -1.0), Point(n, 1.0), k);
    EXPECT_LE(est.value, polynomial_profile(d).modulus(eps) + 2.0 / 500);
  }
}

TEST(Fact2, LinearIsEquality) {
  const auto r = fact2_propuf_check(univariate({0, 1}), Seminorm::sup_norm(), 0.5, 3.0, 20, 1);
  EXPECT_TRUE(r.pass) << r.gap;
  EXPECT_GE(r.parameters.at("dilationSlack"), -1e-9);
  EXPECT_LE(r.parameters.at("dilationSlack"), 1e-3);
}

TEST(Fact2, SquareHasSlack) {
  // (-1,1)_2 = (-2,2) sits inside {x^2 < 7} = (-sqrt7, sqrt7).
  const IntervalSet sub = IntervalSet::normalize({{-1, 1}}, Topology::open);
  const auto D = dilate_exact(sub, 2.0);
  EXPECT_EQ(D.components().front().lo, -2.0);
  EXPECT_LT(D.components().front().hi, std::sqrt(chebyshev(2, 2.0)));
  EXPECT_TRUE(fact2_propuf_check(univariate({0, 0, 1}), Seminorm::sup_norm(), 1.0, 2.0, 20, 2).pass);
}

TEST(Fact2, ChebyshevCubicNearTight) {
  const auto r = fact2_propuf_check(chebyshev_map(3), Seminorm::sup_norm(), 1.0, 1.5, 40, 3);
  EXPECT_TRUE(r.pass) << r.gap;
}

TEST(Fact2Properties, RandomPolynomials) {
  Rng rng(11);
  const Seminorm norms[] = {Seminorm::sup_norm(), Seminorm::l1_norm(), Seminorm::l2_norm()};
  for (int k = 0; k < 20; ++k) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 3));
    const int d = 1 + static_cast<int>(uniform_index(rng, 4));
    const int N = 1 + static_cast<int>(uniform_index(rng, 3));
    const auto P = random_polynomial_map(rng, n, d, N);
    const auto& norm = norms[k % 3];
    Point x(static_cast<std::size_t>(n));
    for (double& c : x) c = uniform(rng, -1, 1);
    const double c = std::max(1e-3, eval_f(P, norm, x) * uniform(rng, 0.3, 1.5));
    const auto r = fact2_propuf_check(P, norm, c, uniform(rng, 1.1, 4.0), 5, static_cast<std::uint64_t>(k));
    EXPECT_TRUE(r.pass) << "k=" << k << " gap=" << r.gap;
  }
}

TEST(RivlinShapiro, ChebyshevEquality) {
  const auto r = rivlin_shapiro(chebyshev_map(2), Seminorm::sup_norm(), {0}, {1}, IntervalSet::normalize({{-1, 1}}), 2);
  EXPECT_NEAR(r.alpha, 2.0, 1e-15);
  EXPECT_NEAR(r.bound, 7.0, 1e-9);
  EXPECT_NEAR(r.value, 7.0, 1e-12);
  EXPECT_TRUE(r.pass);
  for (double x : {1.5, 2.0, 3.0}) {
    for (int d = 1; d <= 4; ++d) {
      const auto q = rivlin_shapiro(chebyshev_map(d), Seminorm::sup_norm(), {0}, {1}, IntervalSet::normalize({{-1, 1}}), x);
      EXPECT_NEAR(q.value, q.bound, 1e-9 * q.bound);
    }
  }
}

TEST(RivlinShapiro, LinearEquality) {
  const auto r = rivlin_shapiro(univariate({0, 1}), Seminorm::sup_norm(), {0}, {1}, IntervalSet::normalize({{-1, 1}}), 3);
  EXPECT_NEAR(r.bound, 3.0, 1e-12);
  EXPECT_EQ(r.value, 3.0);
}

TEST(RivlinShapiro, TwoComponents) {
  const auto r = rivlin_shapiro(univariate({0, 0, 1}), Seminorm::sup_norm(), {0}, {1},
                                IntervalSet::normalize({{0, 1}, {2, 3}}), 1.5);
  EXPECT_NEAR(r.alpha, 2.0, 1e-15);
  EXPECT_NEAR(r.bound, 63.0, 1e-9);
  EXPECT_EQ(r.value, 2.25);
  EXPECT_TRUE(r.pass);
}

TEST(MultidimRemez, LinearOnSquare) {
  const PolynomialMap P(2, 1, {{0, {1, 0}, 1.0}});
  const auto r = multidim_remez_check(P, Seminorm::sup_norm(), square(1),
                                      [](const Point& x) { return std::max(std::abs(x[0]), std::abs(x[1])) <= 0.5; },
                                      100000, 1);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.parameters.at("supV") / r.parameters.at("supOmega"), 2.0, 1e-6);
  EXPECT_NEAR(r.parameters.at("factorRemez"), (1 + std::sqrt(0.75)) / (1 - std::sqrt(0.75)), 0.6);
}

TEST(MultidimRemez, WholeBody) {
  const PolynomialMap P(2, 1, {{0, {2, 0}, 1.0}, {0, {0, 1}, 1.0}});
  const auto r = multidim_remez_check(P, Seminorm::sup_norm(), square(1), [](const Point&) { return true; }, 10000, 2);
  EXPECT_EQ(r.parameters.at("factorRemez"), 1.0);
  EXPECT_NEAR(r.parameters.at("supV") / r.parameters.at("supOmega"), 1.0, 1e-12);
  EXPECT_TRUE(r.pass);
}

TEST(MultidimRemez, SmallRegionPowerBoundDominates) {
  const PolynomialMap P(2, 1, {{0, {2, 0}, 1.0}, {0, {1, 1}, -1.0}, {0, {0, 0}, 0.1}});
  const ConvexPolytope V(2, {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const auto r = multidim_remez_check(P, Seminorm::sup_norm(), V,
                                      [](const Point& x) { return x[0] < 0.1; }, 200000, 3);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.parameters.at("muOmega"), 0.1, 0.005);
  EXPECT_NEAR(r.parameters.at("factorPower"), 6400.0, 600.0);
  EXPECT_LE(r.parameters.at("factorRemez"), r.parameters.at("factorPower"));
}

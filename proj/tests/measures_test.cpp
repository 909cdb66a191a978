#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "dilatrix/measures.hpp"

using namespace dilatrix;

namespace {

// psi = 1/2 on [0,1] u [2,3]: not log-concave.
struct TwoBumps {
  double s() const { return 0.0; }
  Interval support() const { return {0.0, 3.0}; }
  double pdf(double x) const { return (x >= 0 && x <= 1) || (x >= 2 && x <= 3) ? 0.5 : 0.0; }
  double mass(double x, double y) const {
    auto clip = [&](double a, double b) { return std::max(0.0, std::min(y, b) - std::max(x, a)); };
    return 0.5 * (clip(0, 1) + clip(2, 3));
  }
};

const Gauge1D identity_gauge{0.0, 1.0};

}  // namespace

TEST(SMean, Idempotent) {
  for (double s : {-2.0, 0.0, 0.3, 1.0}) EXPECT_DOUBLE_EQ(s_mean(0.7, 0.7, 0.4, s), 0.7);
}

TEST(SMean, ZeroArgument) {
  EXPECT_EQ(s_mean(1, 0, 0.5, 0.0), 0.0);
  EXPECT_EQ(s_mean(1, 0, 0.5, -1.0), 0.0);
  EXPECT_NEAR(s_mean(1, 0, 0.5, 1.0), 0.5, 1e-15);
}

TEST(SMean, PowerMeansOfFourAndOne) {
  EXPECT_NEAR(s_mean(4, 1, 0.5, 1), 2.5, 1e-15);
  EXPECT_NEAR(s_mean(4, 1, 0.5, 0), 2.0, 1e-15);
  EXPECT_NEAR(s_mean(4, 1, 0.5, -1), 1.6, 1e-15);
}

TEST(SMean, ContinuousAtZero) {
  const double g = s_mean(0.3, 0.02, 0.25, 0.0);
  EXPECT_NEAR(s_mean(0.3, 0.02, 0.25, 1e-9), g, 1e-9 * g);
  EXPECT_NEAR(s_mean(0.3, 0.02, 0.25, -1e-9), g, 1e-9 * g);
}

TEST(SMean, RejectsBadInput) {
  EXPECT_THROW(s_mean(-1, 1, 0.5, 1), std::invalid_argument);
  EXPECT_THROW(s_mean(1, 1, 1.5, 1), std::invalid_argument);
}

TEST(SMeanProperties, MonotoneInS) {
  Rng rng(3);
  for (int k = 0; k < 2000; ++k) {
    const double u = uniform01(rng), v = uniform01(rng), lambda = uniform01(rng);
    const double s1 = uniform(rng, -5, 1), s2 = uniform(rng, s1, 1);
    EXPECT_LE(s_mean(u, v, lambda, s1), s_mean(u, v, lambda, s2) * (1 + 1e-14));
  }
}

TEST(Quantile, UniformIdentity) { EXPECT_NEAR(quantile_median(uniform_density(0, 1)), 0.5, 1e-15); }

TEST(Quantile, ExponentialIdentity) {
  EXPECT_NEAR(quantile_median(exponential_density()), std::log(2.0), 1e-15);
  EXPECT_NEAR(quantile_median(exponential_density(), identity_gauge), std::log(2.0), 1e-13);
}

TEST(Quantile, UniformAbsoluteValue) {
  EXPECT_NEAR(quantile_median(uniform_density(-1, 1), identity_gauge, 0.5), 0.5, 1e-13);
}

TEST(Quantile, RejectsBadLevel) {
  EXPECT_THROW(quantile_median(uniform_density(0, 1), identity_gauge, 1.0), std::invalid_argument);
}

TEST(Moment, UniformSecondMoment) {
  const auto r = lp_moment(uniform_density(0, 1), identity_gauge, 2.0);
  EXPECT_TRUE(r.finite);
  EXPECT_NEAR(r.value, std::sqrt(1.0 / 3.0), 1e-8 * std::sqrt(1.0 / 3.0));
}

TEST(Moment, UniformNegativeHalfMoment) {
  const auto r = lp_moment(uniform_density(0, 1), identity_gauge, -0.5);
  EXPECT_TRUE(r.finite);
  EXPECT_NEAR(r.integral, 2.0, 1e-8);
  EXPECT_NEAR(r.value, 0.25, 1e-8 * 0.25);
}

TEST(Moment, ExponentialMean) {
  const auto r = lp_moment(exponential_density(), identity_gauge, 1.0);
  EXPECT_NEAR(r.value, 1.0, 1e-8);
}

TEST(Moment, ExponentialGammaMoments) {
  // E x^p = Gamma(p + 1) for the unit exponential.
  for (double p : {-0.9, -0.5, 0.3, 2.5, 7.0}) {
    const auto r = lp_moment(exponential_density(), identity_gauge, p);
    EXPECT_NEAR(r.integral, std::tgamma(p + 1), 1e-8 * std::tgamma(p + 1)) << p;
  }
}

TEST(Moment, HeavyTailDivergence) {
  const auto mu = make_paper_extremal(-1.0, 2.0, 1.5);
  const Gauge1D f{0.0, 1.0};
  EXPECT_FALSE(lp_moment(mu, f, 1.0).finite);
  const auto half = lp_moment(mu, f, 0.5);
  EXPECT_TRUE(half.finite);
  // int_{-1}^inf |x|^{1/2} (2+x)^{-2} dx by quadrature on x = -1 + u/(1-u).
  const double oracle = integrate(
      [](double u) {
        if (u >= 1) return 0.0;
        const double x = -1 + u / (1 - u);
        return std::sqrt(std::abs(x)) * std::pow(2 + x, -2) / ((1 - u) * (1 - u));
      },
      0.0, 1.0, 1e-12, 1e-12, 20000).value;
  EXPECT_NEAR(half.integral, oracle, 1e-6 * oracle);
}

TEST(Moment, NegativeMomentOfVanishingStepFunctionDiverges) {
  StepFunction1D f{{{0.0, IntervalSet::normalize({{0, 0.5}})}}, 1.0};
  const auto r = lp_moment(uniform_density(0, 1), f, -0.5);
  EXPECT_FALSE(r.finite);
}

TEST(Moment, NearMinusOneFlagsIllConditioned) {
  const auto r = lp_moment(uniform_density(0, 1), identity_gauge, -1 + 1e-9);
  EXPECT_TRUE(r.ill_conditioned || !r.finite);
}

TEST(Sample, UniformMean) {
  const auto xs = sample(uniform_density(0, 1), 100000, 1);
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  EXPECT_NEAR(mean, 0.5, 3 * std::sqrt(1.0 / 12.0 / xs.size()));
}

TEST(Sample, ExtremalMassOfUnitBall) {
  const auto xs = sample(make_paper_extremal(-1, 2, 1.5), 100000, 2);
  const double inside = static_cast<double>(std::count_if(xs.begin(), xs.end(), [](double x) { return x <= 1; }));
  EXPECT_NEAR(inside / xs.size(), 2.0 / 3.0, 0.01);
}

TEST(Sample, SeedRepeatable) {
  const auto mu = laplace_density();
  EXPECT_EQ(sample(mu, 1000, 42), sample(mu, 1000, 42));
  EXPECT_NE(sample(mu, 1000, 42), sample(mu, 1000, 43));
}

TEST(SConcavity, ExtremalPasses) {
  const auto r = check_s_concavity(make_paper_extremal(-1, 2, 1.5), 1000, 5);
  EXPECT_TRUE(r.pass);
  EXPECT_GE(r.gap, -1e-9);
}

TEST(SConcavity, ExponentialPasses) { EXPECT_TRUE(check_s_concavity(exponential_density(), 1000, 6).pass); }

TEST(SConcavity, PiecewisePasses) {
  EXPECT_TRUE(check_s_concavity(PiecewiseSConcaveDensity(0.3, {0, 1, 2, 4}, {0, 1, 1.2, 0}), 1000, 8).pass);
}

TEST(SConcavity, ConvexProfilePassesForNegativeS) {
  EXPECT_TRUE(check_s_concavity(PiecewiseSConcaveDensity(-0.5, {0, 1, 2, 4}, {2, 1, 0.8, 1.5}), 1000, 10).pass);
}

TEST(SConcavity, TwoBumpsFails) {
  const auto r = check_s_concavity(TwoBumps{}, 1000, 9);
  EXPECT_FALSE(r.pass);
  EXPECT_LT(r.gap, 0.0);
}

#pragma once

// Random s-concave densities and sets for randomized sweeps. Every generator
// is a pure function of the engine state, so sweeps replay from a seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "dilatrix/chebyshev.hpp"
#include "dilatrix/density.hpp"
#include "dilatrix/functions1d.hpp"
#include "dilatrix/interval_set.hpp"
#include "dilatrix/random.hpp"

namespace dilatrix {

/// s drawn from [s_lo, s_hi], with the values 0 and s_hi given extra weight.
inline double random_s(Rng& rng, double s_lo = -3.0, double s_hi = 1.0) {
  const double u = uniform01(rng);
  if (u < 0.1 && s_lo <= 0.0 && s_hi >= 0.0) return 0.0;
  if (u < 0.15) return s_hi;
  return uniform(rng, s_lo, s_hi);
}

/// Random s-affine density on a segment or half-line.
inline SAffineDensity random_s_affine_density(Rng& rng, double s) {
  const double lo = uniform(rng, -5.0, 0.0);
  if (s <= 0.0 && uniform01(rng) < 0.5) {
    if (s == 0.0) {
      const double rate = uniform(rng, 0.1, 3.0);
      return {0.0, rate * lo, -rate, {lo, inf}};
    }
    const double h_lo = uniform(rng, 0.1, 2.0);
    const double slope = uniform(rng, 0.05, 3.0);
    return {s, h_lo - slope * lo, slope, {lo, inf}};
  }
  const double hi = lo + uniform(rng, 0.5, 10.0);
  const double floor = s < 0.0 ? 0.05 : 0.0;
  double h_lo = uniform(rng, floor, 1.0);
  double h_hi = uniform(rng, floor, 1.0);
  if (s == 0.0) {
    h_lo = uniform(rng, -3.0, 3.0);
    h_hi = uniform(rng, -3.0, 3.0);
  }
  const double slope = (h_hi - h_lo) / (hi - lo);
  return {s, h_lo - slope * lo, slope, {lo, hi}};
}

/// Random density whose profile is piecewise linear, concave for s >= 0 and
/// convex for s < 0.
inline PiecewiseSConcaveDensity random_piecewise_density(Rng& rng, double s) {
  const std::size_t k = 3 + static_cast<std::size_t>(uniform_index(rng, 4));
  const double lo = uniform(rng, -5.0, 0.0);
  const double hi = lo + uniform(rng, 0.5, 10.0);
  std::vector<double> x(k);
  x.front() = lo;
  x.back() = hi;
  for (std::size_t i = 1; i + 1 < k; ++i) x[i] = uniform(rng, lo, hi);
  std::sort(x.begin(), x.end());
  for (std::size_t i = 1; i < k; ++i) x[i] = std::max(x[i], x[i - 1] + 1e-3);
  std::vector<double> slopes(k - 1);
  for (auto& m : slopes) m = uniform(rng, -3.0, 3.0);
  if (s < 0.0) std::sort(slopes.begin(), slopes.end());
  else std::sort(slopes.begin(), slopes.end(), std::greater<>());
  std::vector<double> h(k, 0.0);
  for (std::size_t i = 1; i < k; ++i) h[i] = h[i - 1] + slopes[i - 1] * (x[i] - x[i - 1]);

  // Tails must decay: h -> -inf for s = 0 and h -> +inf for s < 0, while
  // keeping the slope sequence monotone.
  std::optional<double> left, right;
  if (s <= 0.0) {
    const double dir = s < 0.0 ? 1.0 : -1.0;
    if (uniform01(rng) < 0.5) {
      right = dir > 0 ? std::max(slopes.back(), 0.0) + uniform(rng, 0.1, 2.0)
                      : std::min(slopes.back(), 0.0) - uniform(rng, 0.1, 2.0);
    }
    if (uniform01(rng) < 0.3) {
      left = dir > 0 ? std::min(slopes.front(), 0.0) - uniform(rng, 0.1, 2.0)
                     : std::max(slopes.front(), 0.0) + uniform(rng, 0.1, 2.0);
    }
  }
  if (s != 0.0) {
    const double target = s < 0.0 ? uniform(rng, 0.05, 0.5) : uniform(rng, 0.0, 0.3);
    const double shift = target - *std::min_element(h.begin(), h.end());
    for (auto& v : h) v += shift;
  }
  return {s, std::move(x), std::move(h), left, right};
}

inline AnyDensity random_density(Rng& rng, double s) {
  if (uniform01(rng) < 0.5) return random_s_affine_density(rng, s);
  return random_piecewise_density(rng, s);
}

/// Union of up to max_components intervals placed by quantile level, so that
/// every component carries mass. With some probability the first component
/// starts at the left end of the support, where extremal sets live.
template <class D>
IntervalSet random_subset(const D& mu, Rng& rng, int max_components = 6) {
  const int m = 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(max_components)));
  const double finite_lo = std::isfinite(mu.support().lo) ? mu.support().lo : mu.quantile(1e-12);
  std::vector<Interval> raw;
  for (int k = 0; k < m; ++k) {
    const double width = uniform(rng, 0.002, 0.25) / m;
    const double center = uniform01(rng);
    const double a = std::clamp(center - 0.5 * width, 1e-12, 1.0 - 1e-12);
    const double b = std::clamp(center + 0.5 * width, 1e-12, 1.0 - 1e-12);
    double x = mu.quantile(a);
    double y = mu.quantile(b);
    if (k == 0 && uniform01(rng) < 0.2) x = finite_lo;
    if (y > x) raw.push_back({x, y});
  }
  return IntervalSet::normalize(std::move(raw));
}

/// t uniform on (1, t_max).
inline double random_t(Rng& rng, double t_max = 10.0) { return 1.0 + (t_max - 1.0) * uniform01(rng); }

/// A one-variable test function together with a Remez profile it satisfies.
struct TestFunction {
  std::variant<Gauge1D, Polynomial1D> f;
  RemezProfile profile;

  template <class Visitor>
  decltype(auto) visit(Visitor&& v) const {
    return std::visit(std::forward<Visitor>(v), f);
  }
};

/// A gauge |x - c|/r or a polynomial of degree 1..3 whose roots and critical
/// points fall in the bulk of mu.
template <class D>
TestFunction random_test_function(const D& mu, Rng& rng) {
  const double q1 = mu.quantile(0.1);
  const double q9 = mu.quantile(0.9);
  const double spread = std::max(q9 - q1, 1e-3);
  if (uniform01(rng) < 0.5) {
    return {Gauge1D{uniform(rng, q1, q9), uniform(rng, 0.2, 2.0) * spread}, gauge_profile()};
  }
  const int degree = 1 + static_cast<int>(uniform_index(rng, 3));
  // Product of (x - r_k)/spread, with an extra constant for nonzero minima.
  std::vector<double> c{uniform(rng, -0.2, 0.2)};
  std::vector<double> prod{1.0};
  for (int k = 0; k < degree; ++k) {
    const double r = uniform(rng, q1, q9);
    std::vector<double> next(prod.size() + 1, 0.0);
    for (std::size_t j = 0; j < prod.size(); ++j) {
      next[j + 1] += prod[j] / spread;
      next[j] -= prod[j] * r / spread;
    }
    prod = std::move(next);
  }
  const double scale = uniform(rng, 0.5, 2.0);
  for (std::size_t j = 0; j < prod.size(); ++j) {
    if (j >= c.size()) c.push_back(0.0);
    c[j] += scale * prod[j];
  }
  return {Polynomial1D(std::move(c)), polynomial_profile(degree)};
}

}  // namespace dilatrix

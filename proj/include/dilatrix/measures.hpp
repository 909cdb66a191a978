#pragma once

// Power means, level-set measures, quantiles, moments and sampling for
// one-dimensional s-concave measures.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dilatrix/check_report.hpp"
#include "dilatrix/density.hpp"
#include "dilatrix/functions1d.hpp"
#include "dilatrix/quadrature.hpp"
#include "dilatrix/random.hpp"

namespace dilatrix {

/// (lambda u^s + (1 - lambda) v^s)^{1/s}; the weighted geometric mean for s = 0.
/// Evaluated in the log domain so that tiny |s| and extreme ratios stay accurate.
inline double s_mean(double u, double v, double lambda, double s) {
  if (!(u >= 0.0) || !(v >= 0.0)) throw std::invalid_argument("s_mean arguments must be >= 0");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("s_mean weight must lie in [0,1]");
  if (lambda == 1.0) return u;
  if (lambda == 0.0) return v;
  if (u == v) return u;
  if (u == 0.0 || v == 0.0) {
    if (s <= 0.0) return 0.0;
    const double w = u == 0.0 ? 1.0 - lambda : lambda;
    const double x = u == 0.0 ? v : u;
    return std::exp(std::log(w) / s + std::log(x));
  }
  const double lu = std::log(u);
  const double lv = std::log(v);
  if (s == 0.0) return std::exp(lambda * lu + (1.0 - lambda) * lv);
  double log_inner;
  if (std::abs(s * lu) < 0.5 && std::abs(s * lv) < 0.5) {
    log_inner = std::log1p(lambda * std::expm1(s * lu) + (1.0 - lambda) * std::expm1(s * lv));
  } else {
    log_inner = detail::log_add_exp(s * lu + std::log(lambda), s * lv + std::log1p(-lambda));
  }
  return std::exp(log_inner / s);
}

// ---------------------------------------------------------------------------
// Level sets of |f| under mu.

/// mu({|f| <= y}).
template <Density1D D, ScalarFunction1D F>
double sublevel_measure(const D& mu, const F& f, double y) {
  const auto set = f.sublevel(y, mu.support());
  if (!set) return 1.0;
  return measure_of(mu, *set);
}

/// mu({|f| > y}), computed over the complement for full relative precision.
template <Density1D D, ScalarFunction1D F>
double superlevel_measure(const D& mu, const F& f, double y) {
  const auto set = f.sublevel(y, mu.support());
  if (!set) return 0.0;
  return measure_of_complement(mu, *set);
}

/// The level-quantile of the pushforward of mu by |f|: the least y with
/// mu({|f| <= y}) >= level. Throws std::runtime_error when bisection fails
/// to converge within 200 steps.
template <Density1D D, ScalarFunction1D F>
double quantile_median(const D& mu, const F& f, double level = 0.5) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("quantile level must lie in (0,1)");
  if (sublevel_measure(mu, f, 0.0) >= level) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int grow = 0; sublevel_measure(mu, f, hi) < level; ++grow) {
    if (grow > 2000 || !std::isfinite(hi)) throw std::runtime_error("quantile is not bracketed");
    lo = hi;
    hi *= 2.0;
  }
  for (int step = 0; step < 200; ++step) {
    if (hi - lo <= 1e-15 * hi) return hi;
    const double mid = 0.5 * (lo + hi);
    if (sublevel_measure(mu, f, mid) >= level) hi = mid; else lo = mid;
  }
  throw std::runtime_error("quantile bisection did not converge in 200 steps");
}

/// Quantile of mu itself (f = identity), from the closed-form inverse CDF.
template <Density1D D>
double quantile_median(const D& mu, double level = 0.5) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("quantile level must lie in (0,1)");
  return mu.quantile(level);
}

// ---------------------------------------------------------------------------
// Moments.

struct MomentResult {
  double value = 0.0;     // (int |f|^p dmu)^{1/p}; +inf (p > 0) or 0 (p < 0) when divergent
  double integral = 0.0;  // int |f|^p dmu, +inf when divergent
  bool finite = true;
  bool ill_conditioned = false;
};

namespace detail {

inline MomentResult finish_moment(double integral, double p, bool ill) {
  MomentResult r;
  r.integral = integral;
  r.finite = std::isfinite(integral);
  r.value = r.finite ? std::pow(integral, 1.0 / p) : (p > 0.0 ? inf : 0.0);
  r.ill_conditioned = ill;
  return r;
}

}  // namespace detail

/// ||f||_{L^p(mu)} via the layer-cake representation, p != 0.
///   p > 0:  int |f|^p = int_0^inf p y^{p-1} mu(|f| > y) dy
///   p < 0:  int |f|^p = -p int_0^inf y^{p-1} mu(|f| <= y) dy
/// Integration runs in log y. The piece next to y = 0 is integrated against a
/// fitted power law of the distribution function, and the far tail against a
/// fitted power-law decay, so divergence is detected instead of returned as
/// a large number.
template <Density1D D, ScalarFunction1D F>
MomentResult lp_moment(const D& mu, const F& f, double p) {
  if (p == 0.0 || !std::isfinite(p)) throw std::invalid_argument("moment exponent must be finite and nonzero");
  const double s = mu.s();
  const Interval supp = mu.support();
  const bool unbounded = std::isinf(supp.lo) || std::isinf(supp.hi);
  if (p > 0.0 && s < 0.0 && unbounded && f.growth_degree() > 0.0 && p >= -1.0 / (s * f.growth_degree())) {
    return detail::finish_moment(inf, p, false);
  }

  double scale = quantile_median(mu, f, 0.5);
  if (!(scale > 0.0)) scale = quantile_median(mu, f, 0.99);
  if (!(scale > 0.0)) scale = 1.0;
  const double y0 = 1e-9 * scale;

  auto survival = [&](double y) { return superlevel_measure(mu, f, y); };
  auto distribution = [&](double y) { return sublevel_measure(mu, f, y); };

  // Upper cut where the survival function has died out or decays as a power.
  // The floor keeps the decay estimate away from subnormal values.
  const double tail_floor = p > 0.0 ? 1e-280 : 1e-17;
  double Y = scale;
  while (survival(Y) > tail_floor && Y < 1e12 * scale) Y *= 2.0;

  const double lo = std::log(y0);
  const double hi = std::log(Y);
  double head = 0.0;
  double body = 0.0;
  double tail = 0.0;
  if (p > 0.0) {
    head = survival(y0) * std::pow(y0, p);
    const auto q = integrate([&](double v) { return p * std::exp(p * v) * survival(std::exp(v)); }, lo, hi,
                             1e-300, 1e-11, 8000);
    body = q.value;
    const double sY = survival(Y);
    if (sY > 0.0) {
      const double decay = std::log2(survival(0.5 * Y) / sY);
      if (!(decay > p)) return detail::finish_moment(inf, p, false);
      tail = p * sY * std::pow(Y, p) / (decay - p);
    }
    return detail::finish_moment(head + body + tail, p, false);
  }

  const double g0 = distribution(y0);
  if (g0 > 0.0) {
    const double g_half = distribution(0.5 * y0);
    const double order = g_half > 0.0 ? std::log2(g0 / g_half) : inf;
    if (!(order + p > 1e-9)) return detail::finish_moment(inf, p, true);
    head = std::isinf(order) ? 0.0 : -p * g0 * std::pow(y0, p) / (p + order);
  }
  const auto q = integrate([&](double v) { return -p * std::exp(p * v) * distribution(std::exp(v)); }, lo, hi,
                           1e-300, 1e-11, 8000);
  body = q.value;
  tail = std::pow(Y, p) * distribution(Y);
  const double rest = body + tail;
  return detail::finish_moment(head + rest, p, head > 1e6 * rest);
}

// ---------------------------------------------------------------------------
// Sampling and empirical s-concavity.

template <class D>
concept InvertibleDensity1D = Density1D<D> && requires(const D& d, double u) {
  { d.quantile(u) } -> std::convertible_to<double>;
};

/// n i.i.d. draws by inverse CDF; deterministic in `seed`.
template <InvertibleDensity1D D>
std::vector<double> sample(const D& mu, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample size must be >= 1");
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = mu.quantile(uniform01(rng));
  return out;
}

/// Tests mu(lambda A + (1 - lambda) B) >= s_mean(mu(A), mu(B), lambda, s) on
/// random interval pairs A, B inside the support.
template <Density1D D>
CheckReport check_s_concavity(const D& mu, int trials, std::uint64_t seed, double tolerance = 1e-9) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const double s = mu.s();
  const Interval supp = mu.support();
  Rng rng(seed);
  auto draw_point = [&]() {
    if constexpr (InvertibleDensity1D<D>) {
      return mu.quantile(uniform01(rng));
    } else {
      if (std::isinf(supp.lo) || std::isinf(supp.hi)) {
        throw std::invalid_argument("unbounded support needs a density with quantiles");
      }
      return uniform(rng, supp.lo, supp.hi);
    }
  };
  auto draw_interval = [&]() {
    double a = draw_point();
    double b = draw_point();
    if (a > b) std::swap(a, b);
    return Interval{a, b};
  };

  CheckReport report;
  report.check_name = "s_concavity";
  report.anchor = "s_concavity";
  report.tolerance = tolerance;
  report.parameters = {{"s", s}, {"trials", static_cast<double>(trials)}};
  double worst = inf;
  double worst_lhs = 0.0;
  double worst_rhs = 0.0;
  for (int k = 0; k < trials; ++k) {
    const Interval A = draw_interval();
    const Interval B = draw_interval();
    const double lambda = uniform01(rng);
    const double mA = mu.mass(A.lo, A.hi);
    const double mB = mu.mass(B.lo, B.hi);
    const double mC = mu.mass(lambda * A.lo + (1 - lambda) * B.lo, lambda * A.hi + (1 - lambda) * B.hi);
    const double bound = s_mean(mA, mB, lambda, s);
    if (mC - bound < worst) {
      worst = mC - bound;
      worst_lhs = mC;
      worst_rhs = bound;
    }
  }
  report.settle(worst_lhs, worst_rhs);
  return report;
}

}  // namespace dilatrix

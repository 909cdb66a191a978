#pragma once

// Real functions of one variable with exactly computable sublevel sets.
//
// Every function model exposes sublevel(y, window) = {x in window : |f(x)| <= y}
// as a finite interval union, or std::nullopt when that set is the whole
// window (which may be unbounded). growth_degree() is the power with which
// |f| grows at infinity; it decides which moments of heavy-tailed measures
// exist.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dilatrix/interval_set.hpp"

namespace dilatrix {

template <class F>
concept ScalarFunction1D = requires(const F& f, double x, double y, Interval w) {
  { f(x) } -> std::convertible_to<double>;
  { f.sublevel(y, w) } -> std::same_as<std::optional<IntervalSet>>;
  { f.growth_degree() } -> std::convertible_to<double>;
};

namespace detail {

inline IntervalSet clip(Interval iv, Interval window) {
  const double lo = std::max(iv.lo, window.lo);
  const double hi = std::min(iv.hi, window.hi);
  if (!(hi > lo)) return {};
  return IntervalSet::normalize({{lo, hi}});
}

}  // namespace detail

/// |x - center| / scale: the gauge of the symmetric interval [center - scale, center + scale].
struct Gauge1D {
  double center = 0.0;
  double scale = 1.0;

  double operator()(double x) const { return std::abs(x - center) / scale; }

  [[nodiscard]] std::optional<IntervalSet> sublevel(double y, Interval window) const {
    if (y < 0.0) return IntervalSet{};
    return detail::clip({center - y * scale, center + y * scale}, window);
  }

  [[nodiscard]] double growth_degree() const noexcept { return 1.0; }
};

/// Real polynomial with coefficients in ascending order.
class Polynomial1D {
 public:
  Polynomial1D() = default;
  explicit Polynomial1D(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
    if (c_.empty()) c_.push_back(0.0);
  }

  [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return c_; }
  [[nodiscard]] int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  [[nodiscard]] Polynomial1D derivative() const {
    if (c_.size() <= 1) return Polynomial1D({0.0});
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial1D(std::move(d));
  }

  [[nodiscard]] Polynomial1D shifted(double constant) const {
    auto c = c_;
    c[0] += constant;
    return Polynomial1D(std::move(c));
  }

  /// Radius containing every real root (Cauchy bound).
  [[nodiscard]] double root_bound() const {
    if (degree() <= 0) return 0.0;
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < c_.size(); ++k) m = std::max(m, std::abs(c_[k] / c_.back()));
    return 1.0 + m;
  }

  /// Real roots in [lo, hi], sorted. Isolated through the critical points of
  /// the derivative, then refined by bisection to full precision.
  [[nodiscard]] std::vector<double> real_roots(double lo, double hi) const {
    const double r = root_bound();
    lo = std::max(lo, -r);
    hi = std::min(hi, r);
    std::vector<double> out;
    if (degree() <= 0 || !(hi >= lo)) return out;
    if (degree() == 1) {
      const double x = -c_[0] / c_[1];
      if (x >= lo && x <= hi) out.push_back(x);
      return out;
    }
    std::vector<double> knots{lo};
    for (double x : derivative().real_roots(lo, hi)) knots.push_back(x);
    knots.push_back(hi);
    const auto& p = *this;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
      double a = knots[k];
      double b = knots[k + 1];
      const double fa = p(a);
      const double fb = p(b);
      if (fa == 0.0) {
        if (out.empty() || out.back() != a) out.push_back(a);
        continue;
      }
      if (fb == 0.0 || (fa < 0.0) == (fb < 0.0)) continue;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (!(m > a && m < b)) break;
        const double fm = p(m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if ((fm < 0.0) == (fa < 0.0)) a = m; else b = m;
      }
      out.push_back(0.5 * (a + b));
    }
    if (p(knots.back()) == 0.0 && (out.empty() || out.back() != knots.back())) out.push_back(knots.back());
    return out;
  }

  [[nodiscard]] std::optional<IntervalSet> sublevel(double y, Interval window) const {
    if (y < 0.0) return IntervalSet{};
    if (degree() <= 0) {
      if (std::abs(c_[0]) <= y) return std::nullopt;
      return IntervalSet{};
    }
    const double r = std::max(shifted(-y).root_bound(), shifted(y).root_bound());
    const double lo = std::max(window.lo, -r);
    const double hi = std::min(window.hi, r);
    if (!(hi > lo)) return IntervalSet{};
    std::vector<double> cuts{lo, hi};
    for (double x : shifted(-y).real_roots(lo, hi)) cuts.push_back(x);
    for (double x : shifted(y).real_roots(lo, hi)) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    std::vector<Interval> raw;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      if (!(cuts[k + 1] > cuts[k])) continue;
      if (std::abs((*this)(0.5 * (cuts[k] + cuts[k + 1]))) <= y) raw.push_back({cuts[k], cuts[k + 1]});
    }
    return IntervalSet::normalize(std::move(raw));
  }

  [[nodiscard]] double growth_degree() const noexcept { return std::max(0, degree()); }

 private:
  std::vector<double> c_{0.0};
};

/// |f|^exponent for exponent > 0.
template <ScalarFunction1D F>
struct PowerOf {
  F base;
  double exponent = 1.0;

  double operator()(double x) const { return std::pow(std::abs(base(x)), exponent); }

  [[nodiscard]] std::optional<IntervalSet> sublevel(double y, Interval window) const {
    if (y < 0.0) return IntervalSet{};
    return base.sublevel(std::pow(y, 1.0 / exponent), window);
  }

  [[nodiscard]] double growth_degree() const { return base.growth_degree() * exponent; }
};

/// Function taking finitely many values on nested sets: the value of the first
/// listed level whose set contains x, and `outside` elsewhere. Levels must be
/// listed by increasing nonnegative value.
struct StepFunction1D {
  std::vector<std::pair<double, IntervalSet>> levels;
  double outside = 0.0;

  double operator()(double x) const {
    for (const auto& [value, set] : levels) {
      if (set.contains(x)) return value;
    }
    return outside;
  }

  [[nodiscard]] std::optional<IntervalSet> sublevel(double y, Interval window) const {
    if (std::abs(outside) <= y) return std::nullopt;
    IntervalSet acc;
    for (const auto& [value, set] : levels) {
      if (std::abs(value) <= y) acc = set_union(acc, set);
    }
    if (acc.empty()) return acc;
    if (std::isfinite(window.lo) && std::isfinite(window.hi)) {
      return set_intersection(acc, IntervalSet::normalize({window}));
    }
    const double lo = std::max(window.lo, acc.lower());
    const double hi = std::min(window.hi, acc.upper());
    if (!(hi > lo)) return IntervalSet{};
    return set_intersection(acc, IntervalSet::normalize({{lo, hi}}));
  }

  [[nodiscard]] double growth_degree() const noexcept { return 0.0; }
};

}  // namespace dilatrix

#pragma once

// One-dimensional s-concave probability densities built from s-affine pieces.
//
// By Borell's correspondence a density psi on the line gives an s-concave
// measure iff psi is gamma-concave, gamma = s / (1 - s): psi^gamma concave for
// s > 0, convex for s < 0, and log psi concave for s = 0. Every density here is described by a continuous piecewise-linear
// profile h:
//
//   s != 0 :  psi = h^{(1-s)/s} / Z      (h = psi^gamma up to scale)
//   s == 0 :  psi = exp(h) / Z
//
// On a piece where h is affine the antiderivative is closed form,
//   integral psi = (H(y) - H(x)) / k,   H = h^{1/s}, k = b/s   (s != 0)
//                                       H = exp(h),  k = b     (s == 0)
// and all arithmetic is carried out on log H so that large exponents
// (1/s for small s) neither overflow nor cancel.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dilatrix/interval_set.hpp"

namespace dilatrix {

inline constexpr double inf = std::numeric_limits<double>::infinity();

namespace detail {

inline double log_add_exp(double a, double b) {
  if (a == -inf) return b;
  if (b == -inf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// One affine piece of the profile: h(x) = h0 + slope * (x - x0) on [lo, hi].
struct ProfilePiece {
  double lo = 0.0;
  double hi = 0.0;
  double x0 = 0.0;
  double h0 = 0.0;
  double slope = 0.0;

  [[nodiscard]] double h(double x) const { return h0 + slope * (x - x0); }
};

class PieceTable {
 public:
  PieceTable() = default;

  PieceTable(double s, std::vector<ProfilePiece> pieces) : s_(s), pieces_(std::move(pieces)) {
    if (!(s_ <= 1.0) || !std::isfinite(s_)) throw std::invalid_argument("s must be finite and <= 1");
    if (pieces_.empty()) throw std::invalid_argument("density needs at least one piece");
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      const auto& p = pieces_[k];
      if (!(p.lo < p.hi)) throw std::invalid_argument("density pieces must have lo < hi");
      if (k > 0 && pieces_[k - 1].hi != p.lo) throw std::invalid_argument("density pieces must be contiguous");
    }
    validate_ends();
    log_mass_.resize(pieces_.size());
    log_z_ = -inf;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      log_mass_[k] = log_integral(pieces_[k], pieces_[k].lo, pieces_[k].hi);
      log_z_ = log_add_exp(log_z_, log_mass_[k]);
    }
    if (!std::isfinite(log_z_)) throw std::invalid_argument("density is not normalizable");
    cumulative_.assign(pieces_.size() + 1, 0.0);
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      cumulative_[k + 1] = cumulative_[k] + std::exp(log_mass_[k] - log_z_);
    }
  }

  [[nodiscard]] double s() const noexcept { return s_; }
  [[nodiscard]] double log_normalizer() const noexcept { return log_z_; }
  [[nodiscard]] Interval support() const noexcept { return {pieces_.front().lo, pieces_.back().hi}; }
  [[nodiscard]] const std::vector<ProfilePiece>& pieces() const noexcept { return pieces_; }

  [[nodiscard]] double pdf(double x) const {
    const auto* p = find(x);
    if (p == nullptr) return 0.0;
    return std::exp(log_psi(*p, x) - log_z_);
  }

  /// mu([x, y]); endpoints may be infinite.
  [[nodiscard]] double mass(double x, double y) const {
    if (!(y > x)) return 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      const auto& p = pieces_[k];
      if (p.hi <= x) continue;
      if (p.lo >= y) break;
      if (x <= p.lo && p.hi <= y) {
        total += cumulative_[k + 1] - cumulative_[k];
      } else {
        const double a = std::max(x, p.lo);
        const double b = std::min(y, p.hi);
        if (b > a) total += std::exp(log_integral(p, a, b) - log_z_);
      }
    }
    return total;
  }

  [[nodiscard]] double cdf(double x) const { return std::min(1.0, mass(-inf, x)); }

  /// Smallest x with mu((-inf, x]) = level, level in [0, 1].
  [[nodiscard]] double quantile(double level) const {
    if (!(level >= 0.0 && level <= 1.0)) throw std::invalid_argument("quantile level must lie in [0,1]");
    const double total = cumulative_.back();
    const double target = level * total;
    std::size_t k = 0;
    while (k + 1 < pieces_.size() && cumulative_[k + 1] < target) ++k;
    const double within = std::max(0.0, target - cumulative_[k]);
    return invert_piece(pieces_[k], within);
  }

 private:
  [[nodiscard]] const ProfilePiece* find(double x) const {
    if (x < pieces_.front().lo || x > pieces_.back().hi) return nullptr;
    for (const auto& p : pieces_) {
      if (x <= p.hi) return &p;
    }
    return nullptr;
  }

  // log of the unnormalized density.
  [[nodiscard]] double log_psi(const ProfilePiece& p, double x) const {
    const double h = p.h(x);
    if (s_ == 0.0) return h;
    if (h <= 0.0) return (s_ == 1.0 && h == 0.0) ? 0.0 : -inf;
    return (1.0 - s_) / s_ * std::log(h);
  }

  // log H at a point; H = h^{1/s} (s != 0) or exp(h) (s == 0). Handles infinite x.
  [[nodiscard]] double log_H(const ProfilePiece& p, double x) const {
    if (std::isinf(x)) return -inf;  // integrability forces H -> 0 at infinite ends
    const double h = p.h(x);
    if (s_ == 0.0) return h;
    if (h <= 0.0) return -inf;
    return std::log(h) / s_;
  }

  // log of the unnormalized integral over [x, y] inside piece p.
  [[nodiscard]] double log_integral(const ProfilePiece& p, double x, double y) const {
    if (!(y > x)) return -inf;
    if (p.slope == 0.0) {
      if (std::isinf(x) || std::isinf(y)) return inf;
      return log_psi(p, x) + std::log(y - x);
    }
    const double lx = log_H(p, x);
    const double ly = log_H(p, y);
    const bool base_is_x = lx >= ly;
    const double base = base_is_x ? x : y;
    const double other = base_is_x ? y : x;
    const double log_base = base_is_x ? lx : ly;
    // w = log(H(other)/H(base)) <= 0
    double w;
    if (std::isinf(other)) {
      w = -inf;
    } else if (s_ == 0.0) {
      w = p.slope * (other - base);
    } else {
      const double z = p.slope * (other - base) / p.h(base);
      w = (z <= -1.0) ? (s_ > 0 ? -inf : inf) : std::log1p(z) / s_;
    }
    w = std::min(w, 0.0);
    const double k = s_ == 0.0 ? p.slope : p.slope / s_;
    return log_base + std::log(-std::expm1(w)) - std::log(std::abs(k));
  }

  // x in piece p with normalized mass `m` on [p.lo, x].
  [[nodiscard]] double invert_piece(const ProfilePiece& p, double m) const {
    if (m <= 0.0) return p.lo;
    const double log_t = std::log(m) + log_z_;
    if (p.slope == 0.0) {
      return p.lo + std::exp(log_t - log_psi(p, p.lo));
    }
    const double k = s_ == 0.0 ? p.slope : p.slope / s_;
    const double l_lo = log_H(p, p.lo);
    double l_y;
    if (k > 0) {
      l_y = log_add_exp(l_lo, std::log(k) + log_t);
    } else {
      const double r = std::exp(std::log(-k) + log_t - l_lo);
      l_y = r >= 1.0 ? -inf : l_lo + std::log1p(-r);
    }
    double y;
    if (l_y == -inf) {
      y = p.hi;
    } else if (s_ == 0.0) {
      y = p.x0 + (l_y - p.h0) / p.slope;
    } else {
      y = p.x0 + (std::exp(s_ * l_y) - p.h0) / p.slope;
    }
    return std::clamp(y, p.lo, p.hi);
  }

  void validate_ends() const {
    const auto& first = pieces_.front();
    const auto& last = pieces_.back();
    for (const auto& p : pieces_) {
      for (double x : {p.lo, p.hi}) {
        if (std::isinf(x)) continue;
        const double h = p.h(x);
        if (!std::isfinite(h)) throw std::invalid_argument("profile must be finite");
        if (s_ < 0.0 && !(h > 0.0)) throw std::invalid_argument("profile must be positive for s < 0");
        // Roots of h computed as a/s may land a rounding step past zero.
        if (s_ > 0.0 && h < -1e-12 * (1.0 + std::abs(p.h0))) throw std::invalid_argument("profile must be nonnegative for s > 0");
      }
    }
    if (std::isinf(last.hi)) {
      const bool ok = (s_ == 0.0 && last.slope < 0.0) || (s_ < 0.0 && last.slope > 0.0);
      if (!ok) throw std::invalid_argument("right tail is not integrable for this s");
    }
    if (std::isinf(first.lo)) {
      const bool ok = (s_ == 0.0 && first.slope > 0.0) || (s_ < 0.0 && first.slope < 0.0);
      if (!ok) throw std::invalid_argument("left tail is not integrable for this s");
    }
  }

  double s_ = 1.0;
  std::vector<ProfilePiece> pieces_;
  std::vector<double> log_mass_;
  std::vector<double> cumulative_;
  double log_z_ = 0.0;
};

}  // namespace detail

/// Requirements on a one-dimensional probability measure used by the checks.
template <class D>
concept Density1D = requires(const D& d, double x, double y) {
  { d.s() } -> std::convertible_to<double>;
  { d.support() } -> std::convertible_to<Interval>;
  { d.pdf(x) } -> std::convertible_to<double>;
  { d.mass(x, y) } -> std::convertible_to<double>;
};

/// Density with psi^gamma affine on its support: psi = (A + Bx)_+^{(1-s)/s} / Z,
/// or exp(A + Bx) / Z for s = 0. The support may be a half-line.
class SAffineDensity {
 public:
  SAffineDensity(double s, double A, double B, Interval support) : A_(A), B_(B) {
    if (std::isnan(support.lo) || std::isnan(support.hi) || !(support.lo < support.hi)) {
      throw std::invalid_argument("support must satisfy lo < hi");
    }
    if (std::isinf(support.lo) && std::isinf(support.hi)) {
      throw std::invalid_argument("an s-affine density cannot live on the whole line");
    }
    const double x0 = std::isfinite(support.lo) ? support.lo : support.hi;
    table_ = detail::PieceTable(s, {{support.lo, support.hi, x0, A + B * x0, B}});
  }

  [[nodiscard]] double s() const noexcept { return table_.s(); }
  [[nodiscard]] double A() const noexcept { return A_; }
  [[nodiscard]] double B() const noexcept { return B_; }
  [[nodiscard]] Interval support() const noexcept { return table_.support(); }
  [[nodiscard]] double normalizer() const { return std::exp(table_.log_normalizer()); }
  [[nodiscard]] double pdf(double x) const { return table_.pdf(x); }
  [[nodiscard]] double mass(double x, double y) const { return table_.mass(x, y); }
  [[nodiscard]] double cdf(double x) const { return table_.cdf(x); }
  [[nodiscard]] double quantile(double level) const { return table_.quantile(level); }
  [[nodiscard]] const detail::PieceTable& table() const noexcept { return table_; }

 private:
  double A_;
  double B_;
  detail::PieceTable table_;
};

/// General s-concave density: h is continuous and piecewise linear on
/// [breakpoints.front(), breakpoints.back()], optionally continued linearly to
/// -inf / +inf with the given tail slopes. h must be concave for s >= 0 and
/// convex for s < 0.
class PiecewiseSConcaveDensity {
 public:
  static constexpr std::size_t max_breakpoints = 16;

  PiecewiseSConcaveDensity(double s, std::vector<double> breakpoints, std::vector<double> values,
                           std::optional<double> left_tail_slope = std::nullopt,
                           std::optional<double> right_tail_slope = std::nullopt)
      : breakpoints_(std::move(breakpoints)),
        values_(std::move(values)),
        left_tail_(left_tail_slope),
        right_tail_(right_tail_slope) {
    if (breakpoints_.size() < 2 || breakpoints_.size() != values_.size()) {
      throw std::invalid_argument("piecewise density needs >= 2 breakpoints with matching values");
    }
    if (breakpoints_.size() > max_breakpoints) {
      throw std::invalid_argument("piecewise density supports at most 16 breakpoints");
    }
    std::vector<double> slopes;
    if (left_tail_) slopes.push_back(*left_tail_);
    for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
      if (!(breakpoints_[k] < breakpoints_[k + 1])) throw std::invalid_argument("breakpoints must increase");
      slopes.push_back((values_[k + 1] - values_[k]) / (breakpoints_[k + 1] - breakpoints_[k]));
    }
    if (right_tail_) slopes.push_back(*right_tail_);
    const double orientation = s < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k + 1 < slopes.size(); ++k) {
      // Tolerates rounding in the slope computation.
      if (orientation * (slopes[k + 1] - slopes[k]) > 1e-12 * (1.0 + std::abs(slopes[k]))) {
        throw std::invalid_argument(s < 0.0 ? "profile must be convex for s < 0 (slopes non-decreasing)"
                                            : "profile must be concave for s >= 0 (slopes non-increasing)");
      }
    }
    std::vector<detail::ProfilePiece> pieces;
    if (left_tail_) pieces.push_back({-inf, breakpoints_.front(), breakpoints_.front(), values_.front(), *left_tail_});
    for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
      const double slope = (values_[k + 1] - values_[k]) / (breakpoints_[k + 1] - breakpoints_[k]);
      pieces.push_back({breakpoints_[k], breakpoints_[k + 1], breakpoints_[k], values_[k], slope});
    }
    if (right_tail_) pieces.push_back({breakpoints_.back(), inf, breakpoints_.back(), values_.back(), *right_tail_});
    table_ = detail::PieceTable(s, std::move(pieces));
  }

  [[nodiscard]] double s() const noexcept { return table_.s(); }
  [[nodiscard]] const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] std::optional<double> left_tail_slope() const noexcept { return left_tail_; }
  [[nodiscard]] std::optional<double> right_tail_slope() const noexcept { return right_tail_; }
  [[nodiscard]] Interval support() const noexcept { return table_.support(); }
  [[nodiscard]] double pdf(double x) const { return table_.pdf(x); }
  [[nodiscard]] double mass(double x, double y) const { return table_.mass(x, y); }
  [[nodiscard]] double cdf(double x) const { return table_.cdf(x); }
  [[nodiscard]] double quantile(double level) const { return table_.quantile(level); }
  [[nodiscard]] const detail::PieceTable& table() const noexcept { return table_; }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::optional<double> left_tail_;
  std::optional<double> right_tail_;
  detail::PieceTable table_;
};

/// Either kind of density behind one value type.
class AnyDensity {
 public:
  AnyDensity(SAffineDensity d) : impl_(std::move(d)) {}
  AnyDensity(PiecewiseSConcaveDensity d) : impl_(std::move(d)) {}

  [[nodiscard]] double s() const {
    return std::visit([](const auto& d) { return d.s(); }, impl_);
  }
  [[nodiscard]] Interval support() const {
    return std::visit([](const auto& d) { return d.support(); }, impl_);
  }
  [[nodiscard]] double pdf(double x) const {
    return std::visit([x](const auto& d) { return d.pdf(x); }, impl_);
  }
  [[nodiscard]] double mass(double x, double y) const {
    return std::visit([x, y](const auto& d) { return d.mass(x, y); }, impl_);
  }
  [[nodiscard]] double cdf(double x) const {
    return std::visit([x](const auto& d) { return d.cdf(x); }, impl_);
  }
  [[nodiscard]] double quantile(double level) const {
    return std::visit([level](const auto& d) { return d.quantile(level); }, impl_);
  }
  [[nodiscard]] const std::variant<SAffineDensity, PiecewiseSConcaveDensity>& get() const noexcept {
    return impl_;
  }

 private:
  std::variant<SAffineDensity, PiecewiseSConcaveDensity> impl_;
};

// ---------------------------------------------------------------------------
// Standard members of the family.

inline SAffineDensity uniform_density(double lo, double hi) { return {1.0, 1.0, 0.0, {lo, hi}}; }

/// rate * exp(-rate (x - lo)) on [lo, inf).
inline SAffineDensity exponential_density(double rate = 1.0, double lo = 0.0) {
  return {0.0, rate * lo, -rate, {lo, inf}};
}

/// exp(-|x - center|) / 2 on the whole line (log-concave, s = 0).
inline PiecewiseSConcaveDensity laplace_density(double center = 0.0) {
  return {0.0, {center - 1.0, center, center + 1.0}, {-1.0, 0.0, -1.0}, 1.0, -1.0};
}

/// The equality-case density (a - s x)_+^{1/s - 1} on [-1, a/s] (s > 0) or
/// [-1, inf) (s < 0), normalized. For s = 0 this is the continuity limit
/// exp(-(x+1)/a) / a on [-1, inf). Requires a > max(-s, s tMax), tMax > 1.
inline SAffineDensity make_paper_extremal(double s, double a, double tMax) {
  if (!(tMax > 1.0)) throw std::invalid_argument("tMax must exceed 1");
  if (!(a > std::max(-s, s * tMax))) throw std::invalid_argument("need a > max(-s, s*tMax)");
  if (s == 0.0) return {0.0, -1.0 / a, -1.0 / a, {-1.0, inf}};
  const double hi = s > 0.0 ? a / s : inf;
  return {s, a, -s, {-1.0, hi}};
}

// ---------------------------------------------------------------------------
// Measures of interval sets.

/// mu(F).
template <Density1D D>
double measure_of(const D& mu, const IntervalSet& F) {
  double total = 0.0;
  for (const auto& c : F.components()) total += mu.mass(c.lo, c.hi);
  return std::min(total, 1.0);
}

/// mu(F^c), summed directly over the gaps of F inside the support so that
/// small complements keep full relative precision.
template <Density1D D>
double measure_of_complement(const D& mu, const IntervalSet& F) {
  const Interval supp = mu.support();
  double total = 0.0;
  double cursor = supp.lo;
  for (const auto& c : F.components()) {
    if (c.hi <= cursor) continue;
    if (c.lo >= supp.hi) break;
    if (c.lo > cursor) total += mu.mass(cursor, c.lo);
    cursor = std::max(cursor, c.hi);
  }
  if (cursor < supp.hi) total += mu.mass(cursor, supp.hi);
  return std::min(total, 1.0);
}

}  // namespace dilatrix

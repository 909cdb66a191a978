#pragma once

// Finite unions of bounded intervals on the real line.
//
// An IntervalSet is kept normalized: components sorted by left endpoint,
// pairwise disjoint, each of positive length. The topology tag records how
// boundary points are meant to be read. Closed sets merge touching
// components; open sets (the output of dilation) keep components that only
// touch, because the shared endpoint is a genuine hole of the set.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dilatrix {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] constexpr double length() const noexcept { return hi - lo; }
  [[nodiscard]] constexpr double center() const noexcept { return 0.5 * (lo + hi); }
  [[nodiscard]] constexpr bool contains(double x) const noexcept { return lo <= x && x <= hi; }

  friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

enum class Topology { closed, open };

class IntervalSet {
 public:
  // Endpoints that coincide up to this relative slack are merged for closed sets.
  // The slack is relative so that sets at any scale keep their gaps.
  static constexpr double merge_tolerance = 1e-12;

  IntervalSet() = default;

  /// Builds the normalized union of `raw`.
  /// Throws std::invalid_argument on lo > hi or non-finite endpoints.
  static IntervalSet normalize(std::vector<Interval> raw, Topology topology = Topology::closed) {
    for (const auto& iv : raw) {
      if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
        throw std::invalid_argument("interval endpoints must be finite");
      }
      if (iv.lo > iv.hi) {
        throw std::invalid_argument("interval has lo > hi");
      }
    }
    std::erase_if(raw, [](const Interval& iv) { return !(iv.hi > iv.lo); });
    std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) {
      return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });

    IntervalSet out;
    out.topology_ = topology;
    for (const auto& iv : raw) {
      if (out.components_.empty()) {
        out.components_.push_back(iv);
        continue;
      }
      Interval& last = out.components_.back();
      const bool overlaps = topology == Topology::closed
                                ? iv.lo <= last.hi + merge_tolerance * std::max(std::abs(last.hi), std::abs(iv.lo))
                                : iv.lo < last.hi;
      if (overlaps) {
        last.hi = std::max(last.hi, iv.hi);
      } else {
        out.components_.push_back(iv);
      }
    }
    return out;
  }

  static IntervalSet normalize(std::initializer_list<Interval> raw, Topology topology = Topology::closed) {
    return normalize(std::vector<Interval>(raw), topology);
  }

  [[nodiscard]] const std::vector<Interval>& components() const noexcept { return components_; }
  [[nodiscard]] Topology topology() const noexcept { return topology_; }
  [[nodiscard]] bool empty() const noexcept { return components_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return components_.size(); }
  [[nodiscard]] double lower() const { return components_.front().lo; }
  [[nodiscard]] double upper() const { return components_.back().hi; }

  /// Lebesgue measure.
  [[nodiscard]] double measure() const noexcept {
    double total = 0.0;
    for (const auto& c : components_) total += c.length();
    return total;
  }

  /// Lebesgue measure of the intersection with `iv`.
  [[nodiscard]] double intersection_length(Interval iv) const noexcept {
    double total = 0.0;
    for (const auto& c : components_) {
      if (c.lo >= iv.hi) break;
      const double lo = std::max(c.lo, iv.lo);
      const double hi = std::min(c.hi, iv.hi);
      if (hi > lo) total += hi - lo;
    }
    return total;
  }

  /// Membership honoring the topology: strict inequalities for open sets.
  [[nodiscard]] bool contains(double x) const noexcept {
    auto it = std::upper_bound(components_.begin(), components_.end(), x,
                               [](double v, const Interval& c) { return v < c.lo; });
    // `it` is the first component with lo > x; the candidate is the one before,
    // but for open sets a point equal to some lo lands there too.
    if (it == components_.begin()) return false;
    const Interval& c = *std::prev(it);
    if (topology_ == Topology::closed) return c.lo <= x && x <= c.hi;
    return c.lo < x && x < c.hi;
  }

  /// True when the open interval (iv.lo, iv.hi) lies inside a single component.
  [[nodiscard]] bool covers_open(Interval iv) const noexcept {
    for (const auto& c : components_) {
      if (c.lo <= iv.lo && iv.hi <= c.hi) return true;
    }
    return false;
  }

  /// Image under x -> scale * x + shift (scale != 0).
  [[nodiscard]] IntervalSet affine(double scale, double shift) const {
    if (scale == 0.0) throw std::invalid_argument("affine map needs a nonzero scale");
    std::vector<Interval> raw;
    raw.reserve(components_.size());
    for (const auto& c : components_) {
      const double a = scale * c.lo + shift;
      const double b = scale * c.hi + shift;
      raw.push_back({std::min(a, b), std::max(a, b)});
    }
    return normalize(std::move(raw), topology_);
  }

  /// Complement relative to the bounded window `w`.
  [[nodiscard]] IntervalSet complement_in(Interval w) const {
    std::vector<Interval> raw;
    double cursor = w.lo;
    for (const auto& c : components_) {
      if (c.hi <= w.lo) continue;
      if (c.lo >= w.hi) break;
      if (c.lo > cursor) raw.push_back({cursor, c.lo});
      cursor = std::max(cursor, c.hi);
    }
    if (cursor < w.hi) raw.push_back({cursor, w.hi});
    return normalize(std::move(raw),
                     topology_ == Topology::open ? Topology::closed : Topology::open);
  }

  friend bool operator==(const IntervalSet& a, const IntervalSet& b) {
    return a.components_ == b.components_;
  }

 private:
  std::vector<Interval> components_;
  Topology topology_ = Topology::closed;
};

// ---------------------------------------------------------------------------
// Set algebra. Measures are all that downstream code relies on, so results
// take the topology of the first operand.

inline IntervalSet set_union(const IntervalSet& a, const IntervalSet& b) {
  std::vector<Interval> raw = a.components();
  raw.insert(raw.end(), b.components().begin(), b.components().end());
  return IntervalSet::normalize(std::move(raw), a.topology());
}

inline IntervalSet set_intersection(const IntervalSet& a, const IntervalSet& b) {
  std::vector<Interval> raw;
  const auto& x = a.components();
  const auto& y = b.components();
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    const double lo = std::max(x[i].lo, y[j].lo);
    const double hi = std::min(x[i].hi, y[j].hi);
    if (hi > lo) raw.push_back({lo, hi});
    if (x[i].hi < y[j].hi) ++i; else ++j;
  }
  return IntervalSet::normalize(std::move(raw), a.topology());
}

inline IntervalSet set_difference(const IntervalSet& a, const IntervalSet& b) {
  if (a.empty()) return a;
  const Interval hull{a.lower(), a.upper()};
  return set_intersection(a, b.complement_in(hull));
}

/// Lebesgue measure of the symmetric difference.
inline double symmetric_difference_measure(const IntervalSet& a, const IntervalSet& b) {
  return a.measure() + b.measure() - 2.0 * set_intersection(a, b).measure();
}

/// Number of finite boundary points.
inline std::size_t boundary_count(const IntervalSet& s) { return 2 * s.size(); }

}  // namespace dilatrix

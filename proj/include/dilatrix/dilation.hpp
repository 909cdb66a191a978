#pragma once

// t-dilation of one-dimensional sets and the generalized Minkowski functional.
//
// For F = [p_1,q_1] u ... u [p_m,q_m] and tau = (t+1)/2 a point x lies in F_t
// iff some interval I containing x has |I| < tau |F n I|. An optimal I always
// spans whole components i..j, so
//
//   F_t = U_{i<=j, q_j - p_i < c_ij tau} ( q_j - c_ij tau , p_i + c_ij tau )
//
// with c_ij the total length of components i..j.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dilatrix/interval_set.hpp"

namespace dilatrix {

/// Exact F_t for t > 1. The result is an open set.
inline IntervalSet dilate_exact(const IntervalSet& F, double t) {
  if (!(t > 1.0) || !std::isfinite(t)) {
    throw std::invalid_argument("dilation parameter t must be finite and > 1");
  }
  const auto& comps = F.components();
  const double tau = 0.5 * (t + 1.0);
  std::vector<Interval> raw;
  raw.reserve(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const double p = comps[i].lo;
    double covered = 0.0;
    for (std::size_t j = i; j < comps.size(); ++j) {
      covered += comps[j].length();
      const double q = comps[j].hi;
      const double reach = covered * tau;
      if (q - p < reach) {
        // Centered form: a single component maps to center +- t * length / 2 exactly.
        const double center = 0.5 * (p + q);
        const double half = 0.5 * (covered * t + (covered - (q - p)));
        raw.push_back({center - half, center + half});
      }
    }
  }
  return IntervalSet::normalize(std::move(raw), Topology::open);
}

/// alpha_F(x) = inf{t > 1 : x in F_t}, clamped to 1 for points of F.
/// Returns +inf for empty F.
inline double alpha_1d(const IntervalSet& F, double x) {
  const auto& comps = F.components();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const double p = comps[i].lo;
    double covered = 0.0;
    for (std::size_t j = i; j < comps.size(); ++j) {
      covered += comps[j].length();
      const double q = comps[j].hi;
      const double need = std::max({q - x, x - p, q - p}) / covered;
      best = std::min(best, need);
    }
  }
  if (!std::isfinite(best)) return best;
  return std::max(1.0, 2.0 * best - 1.0);
}

// ---------------------------------------------------------------------------
// Brute-force grid oracle. Shares nothing with dilate_exact beyond the input
// representation: membership of each grid point is decided by maximizing
// |F n I| / |I| over intervals I = [a,b] containing the point whose
// endpoints are drawn from {x} and the component endpoints.

namespace detail {

// |F n (-inf, y]| given sorted components and prefix lengths.
inline double cumulative_measure(const std::vector<Interval>& comps,
                                 const std::vector<double>& prefix, double y) {
  auto it = std::upper_bound(comps.begin(), comps.end(), y,
                             [](double v, const Interval& c) { return v < c.lo; });
  if (it == comps.begin()) return 0.0;
  const std::size_t k = static_cast<std::size_t>(std::distance(comps.begin(), it)) - 1;
  return prefix[k] + std::min(y, comps[k].hi) - comps[k].lo;
}

}  // namespace detail

/// Grid approximation of F_t: each member grid point contributes the cell
/// [x - step/2, x + step/2]. Throws when step exceeds the shortest component.
inline IntervalSet dilate_grid_oracle(const IntervalSet& F, double t, double step) {
  if (!(t > 1.0)) throw std::invalid_argument("dilation parameter t must be > 1");
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  const auto& comps = F.components();
  if (comps.empty()) return IntervalSet::normalize({}, Topology::open);
  for (const auto& c : comps) {
    if (step > c.length()) {
      throw std::invalid_argument("grid step larger than the smallest component");
    }
  }
  const double tau = 0.5 * (t + 1.0);

  std::vector<double> prefix(comps.size(), 0.0);
  for (std::size_t k = 1; k < comps.size(); ++k) prefix[k] = prefix[k - 1] + comps[k - 1].length();

  std::vector<double> ends;
  for (const auto& c : comps) {
    ends.push_back(c.lo);
    ends.push_back(c.hi);
  }
  std::vector<double> ends_cum(ends.size());
  for (std::size_t k = 0; k < ends.size(); ++k) {
    ends_cum[k] = detail::cumulative_measure(comps, prefix, ends[k]);
  }

  // Any member x satisfies x > lo - (tau-1)|F| and x < hi + (tau-1)|F|.
  const double total = F.measure();
  const double lo = F.lower() - (tau - 1.0) * total - step;
  const double hi = F.upper() + (tau - 1.0) * total + step;
  // Grid points are integer multiples of step; when 1/step is an integer they
  // are formed as k / (1/step) so that decimal lattice points are exact.
  const double inv = 1.0 / step;
  const bool decimal = std::abs(inv - std::round(inv)) < 1e-9 * inv;
  auto grid_point = [&](long long k) {
    return decimal ? static_cast<double>(k) / std::round(inv) : static_cast<double>(k) * step;
  };
  const auto k_first = static_cast<long long>(std::floor(lo / step));
  const auto k_last = static_cast<long long>(std::ceil(hi / step));

  std::vector<Interval> cells;
  constexpr long long no_run = std::numeric_limits<long long>::min();
  long long run_start = no_run;
  for (long long k = k_first; k <= k_last; ++k) {
    const double x = grid_point(k);
    const double cx = detail::cumulative_measure(comps, prefix, x);
    bool member = false;
    // Left endpoint candidates: x itself and every endpoint <= x.
    for (std::size_t a = 0; a <= ends.size() && !member; ++a) {
      const double left = a < ends.size() ? ends[a] : x;
      if (left > x) continue;
      const double cl = a < ends.size() ? ends_cum[a] : cx;
      for (std::size_t b = 0; b <= ends.size(); ++b) {
        const double right = b < ends.size() ? ends[b] : x;
        if (right < x || right <= left) continue;
        const double cr = b < ends.size() ? ends_cum[b] : cx;
        if (right - left < tau * (cr - cl)) {
          member = true;
          break;
        }
      }
    }
    if (member && run_start == no_run) run_start = k;
    if ((!member || k == k_last) && run_start != no_run) {
      const long long last = member ? k : k - 1;
      cells.push_back({grid_point(run_start) - 0.5 * step, grid_point(last) + 0.5 * step});
      run_start = no_run;
    }
  }
  return IntervalSet::normalize(std::move(cells), Topology::open);
}

}  // namespace dilatrix

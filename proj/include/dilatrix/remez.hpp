#pragma once

// Remez-type checks for f = ||P||: empirical modulus of regularity,
// sublevel-set dilation along lines, the Rivlin-Shapiro bound and the
// multi-dimensional Remez inequality on convex bodies.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dilatrix/check_report.hpp"
#include "dilatrix/chebyshev.hpp"
#include "dilatrix/dilation.hpp"
#include "dilatrix/parallel.hpp"
#include "dilatrix/polynomial.hpp"
#include "dilatrix/polytope.hpp"
#include "dilatrix/random.hpp"

namespace dilatrix {

using ScalarField = std::function<double(const Point&)>;

namespace detail {

inline Point along(const Point& a, const Point& b, double lambda) {
  Point x(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) x[i] = a[i] + lambda * (b[i] - a[i]);
  return x;
}

// Maximum of g on [lo, hi]: the best of `grid` + 1 equispaced samples,
// polished by golden-section search on the neighbouring cells.
inline double sup_on_interval(const std::function<double(double)>& g, double lo, double hi, int grid = 2000) {
  if (!(hi > lo)) return g(lo);
  const double h = (hi - lo) / grid;
  double best = -std::numeric_limits<double>::infinity();
  int arg = 0;
  for (int k = 0; k <= grid; ++k) {
    const double v = g(lo + k * h);
    if (v > best) {
      best = v;
      arg = k;
    }
  }
  double a = lo + std::max(0, arg - 1) * h;
  double b = lo + std::min(grid, arg + 1) * h;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 80 && b - a > 1e-14 * (1.0 + std::abs(a)); ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + phi * (b - a);
      gd = g(d);
    }
  }
  return std::max({best, gc, gd});
}

inline double sup_on_set(const std::function<double(double)>& g, const IntervalSet& F, int grid = 2000) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : F.components()) best = std::max(best, sup_on_interval(g, c.lo, c.hi, grid));
  return best;
}

// {lambda in [lo, hi] : g(lambda) < level} from sign changes on a grid,
// each crossing refined by bisection to 1e-10. Returns nullopt when g is not
// finite somewhere on the grid.
inline std::optional<IntervalSet> sublevel_on_window(const std::function<double(double)>& g, double level,
                                                     double lo, double hi, int grid) {
  const double h = (hi - lo) / grid;
  std::vector<double> values(static_cast<std::size_t>(grid) + 1);
  for (int k = 0; k <= grid; ++k) {
    values[static_cast<std::size_t>(k)] = g(lo + k * h) - level;
    if (!std::isfinite(values[static_cast<std::size_t>(k)])) return std::nullopt;
  }
  auto crossing = [&](double a, double b, bool a_inside) {
    while (b - a > 1e-10) {
      const double m = 0.5 * (a + b);
      if ((g(m) - level < 0.0) == a_inside) a = m; else b = m;
    }
    return 0.5 * (a + b);
  };
  std::vector<Interval> parts;
  bool inside = values[0] < 0.0;
  double start = lo;
  for (int k = 0; k < grid; ++k) {
    const bool next_inside = values[static_cast<std::size_t>(k) + 1] < 0.0;
    if (next_inside == inside) continue;
    const double x = crossing(lo + k * h, lo + (k + 1) * h, inside);
    if (inside) parts.push_back({start, x}); else start = x;
    inside = next_inside;
  }
  if (inside) parts.push_back({start, hi});
  return IntervalSet::normalize(std::move(parts), Topology::open);
}

// Uniform point of V by rejection from its bounding box.
inline Point uniform_point_in(const ConvexPolytope& V, Rng& rng) {
  const auto [lo, hi] = V.bounding_box();
  Point x(lo.size());
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    for (std::size_t d = 0; d < x.size(); ++d) x[d] = uniform(rng, lo[d], hi[d]);
    if (V.contains(x)) return x;
  }
  throw std::runtime_error("rejection sampling from the body failed");
}

// Compass search for a local maximum of f inside `region`.
inline double climb(const ScalarField& f, const std::function<bool(const Point&)>& region, Point x, double step) {
  double best = f(x);
  while (step > 1e-10) {
    bool moved = false;
    for (std::size_t d = 0; d < x.size(); ++d) {
      for (double dir : {1.0, -1.0}) {
        Point y = x;
        y[d] += dir * step;
        if (!region(y)) continue;
        const double v = f(y);
        if (v > best) {
          best = v;
          x = std::move(y);
          moved = true;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

}  // namespace detail

struct DeltaEstimate {
  double value = 0.0;
  Point from, to;  // the segment that realized it
};

/// Empirical lower estimate of the modulus of regularity
///   delta_f(eps) = sup over segments [x, y] of |{|f| <= eps sup_[x,y] |f|}| / |[x, y]|.
/// On each segment, the sublevel fraction counts grid cells whose two end
/// points lie below eps times the grid maximum. Besides `random_segments`
/// uniform segments in the box, designed segments are always included:
/// [-eps y, y] and [-y, y] through the origin along axes and diagonals, and
/// axis segments from the lower corner of every length on a 64-step ladder.
inline DeltaEstimate estimate_delta(const ScalarField& f, double epsilon, int random_segments, int grid,
                                    const Point& box_lo, const Point& box_hi, std::uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (random_segments < 0 || grid < 2) throw std::invalid_argument("need segments >= 0 and grid >= 2");
  const std::size_t n = box_lo.size();
  if (box_hi.size() != n || n == 0) throw std::invalid_argument("box corners must share a positive dimension");

  std::vector<std::pair<Point, Point>> segments;
  const bool origin_inside = [&] {
    for (std::size_t d = 0; d < n; ++d) {
      if (!(box_lo[d] <= 0.0 && box_hi[d] >= 0.0)) return false;
    }
    return true;
  }();
  if (origin_inside) {
    std::vector<Point> directions;
    for (std::size_t d = 0; d < n; ++d) {
      Point e(n, 0.0);
      e[d] = 1.0;
      directions.push_back(e);
      e[d] = -1.0;
      directions.push_back(e);
    }
    directions.push_back(Point(n, 1.0));
    directions.push_back(Point(n, -1.0));
    for (const auto& e : directions) {
      // Longest multiple r e inside the box with -r e inside too.
      double r = std::numeric_limits<double>::infinity();
      for (std::size_t d = 0; d < n; ++d) {
        if (e[d] > 0) r = std::min({r, box_hi[d] / e[d], -box_lo[d] / e[d]});
        if (e[d] < 0) r = std::min({r, box_lo[d] / e[d], -box_hi[d] / e[d]});
      }
      if (!(r > 0.0) || !std::isfinite(r)) continue;
      Point y(n), minus_y(n), minus_eps_y(n);
      for (std::size_t d = 0; d < n; ++d) {
        y[d] = r * e[d];
        minus_y[d] = -y[d];
        minus_eps_y[d] = -epsilon * y[d];
      }
      segments.push_back({minus_eps_y, y});
      segments.push_back({minus_y, y});
    }
  }
  constexpr int ladder = 64;
  for (std::size_t d = 0; d < n; ++d) {
    for (int k = 1; k <= ladder; ++k) {
      Point b = box_lo;
      b[d] = box_lo[d] + (box_hi[d] - box_lo[d]) * k / ladder;
      segments.push_back({box_lo, b});
    }
  }
  const std::size_t designed = segments.size();
  segments.resize(designed + static_cast<std::size_t>(random_segments));
  for (int k = 0; k < random_segments; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    Point a(n), b(n);
    for (std::size_t d = 0; d < n; ++d) {
      a[d] = uniform(rng, box_lo[d], box_hi[d]);
      b[d] = uniform(rng, box_lo[d], box_hi[d]);
    }
    segments[designed + static_cast<std::size_t>(k)] = {a, b};
  }

  std::vector<double> fraction(segments.size(), 0.0);
  parallel_for(segments.size(), [&](std::size_t i) {
    const auto& [a, b] = segments[i];
    std::vector<double> values(static_cast<std::size_t>(grid) + 1);
    double top = 0.0;
    for (int k = 0; k <= grid; ++k) {
      values[static_cast<std::size_t>(k)] = std::abs(f(detail::along(a, b, static_cast<double>(k) / grid)));
      top = std::max(top, values[static_cast<std::size_t>(k)]);
    }
    if (!(top > 0.0)) return;  // |f| = 0 on the grid: no information
    const double level = epsilon * top;
    int cells = 0;
    for (int k = 0; k < grid; ++k) {
      cells += values[static_cast<std::size_t>(k)] <= level && values[static_cast<std::size_t>(k) + 1] <= level;
    }
    fraction[i] = static_cast<double>(cells) / grid;
  });
  const auto it = std::max_element(fraction.begin(), fraction.end());
  DeltaEstimate out;
  out.value = *it;
  out.from = segments[static_cast<std::size_t>(it - fraction.begin())].first;
  out.to = segments[static_cast<std::size_t>(it - fraction.begin())].second;
  return out;
}

inline DeltaEstimate estimate_delta(const PolynomialMap& P, const Seminorm& norm, double epsilon,
                                    int random_segments, int grid, const Point& box_lo, const Point& box_hi,
                                    std::uint64_t seed) {
  return estimate_delta([&](const Point& x) { return eval_f(P, norm, x); }, epsilon, random_segments, grid, box_lo,
                        box_hi, seed);
}

/// On `probes` random lines through [-1, 1]^n, with window lambda in [-1, 2]:
///  * sublevel dilation: {f < c}_t within {f < c T_d(t)} at grid points of
///    the dilated set (10^4 per line);
///  * the interval form of the same Remez function u(tau) = T_d(2 tau - 1):
///    sup_I f <= T_d(t) sup_J f for a random J within I, |I| < ((t+1)/2)|J|.
/// gap is the smallest relative slack (bound - value) / bound seen.
inline CheckReport fact2_propuf_check(const PolynomialMap& P, const Seminorm& norm, double c, double t, int probes,
                                      std::uint64_t seed) {
  if (!(c > 0.0)) throw std::invalid_argument("level c must be positive");
  if (!(t > 1.0)) throw std::invalid_argument("dilation parameter t must be > 1");
  if (probes < 1) throw std::invalid_argument("need at least one probe");
  const int d = P.degree();
  const double growth = chebyshev(d, t);
  const double bound = c * growth;
  const std::size_t n = static_cast<std::size_t>(P.inputs());
  constexpr int grid = 10000;
  constexpr double lo = -1.0, hi = 2.0;

  struct ProbeResult {
    bool skipped = false;
    double dilation_slack = 1.0;
    double interval_slack = 1.0;
  };
  std::vector<ProbeResult> results(static_cast<std::size_t>(probes));
  parallel_for(results.size(), [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    Point a(n), b(n);
    for (std::size_t k = 0; k < n; ++k) {
      a[k] = uniform(rng, -1.0, 1.0);
      b[k] = uniform(rng, -1.0, 1.0);
    }
    const auto g = [&](double lambda) { return eval_f(P, norm, detail::along(a, b, lambda)); };
    auto& out = results[i];
    const auto sub = detail::sublevel_on_window(g, c, lo, hi, grid);
    if (!sub) {
      out.skipped = true;
      return;
    }
    if (!sub->empty()) {
      const IntervalSet dilated = dilate_exact(*sub, t);
      const double total = dilated.measure();
      for (const auto& comp : dilated.components()) {
        const int m = std::max(8, static_cast<int>(grid * comp.length() / total));
        for (int k = 0; k < m; ++k) {
          const double lambda = comp.lo + (k + 0.5) * comp.length() / m;
          out.dilation_slack = std::min(out.dilation_slack, (bound - g(lambda)) / bound);
        }
      }
    }
    // Interval form: J within I with |I| < tau |J|.
    const double tau = 0.5 * (t + 1.0);
    double i_lo = uniform(rng, lo, hi), i_hi = uniform(rng, lo, hi);
    if (i_lo > i_hi) std::swap(i_lo, i_hi);
    if (i_hi - i_lo < 1e-3) return;
    const double j_len = (i_hi - i_lo) * uniform(rng, 1.0 / tau, 1.0) * (1.0 + 1e-9);
    const double j_lo = i_lo + uniform01(rng) * std::max(0.0, (i_hi - i_lo) - j_len);
    const double j_hi = std::min(i_hi, j_lo + j_len);
    const double sup_i = detail::sup_on_interval(g, i_lo, i_hi);
    const double sup_j = detail::sup_on_interval(g, j_lo, j_hi);
    const double remez_bound = growth * sup_j;
    if (remez_bound > 0.0) out.interval_slack = (remez_bound - sup_i) / remez_bound;
  });

  CheckReport r;
  r.check_name = "fact2_propuf";
  r.anchor = "polynomial_sublevel_dilation";
  r.tolerance = 1e-9;
  double worst_dilation = 1.0, worst_interval = 1.0;
  int skipped = 0;
  for (const auto& p : results) {
    skipped += p.skipped;
    if (p.skipped) continue;
    worst_dilation = std::min(worst_dilation, p.dilation_slack);
    worst_interval = std::min(worst_interval, p.interval_slack);
  }
  r.parameters = {{"degree", static_cast<double>(d)}, {"c", c},          {"t", t},
                  {"probes", static_cast<double>(probes)}, {"skipped", static_cast<double>(skipped)},
                  {"dilationSlack", worst_dilation},       {"intervalSlack", worst_interval}};
  r.settle(std::min(worst_dilation, worst_interval), 0.0);
  if (skipped > 0) r.note = std::to_string(skipped) + " lines skipped: f not finite on the grid";
  return r;
}

struct RivlinShapiroResult {
  double alpha = 1.0;
  double sup_on_F = 0.0;
  double bound = 0.0;  // T_d(alpha_F(x)) sup_F ||P||
  double value = 0.0;  // ||P(x)||
  bool pass = true;
};

/// The extremal growth bound along the line origin + lambda direction:
/// ||P(x)|| <= T_d(alpha_F(x)) sup_F ||P||, F and x given in lambda units.
inline RivlinShapiroResult rivlin_shapiro(const PolynomialMap& P, const Seminorm& norm, const Point& origin,
                                          const Point& direction, const IntervalSet& F, double x) {
  if (F.empty()) throw std::invalid_argument("rivlin_shapiro needs a nonempty set F");
  Point end = origin;
  for (std::size_t k = 0; k < end.size(); ++k) end[k] += direction.at(k);
  const auto g = [&](double lambda) { return eval_f(P, norm, detail::along(origin, end, lambda)); };
  RivlinShapiroResult r;
  r.alpha = alpha_1d(F, x);
  r.sup_on_F = detail::sup_on_set(g, F);
  r.bound = chebyshev(P.degree(), r.alpha) * r.sup_on_F;
  r.value = g(x);
  r.pass = r.value <= r.bound * (1.0 + 1e-9) + 1e-300;
  return r;
}

/// For mu uniform on V (s = 1/n) and a region omega:
///   sup_V f <= T_d((1 + m^s)/(1 - m^s)) sup_omega f <= (4/(s mu(omega)))^d sup_omega f,
/// m = mu(omega^c). The middle factor is u(1/(1 - m^s)) for u(tau) = T_d(2 tau - 1);
/// the check also confirms u(1/(1 - m^s)) <= u(1/(s mu(omega))). mu(omega)
/// is taken at the low end of its 3-sigma interval, sups from `samples`
/// uniform points refined by compass search.
inline CheckReport multidim_remez_check(const PolynomialMap& P, const Seminorm& norm, const ConvexPolytope& V,
                                        const std::function<bool(const Point&)>& omega, std::size_t samples,
                                        std::uint64_t seed) {
  if (V.dimension() != P.inputs()) throw std::invalid_argument("body and polynomial dimensions differ");
  const int d = P.degree();
  const double s = 1.0 / V.dimension();
  const auto f = [&](const Point& x) { return eval_f(P, norm, x); };
  const auto inside_omega = mc_measure(V, omega, std::max<std::size_t>(samples, 1000), seed);

  CheckReport r;
  r.check_name = "multidim_remez";
  r.anchor = "multidimensional_remez";
  r.tolerance = 1e-9;
  const double mu_omega = std::max(0.0, inside_omega.estimate - 3.0 * inside_omega.stderr_);
  r.parameters = {{"degree", static_cast<double>(d)}, {"s", s}, {"muOmega", inside_omega.estimate},
                  {"muOmegaLow", mu_omega}};
  const double m = 1.0 - mu_omega;
  const double ms = std::pow(m, s);
  const double tau = 1.0 / (1.0 - ms);
  const double factor1 = chebyshev(d, 2.0 * tau - 1.0);
  const double factor2 = std::pow(4.0 / (s * mu_omega), d);
  if (!(mu_omega > 0.0) || !std::isfinite(factor1) || !std::isfinite(factor2) || ms >= 1.0) {
    r.mark(CheckStatus::not_applicable, "mu(omega) too small for a finite factor");
    return r;
  }

  // Sups: sample points, then polish the best few by compass search.
  Rng rng(derive_seed(seed, 0xA11CE));
  std::vector<Point> pts(samples);
  for (auto& p : pts) p = detail::uniform_point_in(V, rng);
  std::vector<Point> in_omega;
  for (const auto& p : pts) {
    if (omega(p)) in_omega.push_back(p);
  }
  for (const auto& v : V.vertices()) {
    pts.push_back(v);
    if (omega(v)) in_omega.push_back(v);
  }
  if (in_omega.empty()) {
    r.mark(CheckStatus::not_applicable, "no sample landed in omega");
    return r;
  }
  const auto [lo, hi] = V.bounding_box();
  double extent = 0.0;
  for (std::size_t k = 0; k < lo.size(); ++k) extent = std::max(extent, hi[k] - lo[k]);
  auto polished_sup = [&](const std::vector<Point>& cloud, const std::function<bool(const Point&)>& region) {
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t k = 0; k < cloud.size(); ++k) ranked.push_back({f(cloud[k]), k});
    const std::size_t keep = std::min<std::size_t>(8, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                      std::greater<>());
    double best = ranked.front().first;
    for (std::size_t k = 0; k < keep; ++k) {
      best = std::max(best, detail::climb(f, region, cloud[ranked[k].second], 0.01 * extent));
    }
    return best;
  };
  const auto in_V = [&](const Point& x) { return V.contains(x); };
  const double sup_V = polished_sup(pts, in_V);
  const double sup_omega = polished_sup(in_omega, [&](const Point& x) { return V.contains(x) && omega(x); });
  r.parameters["supV"] = sup_V;
  r.parameters["supOmega"] = sup_omega;
  r.parameters["factorRemez"] = factor1;
  r.parameters["factorPower"] = factor2;
  r.parameters["factorRemezLoose"] = chebyshev(d, 2.0 / (s * mu_omega) - 1.0);
  // Bound minus value, relative to the bound; the weakest link decides.
  const double remez_bound = factor1 * sup_omega;
  const double chain_slack = std::min((factor2 - factor1) / factor2,
                                      (r.parameters["factorRemezLoose"] - factor1) / r.parameters["factorRemezLoose"]);
  r.settle(remez_bound, sup_V);
  if (remez_bound > 0.0) r.gap = (remez_bound - sup_V) / remez_bound;
  r.gap = std::min(r.gap, chain_slack);
  r.pass = r.gap >= -r.tolerance;
  r.status = r.pass ? CheckStatus::pass : CheckStatus::fail;
  return r;
}

}  // namespace dilatrix

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dilatrix/dilatrix.hpp"

namespace {

using namespace dilatrix;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
};

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

/// Collects failures while keeping the first few messages.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checked_;
    if (ok) return;
    ++failed_;
    if (messages_.size() < 3) messages_.push_back(what);
  }
  [[nodiscard]] std::size_t failed() const noexcept { return failed_; }
  [[nodiscard]] std::size_t checked() const noexcept { return checked_; }
  [[nodiscard]] std::string messages() const {
    std::string out;
    for (const auto& m : messages_) out += "; " + m;
    return out;
  }

 private:
  std::size_t checked_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> messages_;
};

/// Up to `max_components` intervals whose lengths and gaps are at least
/// `min_length`, so the grid oracle resolves every feature.
IntervalSet random_interval_set(Rng& rng, int max_components, double min_length) {
  const int m = 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(max_components)));
  std::vector<Interval> raw;
  double cursor = uniform(rng, -5.0, 0.0);
  for (int k = 0; k < m; ++k) {
    const double lo = cursor + (k == 0 ? 0.0 : uniform(rng, min_length, 1.5));
    const double hi = lo + uniform(rng, min_length, 1.5);
    raw.push_back({lo, hi});
    cursor = hi;
  }
  return IntervalSet::normalize(std::move(raw));
}

// 1. Exact dilation against the grid oracle.
Outcome dilation_oracle() {
  constexpr double step = 1e-3;
  Tally tally;
  double worst_ratio = 0.0;
  for (std::uint64_t k = 0; k < 500; ++k) {
    Rng rng(derive_seed(101, k));
    const auto F = random_interval_set(rng, 8, 10.0 * step);
    const double t = 1.0 + 9.0 * (1.0 - uniform01(rng));  // (1, 10]
    const auto exact = dilate_exact(F, t);
    const double diff = symmetric_difference_measure(exact, dilate_grid_oracle(F, t, step));
    const double allowed = 4.0 * static_cast<double>(boundary_count(exact)) * step;
    worst_ratio = std::max(worst_ratio, diff / allowed);
    tally.expect(diff <= allowed, "instance " + std::to_string(k) + " diff " + fmt(diff));
  }
  return {tally.failed() == 0, std::to_string(tally.checked()) + " instances, worst diff/allowance " +
                                   fmt(worst_ratio) + tally.messages()};
}

// 2. Symmetric intervals dilate to (-t r, t r).
Outcome symmetric_dilation() {
  Tally tally;
  for (std::uint64_t k = 0; k < 100; ++k) {
    Rng rng(derive_seed(202, k));
    const double r = uniform(rng, 1e-3, 100.0);
    const double t = 1.0 + uniform(rng, 1e-6, 20.0);
    const auto got = dilate_exact(IntervalSet::normalize({{-r, r}}), t);
    tally.expect(got == IntervalSet::normalize({{-t * r, t * r}}, Topology::open),
                 "r=" + fmt(r) + " t=" + fmt(t));
  }
  const auto unit = dilate_exact(IntervalSet::normalize({{0.0, 1.0}}), 3.0);
  tally.expect(unit == IntervalSet::normalize({{-1.0, 2.0}}, Topology::open), "[0,1] at t=3");
  return {tally.failed() == 0, std::to_string(tally.checked()) + " exact comparisons" + tally.messages()};
}

// 3. Zero gap on the equality family.
Outcome equality_case() {
  Tally tally;
  double worst = 0.0;
  double worst_log_concave = 0.0;
  for (double s : {-2.0, -1.0, -0.5, 0.0, 0.25, 0.5, 1.0}) {
    for (int i = 0; i < 10; ++i) {
      const double t = 1.1 + i;
      const double floor_a = std::max(-s, s * t);
      for (int j = 0; j < 10; ++j) {
        const double a = floor_a + 0.2 * (j + 1);
        const auto r = equality_case_gap(s, a, t);
        const double gap = std::abs(r.gap);
        const double allowed = s == 0.0 ? 1e-12 : 1e-9;
        (s == 0.0 ? worst_log_concave : worst) = std::max(s == 0.0 ? worst_log_concave : worst, gap);
        tally.expect(gap <= allowed, "s=" + fmt(s) + " a=" + fmt(a) + " t=" + fmt(t) + " gap " + fmt(r.gap));
      }
    }
  }
  return {tally.failed() == 0, std::to_string(tally.checked()) + " instances, worst |gap| " + fmt(worst) +
                                   ", s=0 worst |gap| " + fmt(worst_log_concave) + tally.messages()};
}

// 4. Randomized sweep of the dilation inequality.
Outcome theorem1_sweep() {
  const auto reports = run_sweep(SweepFamily::theorem1, 10000, 0, 1e-9);
  ReportSummary summary;
  for (std::size_t k = 0; k < reports.size(); ++k) summary.add(reports[k], k);
  const double vacuous_share = static_cast<double>(summary.vacuous) / static_cast<double>(summary.total);
  const bool ok = summary.all_passed() && vacuous_share < 0.2;
  return {ok, std::to_string(summary.total - summary.passed) + " failures in " + std::to_string(summary.total) +
                  ", vacuous share " + fmt(vacuous_share) + ", worst gap " + fmt(summary.worst_gap)};
}

// 5. The dilation bound dominates Guedon's, which dominates Borell's.
Outcome strength_chain() {
  Tally tally;
  std::uint64_t k = 0;
  while (tally.checked() < 1000) {
    Rng rng(derive_seed(505, k++));
    const auto mu = random_density(rng, random_s(rng));
    const auto K = random_subset(mu, rng, 1);
    const double t = random_t(rng);
    const auto borell = classical_check(mu, K, t, ClassicalVariant::borell);
    const auto guedon = classical_check(mu, K, t, ClassicalVariant::guedon);
    if (borell.status != CheckStatus::pass || guedon.status != CheckStatus::pass) continue;
    const double main_rhs = guedon.parameters.at("theorem1_rhs");
    tally.expect(main_rhs >= guedon.rhs && guedon.rhs >= borell.rhs - 1e-12,
                 "instance " + std::to_string(k - 1) + ": " + fmt(main_rhs) + ", " + fmt(guedon.rhs) + ", " +
                     fmt(borell.rhs));
  }
  return {tally.failed() == 0, std::to_string(tally.checked()) + " instances with both hypotheses" +
                                   tally.messages()};
}

// 6. The extremal search reaches the theoretical maximum of mu(F).
Outcome extremal_sharpness() {
  struct Target {
    double s, theta, t;
  };
  const Target targets[] = {{-1.0, 2.0 / 7.0, 1.5}, {0.0, std::exp(-2.0), 3.0}, {0.5, 1.0 / 9.0, 1.8}};
  Tally tally;
  std::string detail;
  for (const auto& [s, theta, t] : targets) {
    const double lambda = 2.0 / (t + 1.0);
    const double bound = s == 0.0 ? 1.0 - std::pow(theta, lambda)
                                  : 1.0 - std::pow(lambda * std::pow(theta, s) + (1.0 - lambda), 1.0 / s);
    const auto res = extremal_search(s, theta, t, 0);
    const double found = res.best.mu_F;
    detail += (detail.empty() ? "" : ", ") + std::string("s=") + fmt(s) + ": shortfall " + fmt(bound - found);
    tally.expect(std::abs(found - bound) <= 1e-3 && found <= bound + 1e-6,
                 "s=" + fmt(s) + " found " + fmt(found) + " vs " + fmt(bound));
  }
  return {tally.failed() == 0, detail + tally.messages()};
}

// 7. Sublevel dilation for random polynomial maps, Chebyshev inversion and
// extremality of T_d.
Outcome remez_suite() {
  Tally tally;
  const auto reports = run_sweep(SweepFamily::fact2, 200, 7);
  std::size_t violations = 0;
  for (const auto& r : reports) violations += r.pass ? 0 : 1;
  tally.expect(violations == 0, std::to_string(violations) + " sublevel inclusion violations");

  double worst_round_trip = 0.0;
  for (int d = 1; d <= 8; ++d) {
    for (int i = 0; i <= 100; ++i) {
      const double x = 1.0 + 0.09 * i;
      const double back = chebyshev_inverse(d, chebyshev(d, x));
      worst_round_trip = std::max(worst_round_trip, std::abs(back - x) / x);
    }
  }
  tally.expect(worst_round_trip <= 1e-10, "round trip error " + fmt(worst_round_trip));

  double worst_rivlin = 0.0;
  for (int d = 1; d <= 4; ++d) {
    for (double x : {1.5, 2.0, 3.0}) {
      const auto rs = rivlin_shapiro(chebyshev_map(d), Seminorm::sup_norm(), {0.0}, {1.0},
                                     IntervalSet::normalize({{-1.0, 1.0}}), x);
      const double err = std::abs(rs.value - rs.bound) / std::max(1.0, rs.bound);
      worst_rivlin = std::max(worst_rivlin, err);
      tally.expect(err <= 1e-9, "T_" + std::to_string(d) + " at " + fmt(x));
    }
  }
  return {tally.failed() == 0, std::to_string(reports.size()) + " polynomial maps, round trip " +
                                   fmt(worst_round_trip) + ", Rivlin-Shapiro " + fmt(worst_rivlin) +
                                   tally.messages()};
}

// 8. Estimated modulus of regularity against the closed forms.
Outcome delta_bounds() {
  constexpr int grid = 1000;
  Tally tally;
  for (int i = 1; i <= 9; ++i) {
    const double eps = 0.1 * i;
    const double exact = 2.0 * eps / (eps + 1.0);
    const auto est = estimate_delta(univariate({0.0, 1.0}), Seminorm::sup_norm(), eps, 100, grid, {-1.0}, {1.0}, i);
    tally.expect(est.value >= exact - 2.0 / grid && est.value <= exact,
                 "gauge eps=" + fmt(eps) + " estimate " + fmt(est.value));
  }
  static const Seminorm norms[] = {Seminorm::sup_norm(), Seminorm::l1_norm(), Seminorm::l2_norm()};
  for (std::uint64_t k = 0; k < 60; ++k) {
    Rng rng(derive_seed(808, k));
    const int n = 1 + static_cast<int>(uniform_index(rng, 2));
    const auto P = random_polynomial_map(rng, n, 1 + static_cast<int>(uniform_index(rng, 4)),
                                         1 + static_cast<int>(uniform_index(rng, 2)));
    if (P.degree() < 1) continue;
    const double eps = uniform(rng, 0.05, 0.95);
    const auto est = estimate_delta(P, norms[k % 3], eps, 20, grid, Point(static_cast<std::size_t>(n), -1.0),
                                    Point(static_cast<std::size_t>(n), 1.0), k);
    const double bound = 2.0 / (chebyshev_inverse(P.degree(), 1.0 / eps) + 1.0) + 2.0 / grid;
    tally.expect(est.value <= bound, "polynomial " + std::to_string(k) + " estimate " + fmt(est.value));
  }
  for (const auto& profile : {gauge_profile(), polynomial_profile(1), polynomial_profile(2), polynomial_profile(3),
                              polynomial_profile(5)}) {
    const auto r = profile_chain_check(profile, 100);
    tally.expect(r.pass, "profile chain " + to_string(profile));
  }
  return {tally.failed() == 0, std::to_string(tally.checked()) + " comparisons" + tally.messages()};
}

// 9. Deviation inequalities.
Outcome deviations() {
  Tally tally;
  std::string detail;

  // Small ball for |x| under the uniform measure on [-1, 1]: the measure of
  // {|x| <= M eps} is compared with the bound A_f c_s eps for equality.
  const auto uniform_mu = uniform_density(-1.0, 1.0);
  const Gauge1D abs_x{};
  double worst_equality = 0.0;
  double worst_oracle = 0.0;
  bool bound_holds = true;
  for (int i = 1; i <= 20; ++i) {
    const double eps = 0.05 * i;
    const auto r = small_dev_neg_khintchine(uniform_mu, abs_x, gauge_profile(), eps, -0.5);
    const double ball = r.parameters.at("smallBall");
    const double bound = r.parameters.at("smallBallBound");
    worst_oracle = std::max(worst_oracle, std::abs(ball - 0.5 * eps));
    worst_equality = std::max(worst_equality, std::abs(ball - bound));
    bound_holds = bound_holds && ball <= bound;
  }
  tally.expect(worst_oracle <= 1e-12, "small ball differs from eps/2 by " + fmt(worst_oracle));
  tally.expect(worst_equality <= 1e-12, "small ball vs bound: max |mu - bound| " + fmt(worst_equality) +
                                            " (mu = eps/2, bound = eps, bound holds: " +
                                            (bound_holds ? "yes" : "no") + ")");
  detail += "small-ball equality max diff " + fmt(worst_equality);

  // Exponential measure, s = 0: tail 4^-t under the bound 2^-t.
  const auto expo = exponential_density(1.0, 0.0);
  double worst_tail = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double t = 1.0 + 0.1 * (i + 1);
    const auto r = large_dev_pos_khintchine(expo, abs_x, gauge_profile(), t, 2.0);
    const double tail = r.parameters.at("tail");
    worst_tail = std::max(worst_tail, std::abs(tail - std::pow(4.0, -t)) / std::pow(4.0, -t));
    tally.expect(tail <= std::pow(2.0, -t) && std::abs(tail_bounds(0.0, t).front() - std::pow(2.0, -t)) <=
                                                  1e-12 * std::pow(2.0, -t),
                 "exponential tail at t=" + fmt(t));
  }
  tally.expect(worst_tail <= 1e-9, "exponential tail differs from 4^-t by " + fmt(worst_tail));

  // Chain orderings on 200-point grids.
  std::size_t chain_breaks = 0;
  for (int si = 0; si < 200; ++si) {
    const double s_pos = (si + 1) / 200.0;
    const double s_neg = -3.0 * (si + 1) / 200.0;
    for (int ti = 0; ti < 200; ++ti) {
      const double t = 1.0 + 0.1 * (ti + 1);
      for (double s : {s_pos, s_neg}) {
        const auto chain = tail_bounds(s, t);
        for (std::size_t k = 1; k < chain.size(); ++k) chain_breaks += chain[k - 1] <= chain[k] * (1.0 + 1e-12) ? 0 : 1;
      }
    }
  }
  tally.expect(chain_breaks == 0, std::to_string(chain_breaks) + " chain order breaks");

  // Randomized function-level instances.
  std::size_t random_failures = 0;
  std::size_t random_total = 0;
  for (auto family : {SweepFamily::small_deviation, SweepFamily::large_deviation}) {
    for (const auto& r : run_sweep(family, 1000, 9)) {
      ++random_total;
      random_failures += r.pass ? 0 : 1;
    }
  }
  tally.expect(random_failures == 0, std::to_string(random_failures) + " randomized domination failures");
  detail += ", exponential tail rel err " + fmt(worst_tail) + ", " + std::to_string(chain_breaks) +
            " chain breaks, " + std::to_string(random_failures) + "/" + std::to_string(random_total) +
            " randomized failures";
  return {tally.failed() == 0, detail + tally.messages()};
}

// 10. Function-level reconstruction of the set inequality, and the nD code
// restricted to one dimension against the interval code.
Outcome cross_module() {
  Tally tally;
  double worst_mismatch = 0.0;
  for (const auto& r : run_sweep(SweepFamily::reconstruction, 100, 10)) {
    worst_mismatch = std::max(worst_mismatch, r.parameters.at("mismatch"));
    tally.expect(r.pass, "reconstruction instance " + fmt(r.parameters.at("instance")));
  }
  for (std::uint64_t k = 0; k < 200; ++k) {
    Rng rng(derive_seed(1010, k));
    double a = uniform(rng, -5.0, 5.0);
    double b = uniform(rng, -5.0, 5.0);
    if (a > b) std::swap(a, b);
    const double t = random_t(rng);
    const double x = uniform(rng, -60.0, 60.0);
    const ConvexPolytope K(1, {{a}, {b}});
    const auto F = IntervalSet::normalize({{a, b}});
    const auto Ft = dilate_exact(F, t);
    const auto Kt = minkowski_dilate(K, t).as_interval();
    tally.expect(Kt.lo == Ft.components().front().lo && Kt.hi == Ft.components().front().hi,
                 "dilation of [" + fmt(a) + ", " + fmt(b) + "]");
    tally.expect(alpha_convex(K, {x}).value == alpha_1d(F, x), "alpha at " + fmt(x));
    tally.expect(membership(K, t, {x}) == Ft.contains(x), "membership at " + fmt(x));
  }
  return {tally.failed() == 0, "worst reconstruction mismatch " + fmt(worst_mismatch) + ", " +
                                   std::to_string(tally.checked()) + " comparisons" + tally.messages()};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "dilation_oracle_equivalence", dilation_oracle},
      {2, "symmetric_interval_dilation", symmetric_dilation},
      {3, "equality_case", equality_case},
      {4, "theorem1_sweep", theorem1_sweep},
      {5, "strength_chain", strength_chain},
      {6, "extremal_sharpness", extremal_sharpness},
      {7, "remez_suite", remez_suite},
      {8, "delta_bounds", delta_bounds},
      {9, "deviations", deviations},
      {10, "cross_module_consistency", cross_module},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.pass ? 0 : 1;
    std::printf("%s %d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(),
                seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

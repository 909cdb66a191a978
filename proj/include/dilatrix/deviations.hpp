#pragma once

// Function-level consequences of the dilation inequality: level-set
// comparisons for functions with a known Remez profile, small- and
// large-deviation bounds, Khintchine-type moment comparisons and tables of
// the bound curves.
//
// Every check takes the concavity exponent to assume from DeviationOptions;
// it defaults to mu.s() and may be any s <= mu.s(), since an s-concave
// measure is s'-concave for every s' <= s.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dilatrix/check_report.hpp"
#include "dilatrix/chebyshev.hpp"
#include "dilatrix/density.hpp"
#include "dilatrix/dilation.hpp"
#include "dilatrix/functions1d.hpp"
#include "dilatrix/measures.hpp"
#include "dilatrix/verifier.hpp"

namespace dilatrix {

struct DeviationConstants {
  double s = 0.0;
  double c_s = 0.0;
  std::optional<double> d_s;  // only for s < 0
};

/// c_s = (1 - 2^{-s})/s with c_0 = ln 2, and d_s = (2^{-s} - 1)^{1/s} for s < 0.
inline DeviationConstants constants(double s) {
  if (!(s <= 1.0)) throw std::invalid_argument("concavity exponent must be <= 1");
  DeviationConstants c;
  c.s = s;
  const double ln2 = std::log(2.0);
  c.c_s = s == 0.0 ? ln2 : -std::expm1(-s * ln2) / s;
  if (s < 0.0) c.d_s = std::exp(std::log(std::expm1(-s * ln2)) / s);
  return c;
}

/// Euler Beta function B(p, q) = Gamma(p) Gamma(q) / Gamma(p + q).
inline double beta_gamma(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) throw std::invalid_argument("Beta arguments must be > 0");
  return std::exp(std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q));
}

/// Chebyshev degree d_f, constant A_f (u_f(t) <= (A_f t)^{d_f}) and the
/// median M_f of |f|^{1/d_f} under a given measure.
struct ChebyshevDegreeProfile {
  double d_f = 1.0;
  double A_f = 2.0;
  double M_f = 0.0;
};

template <Density1D D, ScalarFunction1D F>
ChebyshevDegreeProfile chebyshev_degree_profile(const D& mu, const F& f, const RemezProfile& profile) {
  ChebyshevDegreeProfile c;
  c.d_f = profile.chebyshev_degree();
  c.A_f = profile.chebyshev_constant();
  c.M_f = quantile_median(mu, PowerOf<F>{f, 1.0 / c.d_f}, 0.5);
  return c;
}

struct DeviationOptions {
  std::optional<double> s;  // assumed concavity exponent, <= mu.s()
  double tolerance = 1e-9;
};

namespace detail {

template <Density1D D>
double assumed_exponent(const D& mu, const DeviationOptions& opt) {
  const double s = opt.s.value_or(mu.s());
  if (!(s <= mu.s())) throw std::invalid_argument("assumed exponent must not exceed the measure's exponent");
  return s;
}

/// mu({|f| >= y}).
template <Density1D D, ScalarFunction1D F>
double at_least_measure(const D& mu, const F& f, double y) {
  if (y <= 0.0) return 1.0;
  return superlevel_measure(mu, f, std::nextafter(y, 0.0));
}

/// (1 - m^s)/s, or log(1/m) for s = 0; m in (0, 1].
inline double log_s_deficit(double m, double s) {
  if (s == 0.0) return -std::log(m);
  return -std::expm1(s * std::log(m)) / s;
}

/// Collects the inequalities "larger >= smaller" of one check and reports the
/// tightest. Slack is relative to max(1, |larger|), so probabilities compare
/// absolutely and large moments relatively.
class SlackLedger {
 public:
  void require(const std::string& name, double larger, double smaller) {
    const double slack = (larger - smaller) / std::max(1.0, std::abs(larger));
    if (!have_ || slack < worst_) {
      have_ = true;
      worst_ = slack;
      worst_name_ = name;
      larger_ = larger;
      smaller_ = smaller;
    }
  }

  [[nodiscard]] bool empty() const noexcept { return !have_; }

  void settle(CheckReport& r) const {
    r.lhs = larger_;
    r.rhs = smaller_;
    r.gap = worst_;
    r.pass = worst_ >= -r.tolerance;
    r.status = r.pass ? CheckStatus::pass : CheckStatus::fail;
    r.note = "tightest: " + worst_name_;
  }

 private:
  bool have_ = false;
  double worst_ = 0.0;
  std::string worst_name_;
  double larger_ = 0.0;
  double smaller_ = 0.0;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Level-set comparisons.

/// mu(|f| > lambda) >= s_mean(mu(|f| > lambda u), 1, 1/t, s) where u = u_f(t)
/// is a value of a Remez function of f at t. For s = 0 this is the power form
/// mu(|f| > lambda u) <= mu(|f| > lambda)^t, whose two sides are recorded as
/// powerFormLhs/powerFormRhs. Not applicable when mu(|f| >= lambda u) = 0;
/// vacuous for s > 0 when mu(|f| > lambda u) = 0.
template <Density1D D, ScalarFunction1D F>
CheckReport theorem2_check(const D& mu, const F& f, double remez_value, double lambda, double t,
                           const DeviationOptions& opt = {}) {
  if (!(t > 1.0)) throw std::invalid_argument("t must be > 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  if (!(remez_value >= 1.0)) throw std::invalid_argument("Remez function values are >= 1");
  const double s = detail::assumed_exponent(mu, opt);
  CheckReport r;
  r.check_name = "theorem2";
  r.anchor = "remez_function_level_sets";
  r.tolerance = opt.tolerance;
  r.parameters = {{"s", s}, {"t", t}, {"lambda", lambda}, {"u", remez_value}};
  if (detail::at_least_measure(mu, f, lambda * remez_value) == 0.0) {
    r.mark(CheckStatus::not_applicable, "mu(|f| >= lambda u_f(t)) = 0");
    return r;
  }
  const double above = superlevel_measure(mu, f, lambda);
  const double far = superlevel_measure(mu, f, lambda * remez_value);
  r.parameters["muAbove"] = above;
  r.parameters["muFar"] = far;
  if (s == 0.0) {
    r.parameters["powerFormLhs"] = far;
    r.parameters["powerFormRhs"] = std::pow(above, t);
  }
  r.settle(above, s_mean(far, 1.0, 1.0 / t, s));
  if (s > 0.0 && far == 0.0) r.mark(CheckStatus::vacuous, "mu(|f| > lambda u_f(t)) = 0");
  return r;
}

template <Density1D D, ScalarFunction1D F>
CheckReport theorem2_check(const D& mu, const F& f, const RemezProfile& profile, double lambda, double t,
                           const DeviationOptions& opt = {}) {
  CheckReport r = theorem2_check(mu, f, profile.remez(t), lambda, t, opt);
  r.parameters["degree"] = profile.chebyshev_degree();
  return r;
}

/// Rebuilds the set inequality from the function-level one: for F and u > 1,
/// the function equal to 1 on F, 2 on F_u \ F and 4 elsewhere has Remez value
/// 2 at t = (u + 1)/2, and theorem2_check at lambda = 1 evaluates exactly the
/// two sides of theorem1_check(mu, F, u). The report carries both and fails
/// when they differ by more than `agreement` or either check fails.
template <Density1D D>
CheckReport theorem2_reconstruction(const D& mu, const IntervalSet& F, double u, double agreement = 1e-9) {
  if (!(u > 1.0)) throw std::invalid_argument("dilation parameter must be > 1");
  const CheckReport set_level = theorem1_check(mu, F, u);
  const StepFunction1D f{{{1.0, F}, {2.0, dilate_exact(F, u)}}, 4.0};
  const CheckReport fn_level = theorem2_check(mu, f, 2.0, 1.0, 0.5 * (u + 1.0));

  CheckReport r;
  r.check_name = "theorem2_reconstruction";
  r.anchor = "remez_function_level_sets";
  r.tolerance = agreement;
  r.parameters = {{"s", mu.s()},
                  {"u", u},
                  {"theorem1Lhs", set_level.lhs},
                  {"theorem1Rhs", set_level.rhs},
                  {"theorem2Lhs", fn_level.lhs},
                  {"theorem2Rhs", fn_level.rhs}};
  if (set_level.status != CheckStatus::pass || fn_level.status != CheckStatus::pass) {
    // Both sides still evaluate; only the inequality is void.
    r.parameters["theorem1Rhs"] = dilation_lower_bound(set_level.parameters.at("muFtc"), u, mu.s());
  }
  const double mismatch = std::max(std::abs(set_level.lhs - fn_level.lhs),
                                   std::abs(r.parameters["theorem1Rhs"] - fn_level.rhs));
  r.parameters["mismatch"] = mismatch;
  r.lhs = agreement;
  r.rhs = mismatch;
  r.gap = agreement - mismatch;
  r.pass = mismatch <= agreement && set_level.pass && fn_level.pass;
  r.status = r.pass ? CheckStatus::pass : CheckStatus::fail;
  if (!r.pass) r.note = mismatch > agreement ? "set and function forms disagree" : "inequality violated";
  return r;
}

/// mu(|f| >= lambda eps) >= s_mean(mu(|f| >= lambda), 1, delta_f(eps), s),
/// with delta_f the closed-form modulus of regularity of the profile.
/// Not applicable when lambda is not below the essential supremum of |f|.
template <Density1D D, ScalarFunction1D F>
CheckReport corollary6_check(const D& mu, const F& f, const RemezProfile& profile, double lambda, double eps,
                             const DeviationOptions& opt = {}) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  const double delta = profile.modulus(eps);
  const double s = detail::assumed_exponent(mu, opt);
  CheckReport r;
  r.check_name = "corollary6";
  r.anchor = "modulus_of_regularity_level_sets";
  r.tolerance = opt.tolerance;
  r.parameters = {{"s", s}, {"lambda", lambda}, {"eps", eps}, {"delta", delta}};
  if (superlevel_measure(mu, f, lambda) == 0.0) {
    r.mark(CheckStatus::not_applicable, "lambda >= ess sup |f|");
    return r;
  }
  const double near = detail::at_least_measure(mu, f, lambda * eps);
  const double top = detail::at_least_measure(mu, f, lambda);
  r.parameters["muTop"] = top;
  r.settle(near, s_mean(top, 1.0, delta, s));
  return r;
}

// ---------------------------------------------------------------------------
// Small deviations and negative moments.

/// With g = |f|^{1/d_f} and M its median:
///   small ball       mu(g <= M eps) <= A_f c_s eps
///   level sets       mu(|f| <= M^d eps^d) <= delta_f(eps^d) (1 - mu(|f| >= M^d)^s)/s
///   negative moment  ||g||_q >= M (1 - q A_f c_s/(q+1))^{1/q} >= M exp(-A_f c_s/(q+1))
/// The moment comparison is skipped (and flagged) when the moment diverges;
/// a divergent negative moment is 0, which no positive bound can sit under,
/// but it signals a measure or function outside the numerical model.
template <Density1D D, ScalarFunction1D F>
CheckReport small_dev_neg_khintchine(const D& mu, const F& f, const RemezProfile& profile, double eps, double q,
                                     const DeviationOptions& opt = {}) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (!(q > -1.0 && q < 0.0)) throw std::invalid_argument("negative exponent q must lie in (-1, 0)");
  const double s = detail::assumed_exponent(mu, opt);
  const auto cheb = chebyshev_degree_profile(mu, f, profile);
  const PowerOf<F> g{f, 1.0 / cheb.d_f};
  const double c_s = constants(s).c_s;
  const double M = cheb.M_f;

  CheckReport r;
  r.check_name = "small_deviation";
  r.anchor = "small_deviation_negative_moment";
  r.tolerance = opt.tolerance;
  r.parameters = {{"s", s}, {"eps", eps}, {"q", q}, {"d_f", cheb.d_f}, {"A_f", cheb.A_f}, {"M_f", M}, {"c_s", c_s}};
  detail::SlackLedger ledger;

  const double small_ball = sublevel_measure(mu, g, M * eps);
  const double small_ball_bound = cheb.A_f * c_s * eps;
  r.parameters["smallBall"] = small_ball;
  r.parameters["smallBallBound"] = small_ball_bound;
  ledger.require("small ball", small_ball_bound, small_ball);

  const double lambda = std::pow(M, cheb.d_f);
  const double eps_f = std::pow(eps, cheb.d_f);
  const double top = detail::at_least_measure(mu, f, lambda);
  if (lambda > 0.0 && top > 0.0) {
    const double level = sublevel_measure(mu, f, lambda * eps_f);
    const double level_bound = profile.modulus(eps_f) * detail::log_s_deficit(top, s);
    r.parameters["levelSet"] = level;
    r.parameters["levelSetBound"] = level_bound;
    ledger.require("level sets", level_bound, level);
  }

  const double inner = 1.0 - q * cheb.A_f * c_s / (q + 1.0);
  const double moment_bound = M * std::pow(inner, 1.0 / q);
  const double moment_bound_exp = M * std::exp(-cheb.A_f * c_s / (q + 1.0));
  r.parameters["momentBound"] = moment_bound;
  r.parameters["momentBoundExp"] = moment_bound_exp;
  ledger.require("moment bound chain", moment_bound, moment_bound_exp);
  const MomentResult moment = lp_moment(mu, g, q);
  r.parameters["moment"] = moment.value;
  r.parameters["momentFinite"] = moment.finite ? 1.0 : 0.0;
  r.parameters["momentIllConditioned"] = moment.ill_conditioned ? 1.0 : 0.0;
  if (moment.finite) ledger.require("negative moment", moment.value, moment_bound);

  ledger.settle(r);
  if (!moment.finite) r.note += "; negative moment diverges";
  return r;
}

// ---------------------------------------------------------------------------
// Large deviations and positive moments.

/// Tail bounds for mu(g >= A_f M t), g = |f|^{1/d_f}, t > 1. For 0 <= s <= 1
/// the entries are (1 - s c_s t)_+^{1/s}, e^{-c_s t}, e^{-t/2} (the first two
/// coincide at s = 0); for s < 0 they are t^{1/s}(2^{-s} - 1 + 1/t)^{1/s} and
/// d_s t^{1/s}. Each entry dominates the previous one.
inline std::vector<double> tail_bounds(double s, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be > 0");
  const auto c = constants(s);
  if (s >= 0.0) {
    const double decay = std::exp(-c.c_s * t);
    const double first = s == 0.0 ? decay : std::pow(std::max(0.0, 1.0 - s * c.c_s * t), 1.0 / s);
    return {first, decay, std::exp(-0.5 * t)};
  }
  // Log domain: t^{1/s} and d_s under- and overflow separately as s -> 0.
  const double excess = std::expm1(-s * std::log(2.0));  // 2^{-s} - 1
  return {std::exp(std::log1p(t * excess) / s), std::exp((std::log(excess) + std::log(t)) / s)};
}

/// Bounds on ||g||_p / (A_f M). For 0 <= s <= 1:
///   (1 + p B(p, 1 + 1/s)/(s c_s)^p)^{1/p} <= (1 + 2^p Gamma(p + 1))^{1/p},
/// the first entry read as (1 + Gamma(p + 1)/c_0^p)^{1/p} at s = 0.
/// For s < 0 and 0 < p < -1/s: (1 + d_s p/(-1/s - p))^{1/p}; empty when the
/// moment is not controlled (p >= -1/s).
inline std::vector<double> moment_bounds(double s, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("moment exponent must be > 0");
  const auto c = constants(s);
  if (s >= 0.0) {
    double log_term;
    if (s == 0.0) {
      log_term = std::lgamma(p + 1.0) - p * std::log(c.c_s);
    } else {
      log_term = std::log(p) + std::lgamma(p) + std::lgamma(1.0 + 1.0 / s) - std::lgamma(p + 1.0 + 1.0 / s) -
                 p * std::log(s * c.c_s);
    }
    const double sharp = std::pow(1.0 + std::exp(log_term), 1.0 / p);
    const double simple = std::pow(1.0 + std::exp(p * std::log(2.0) + std::lgamma(p + 1.0)), 1.0 / p);
    return {sharp, simple};
  }
  if (p >= -1.0 / s) return {};
  return {std::pow(1.0 + *c.d_s * p / (-1.0 / s - p), 1.0 / p)};
}

/// With g = |f|^{1/d_f} and M its median, checks mu(g >= A_f M t) against
/// tail_bounds(s, t) and ||g||_p against A_f M moment_bounds(s, p), including
/// the ordering inside each chain. For s < 0 and p >= -1/s the moment is
/// not controlled: the report records whether it diverges (momentFinite) and
/// checks only the tail.
template <Density1D D, ScalarFunction1D F>
CheckReport large_dev_pos_khintchine(const D& mu, const F& f, const RemezProfile& profile, double t, double p,
                                     const DeviationOptions& opt = {}) {
  if (!(t > 1.0)) throw std::invalid_argument("t must be > 1");
  if (!(p > 0.0)) throw std::invalid_argument("moment exponent must be > 0");
  const double s = detail::assumed_exponent(mu, opt);
  const auto cheb = chebyshev_degree_profile(mu, f, profile);
  const PowerOf<F> g{f, 1.0 / cheb.d_f};
  const double scale = cheb.A_f * cheb.M_f;

  CheckReport r;
  r.check_name = s >= 0.0 ? "corollary9" : "corollary10";
  r.anchor = s >= 0.0 ? "large_deviation_nonnegative_s" : "large_deviation_negative_s";
  r.tolerance = opt.tolerance;
  r.parameters = {{"s", s}, {"t", t}, {"p", p}, {"d_f", cheb.d_f}, {"A_f", cheb.A_f}, {"M_f", cheb.M_f}};
  detail::SlackLedger ledger;

  const double tail = detail::at_least_measure(mu, g, scale * t);
  const auto tails = tail_bounds(s, t);
  r.parameters["tail"] = tail;
  ledger.require("tail", tails.front(), tail);
  for (std::size_t k = 0; k < tails.size(); ++k) {
    r.parameters["tailBound" + std::to_string(k + 1)] = tails[k];
    if (k > 0) ledger.require("tail chain " + std::to_string(k), tails[k], tails[k - 1]);
  }

  const auto moments = moment_bounds(s, p);
  const MomentResult moment = lp_moment(mu, g, p);
  r.parameters["moment"] = moment.value;
  r.parameters["momentFinite"] = moment.finite ? 1.0 : 0.0;
  for (std::size_t k = 0; k < moments.size(); ++k) {
    r.parameters["momentBound" + std::to_string(k + 1)] = scale * moments[k];
    if (k > 0) ledger.require("moment chain", scale * moments[k], scale * moments[k - 1]);
  }
  if (!moments.empty()) ledger.require("moment", scale * moments.front(), moment.value);

  ledger.settle(r);
  if (moments.empty()) r.note += moment.finite ? "; p >= -1/s, moment finite" : "; p >= -1/s, moment diverges";
  return r;
}

// ---------------------------------------------------------------------------
// Bound curves.

/// Table of bound curves: one row per t (tail chains) and per eps (small-ball
/// bound A_f c_s eps). Cells that do not apply are NaN and print empty.
struct BoundTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // rows[k][0] is 0 for a t row, 1 for an eps row

  [[nodiscard]] std::string to_csv() const {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
    out << '\n';
    for (const auto& row : rows) {
      out << (row[0] == 0.0 ? "t" : "eps");
      for (std::size_t k = 1; k < row.size(); ++k) {
        out << ',';
        if (!std::isnan(row[k])) out << row[k];
      }
      out << '\n';
    }
    return out.str();
  }
};

inline BoundTable bound_curves(const RemezProfile& profile, double s, const std::vector<double>& t_grid,
                               const std::vector<double>& eps_grid) {
  if (t_grid.empty() || eps_grid.empty()) throw std::invalid_argument("bound curve grids must be nonempty");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double c_s = constants(s).c_s;
  BoundTable table;
  table.header = {"variable",     "value",        "cor9_bound1",     "cor9_bound2",
                  "cor9_bound3",  "cor10_bound1", "cor10_bound2",    "cor8_smallball"};
  for (double t : t_grid) {
    std::vector<double> row{0.0, t, nan, nan, nan, nan, nan, nan};
    const auto tails = tail_bounds(s, t);
    if (s >= 0.0) {
      std::copy(tails.begin(), tails.end(), row.begin() + 2);
    } else {
      std::copy(tails.begin(), tails.end(), row.begin() + 5);
    }
    table.rows.push_back(std::move(row));
  }
  for (double eps : eps_grid) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("epsilon grid must lie in (0, 1]");
    table.rows.push_back({1.0, eps, nan, nan, nan, nan, nan, profile.chebyshev_constant() * c_s * eps});
  }
  return table;
}

}  // namespace dilatrix

#pragma once

// Chebyshev polynomials of the first kind and the two Remez-function
// profiles with closed forms (gauges and seminorms of polynomial maps).

#include <cmath>
#include <stdexcept>
#include <string>

#include "dilatrix/check_report.hpp"

namespace dilatrix {

/// T_d(t) for any real t. The three-term recurrence is exact on integers and
/// stable for |t| > 1, where T_d is the dominant solution.
inline double chebyshev(int d, double t) {
  if (d < 0) throw std::invalid_argument("Chebyshev degree must be >= 0");
  if (d == 0) return 1.0;
  if (d > 64 && std::abs(t) > 1.0) {
    const double v = std::cosh(d * std::acosh(std::abs(t)));
    return (t < 0.0 && d % 2 == 1) ? -v : v;
  }
  if (d > 64) return std::cos(d * std::acos(t));
  double prev = 1.0, cur = t;
  for (int k = 1; k < d; ++k) {
    const double next = 2.0 * t * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// The preimage t >= 1 of y >= 1 under T_d.
inline double chebyshev_inverse(int d, double y) {
  if (d < 1) throw std::invalid_argument("Chebyshev inverse needs degree >= 1");
  if (!(y >= 1.0)) throw std::invalid_argument("Chebyshev inverse needs y >= 1");
  return std::cosh(std::acosh(y) / d);
}

/// A Remez function u with its modulus of regularity delta(eps) = 1/u^{-1}(1/eps)
/// and Chebyshev degree/constant (u(t) <= (A t)^d).
struct RemezProfile {
  enum class Kind { gauge, polynomial };
  Kind kind = Kind::gauge;
  int degree = 1;

  [[nodiscard]] double chebyshev_degree() const noexcept { return kind == Kind::gauge ? 1.0 : degree; }
  [[nodiscard]] double chebyshev_constant() const noexcept { return kind == Kind::gauge ? 2.0 : 4.0; }

  /// u(t), t >= 1.
  [[nodiscard]] double remez(double t) const {
    return kind == Kind::gauge ? 2.0 * t - 1.0 : chebyshev(degree, 2.0 * t - 1.0);
  }
  /// u^{-1}(y), y >= 1.
  [[nodiscard]] double remez_inverse(double y) const {
    return kind == Kind::gauge ? 0.5 * (y + 1.0) : 0.5 * (chebyshev_inverse(degree, y) + 1.0);
  }
  /// delta(eps), eps in (0, 1].
  [[nodiscard]] double modulus(double eps) const {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
    if (kind == Kind::gauge) return 2.0 * eps / (eps + 1.0);
    return 2.0 / (chebyshev_inverse(degree, 1.0 / eps) + 1.0);
  }
};

inline RemezProfile gauge_profile() { return {RemezProfile::Kind::gauge, 1}; }

inline RemezProfile polynomial_profile(int degree) {
  if (degree < 1) throw std::invalid_argument("polynomial profile needs degree >= 1");
  return {RemezProfile::Kind::polynomial, degree};
}

inline std::string to_string(const RemezProfile& p) {
  return p.kind == RemezProfile::Kind::gauge ? "gauge" : "polynomial(d=" + std::to_string(p.degree) + ")";
}

/// Pointwise check of the closed-form relations on grids of `points` values:
///   delta(eps) = 1/u^{-1}(1/eps),
///   delta(eps) <= 4 (eps/2)^{1/d} <= 4 eps^{1/d},
///   u(t) <= (A t)^d.
/// gap is the smallest relative slack over all of them.
inline CheckReport profile_chain_check(const RemezProfile& p, int points = 100) {
  if (points < 2) throw std::invalid_argument("profile check needs at least 2 grid points");
  const double d = p.chebyshev_degree();
  double worst = 1.0;
  double worst_identity = 0.0;
  for (int k = 0; k < points; ++k) {
    const double eps = 0.01 + 0.99 * k / (points - 1);
    const double delta = p.modulus(eps);
    const double via_inverse = 1.0 / p.remez_inverse(1.0 / eps);
    worst_identity = std::max(worst_identity, std::abs(delta - via_inverse) / via_inverse);
    const double middle = 4.0 * std::pow(eps / 2.0, 1.0 / d);
    const double outer = 4.0 * std::pow(eps, 1.0 / d);
    worst = std::min({worst, (middle - delta) / middle, (outer - middle) / outer});
    const double t = 1.0 + 9.0 * k / (points - 1);
    const double growth = std::pow(p.chebyshev_constant() * t, d);
    worst = std::min(worst, (growth - p.remez(t)) / growth);
  }
  CheckReport r;
  r.check_name = "remez_profile";
  r.anchor = "modulus_of_regularity_chain";
  r.tolerance = 1e-12;
  r.parameters = {{"degree", d}, {"A", p.chebyshev_constant()}, {"identityError", worst_identity}};
  r.settle(worst, 0.0);
  if (worst_identity > 1e-12) {
    r.pass = false;
    r.status = CheckStatus::fail;
    r.note = "delta differs from 1/u^{-1}(1/eps)";
  }
  return r;
}

}  // namespace dilatrix

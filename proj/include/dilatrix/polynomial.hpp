#pragma once

// Polynomial maps R^n -> R^N in sparse monomial form, seminorms on R^N and
// the scalar function f(x) = ||P(x)||.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dilatrix/polytope.hpp"
#include "dilatrix/random.hpp"

namespace dilatrix {

struct Monomial {
  int output = 0;          // index of the output coordinate
  std::vector<int> exponents;
  double coefficient = 0.0;
};

class PolynomialMap {
 public:
  PolynomialMap(int inputs, int outputs, std::vector<Monomial> terms)
      : n_(inputs), N_(outputs), terms_(std::move(terms)) {
    if (n_ < 1) throw std::invalid_argument("polynomial needs at least one input");
    if (N_ < 1) throw std::invalid_argument("polynomial needs at least one output");
    for (const auto& m : terms_) {
      if (m.output < 0 || m.output >= N_) throw std::invalid_argument("monomial output index out of range");
      if (m.exponents.size() != static_cast<std::size_t>(n_)) {
        throw std::invalid_argument("monomial exponent count must equal the input dimension");
      }
      if (std::any_of(m.exponents.begin(), m.exponents.end(), [](int e) { return e < 0; })) {
        throw std::invalid_argument("exponents must be nonnegative");
      }
      if (!std::isfinite(m.coefficient)) throw std::invalid_argument("coefficients must be finite");
      if (m.coefficient != 0.0) {
        degree_ = std::max(degree_, std::accumulate(m.exponents.begin(), m.exponents.end(), 0));
      }
    }
  }

  [[nodiscard]] int inputs() const noexcept { return n_; }
  [[nodiscard]] int outputs() const noexcept { return N_; }
  [[nodiscard]] int degree() const noexcept { return degree_; }
  [[nodiscard]] const std::vector<Monomial>& terms() const noexcept { return terms_; }

  [[nodiscard]] std::vector<double> operator()(const Point& x) const {
    if (x.size() != static_cast<std::size_t>(n_)) throw std::invalid_argument("point has wrong dimension");
    // Powers x_i^k for k <= degree, shared by all monomials.
    const std::size_t stride = static_cast<std::size_t>(degree_) + 1;
    std::vector<double> powers(static_cast<std::size_t>(n_) * stride, 1.0);
    for (int i = 0; i < n_; ++i) {
      for (std::size_t k = 1; k < stride; ++k) {
        powers[i * stride + k] = powers[i * stride + k - 1] * x[static_cast<std::size_t>(i)];
      }
    }
    std::vector<double> y(static_cast<std::size_t>(N_), 0.0);
    for (const auto& m : terms_) {
      double v = m.coefficient;
      for (int i = 0; i < n_; ++i) {
        const int e = m.exponents[static_cast<std::size_t>(i)];
        if (e > degree_) continue;  // only reachable for zero coefficients
        v *= powers[i * stride + static_cast<std::size_t>(e)];
      }
      y[static_cast<std::size_t>(m.output)] += v;
    }
    return y;
  }

 private:
  int n_;
  int N_;
  std::vector<Monomial> terms_;
  int degree_ = 0;
};

/// Univariate polynomial from ascending coefficients as a 1 -> 1 map.
inline PolynomialMap univariate(const std::vector<double>& coefficients) {
  std::vector<Monomial> terms;
  for (std::size_t k = 0; k < coefficients.size(); ++k) terms.push_back({0, {static_cast<int>(k)}, coefficients[k]});
  return {1, 1, std::move(terms)};
}

/// Chebyshev polynomial T_d as a univariate map.
inline PolynomialMap chebyshev_map(int d) {
  std::vector<double> prev{1.0}, cur{0.0, 1.0};
  if (d == 0) return univariate(prev);
  for (int k = 1; k < d; ++k) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t j = 0; j < cur.size(); ++j) next[j + 1] += 2.0 * cur[j];
    for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= prev[j];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return univariate(cur);
}

class Seminorm {
 public:
  enum class Kind { sup, l1, l2, polytope_gauge };

  static Seminorm sup_norm() { return Seminorm(Kind::sup); }
  static Seminorm l1_norm() { return Seminorm(Kind::l1); }
  static Seminorm l2_norm() { return Seminorm(Kind::l2); }
  /// Gauge of an origin-symmetric full-dimensional polytope.
  static Seminorm polytope_gauge(ConvexPolytope body) {
    if (!body.full_dimensional() || !body.origin_symmetric()) {
      throw std::invalid_argument("gauge seminorm needs an origin-symmetric full-dimensional polytope");
    }
    Seminorm s(Kind::polytope_gauge);
    s.body_ = std::move(body);
    return s;
  }

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::optional<ConvexPolytope>& body() const noexcept { return body_; }

  [[nodiscard]] double operator()(const std::vector<double>& y) const {
    switch (kind_) {
      case Kind::sup: {
        double m = 0.0;
        for (double v : y) m = std::max(m, std::abs(v));
        return m;
      }
      case Kind::l1: {
        double m = 0.0;
        for (double v : y) m += std::abs(v);
        return m;
      }
      case Kind::l2: {
        double m = 0.0;
        for (double v : y) m = std::hypot(m, v);
        return m;
      }
      case Kind::polytope_gauge: return gauge(*body_, y);
    }
    return 0.0;
  }

 private:
  explicit Seminorm(Kind k) : kind_(k) {}
  Kind kind_;
  std::optional<ConvexPolytope> body_;
};

inline std::string to_string(Seminorm::Kind k) {
  switch (k) {
    case Seminorm::Kind::sup: return "sup";
    case Seminorm::Kind::l1: return "l1";
    case Seminorm::Kind::l2: return "l2";
    case Seminorm::Kind::polytope_gauge: return "gauge";
  }
  return "unknown";
}

/// f(x) = ||P(x)||.
inline double eval_f(const PolynomialMap& P, const Seminorm& norm, const Point& x) { return norm(P(x)); }

/// Random map with 1..4 monomials per output, total degree exactly `degree`
/// and coefficients uniform in [-1, 1].
inline PolynomialMap random_polynomial_map(Rng& rng, int inputs, int degree, int outputs) {
  if (degree < 1) throw std::invalid_argument("random polynomial needs degree >= 1");
  std::vector<Monomial> terms;
  auto random_exponents = [&](int total) {
    std::vector<int> e(static_cast<std::size_t>(inputs), 0);
    for (int k = 0; k < total; ++k) ++e[uniform_index(rng, static_cast<std::uint64_t>(inputs))];
    return e;
  };
  for (int out = 0; out < outputs; ++out) {
    const int count = 1 + static_cast<int>(uniform_index(rng, 4));
    for (int k = 0; k < count; ++k) {
      const int total = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(degree) + 1));
      terms.push_back({out, random_exponents(total), uniform(rng, -1.0, 1.0)});
    }
  }
  // One top-degree monomial with a coefficient bounded away from zero.
  const int out = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(outputs)));
  const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
  terms.push_back({out, random_exponents(degree), sign * uniform(rng, 0.5, 1.0)});
  return {inputs, outputs, std::move(terms)};
}

}  // namespace dilatrix

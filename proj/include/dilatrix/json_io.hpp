#pragma once

// JSON forms of the library's value types and reports.
//
//   interval set  {"components": [[lo, hi], ...]}   (a bare [[lo, hi], ...] is accepted)
//   density       {"s", "support": [lo|null, hi|null], "A", "B"}
//                 {"s", "breakpoints": [...], "values": [...], "leftTailSlope"?, "rightTailSlope"?}
//                 {"family": "uniform"|"exponential"|"laplace"|"extremal", ...}
//   polytope      {"n", "vertices": [[...], ...]}
//   polynomial    {"n", "N", "terms": [{"out", "exps": [...], "coef"}]}
//   function      {"gauge": {"center", "scale"}} or {"polynomial": [c0, c1, ...]}
//
// Malformed input throws FormatError naming the offending field.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dilatrix/check_report.hpp"
#include "dilatrix/density.hpp"
#include "dilatrix/instances.hpp"
#include "dilatrix/interval_set.hpp"
#include "dilatrix/polynomial.hpp"
#include "dilatrix/polytope.hpp"

namespace dilatrix {

using Json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  FormatError(std::string field, const std::string& what)
      : std::runtime_error("field '" + field + "': " + what), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

namespace detail {

inline const Json& require_field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(where + key, "missing");
  return j.at(key);
}

inline double number_at(const Json& j, const std::string& field) {
  if (!j.is_number()) throw FormatError(field, "expected a number");
  return j.get<double>();
}

/// A number, or null read as `if_null`.
inline double number_or(const Json& j, const std::string& field, double if_null) {
  if (j.is_null()) return if_null;
  return number_at(j, field);
}

inline int integer_at(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) throw FormatError(field, "expected an integer");
  return j.get<int>();
}

inline std::vector<double> numbers_at(const Json& j, const std::string& field) {
  if (!j.is_array()) throw FormatError(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number_at(j[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

inline Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

/// Rethrows library validation errors as FormatError for `field`.
template <class Build>
auto build_or_throw(const std::string& field, Build&& build) {
  try {
    return build();
  } catch (const FormatError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw FormatError(field, e.what());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Interval sets.

inline Json to_json(const IntervalSet& F) {
  Json comps = Json::array();
  for (const auto& c : F.components()) comps.push_back({c.lo, c.hi});
  return {{"components", comps}};
}

inline IntervalSet interval_set_from_json(const Json& j) {
  const Json& comps = j.is_array() ? j : detail::require_field(j, "components", "");
  if (!comps.is_array()) throw FormatError("components", "expected an array of [lo, hi] pairs");
  std::vector<Interval> raw;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const std::string field = "components[" + std::to_string(k) + "]";
    const auto pair = detail::numbers_at(comps[k], field);
    if (pair.size() != 2) throw FormatError(field, "expected [lo, hi]");
    raw.push_back({pair[0], pair[1]});
  }
  return detail::build_or_throw("components", [&] { return IntervalSet::normalize(std::move(raw)); });
}

// ---------------------------------------------------------------------------
// Densities.

inline Json to_json(const SAffineDensity& d) {
  return {{"s", d.s()},
          {"support", {detail::finite_or_null(d.support().lo), detail::finite_or_null(d.support().hi)}},
          {"A", d.A()},
          {"B", d.B()}};
}

inline Json to_json(const PiecewiseSConcaveDensity& d) {
  Json j{{"s", d.s()}, {"breakpoints", d.breakpoints()}, {"values", d.values()}};
  if (d.left_tail_slope()) j["leftTailSlope"] = *d.left_tail_slope();
  if (d.right_tail_slope()) j["rightTailSlope"] = *d.right_tail_slope();
  return j;
}

inline Json to_json(const AnyDensity& d) {
  return std::visit([](const auto& impl) { return to_json(impl); }, d.get());
}

inline AnyDensity density_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("density", "expected an object");
  if (j.contains("family")) {
    const Json& fam = j.at("family");
    if (!fam.is_string()) throw FormatError("family", "expected a string");
    const auto name = fam.get<std::string>();
    auto opt_number = [&](const char* key, double fallback) {
      return j.contains(key) ? detail::number_at(j.at(key), key) : fallback;
    };
    return detail::build_or_throw("family", [&]() -> AnyDensity {
      if (name == "uniform") return uniform_density(opt_number("lo", 0.0), opt_number("hi", 1.0));
      if (name == "exponential") return exponential_density(opt_number("rate", 1.0), opt_number("lo", 0.0));
      if (name == "laplace") return laplace_density(opt_number("center", 0.0));
      if (name == "extremal") {
        const double s = detail::number_at(detail::require_field(j, "s", ""), "s");
        const double a = detail::number_at(detail::require_field(j, "a", ""), "a");
        return make_paper_extremal(s, a, opt_number("tMax", 1.0 + 1e-9));
      }
      throw FormatError("family", "unknown family '" + name + "'");
    });
  }
  const double s = detail::number_at(detail::require_field(j, "s", ""), "s");
  if (j.contains("breakpoints")) {
    auto bp = detail::numbers_at(j.at("breakpoints"), "breakpoints");
    auto vals = detail::numbers_at(detail::require_field(j, "values", ""), "values");
    std::optional<double> left, right;
    if (j.contains("leftTailSlope")) left = detail::number_at(j.at("leftTailSlope"), "leftTailSlope");
    if (j.contains("rightTailSlope")) right = detail::number_at(j.at("rightTailSlope"), "rightTailSlope");
    return detail::build_or_throw("breakpoints", [&]() -> AnyDensity {
      return PiecewiseSConcaveDensity(s, std::move(bp), std::move(vals), left, right);
    });
  }
  const Json& supp = detail::require_field(j, "support", "");
  if (!supp.is_array() || supp.size() != 2) throw FormatError("support", "expected [lo|null, hi|null]");
  const double lo = detail::number_or(supp[0], "support[0]", -inf);
  const double hi = detail::number_or(supp[1], "support[1]", inf);
  const double A = detail::number_at(detail::require_field(j, "A", ""), "A");
  const double B = detail::number_at(detail::require_field(j, "B", ""), "B");
  return detail::build_or_throw("support", [&]() -> AnyDensity { return SAffineDensity(s, A, B, {lo, hi}); });
}

// ---------------------------------------------------------------------------
// Polytopes and polynomial maps.

inline Json to_json(const ConvexPolytope& K) {
  return {{"n", K.dimension()}, {"vertices", K.vertices()}};
}

inline ConvexPolytope polytope_from_json(const Json& j) {
  const int n = detail::integer_at(detail::require_field(j, "n", ""), "n");
  const Json& verts = detail::require_field(j, "vertices", "");
  if (!verts.is_array()) throw FormatError("vertices", "expected an array of points");
  std::vector<Point> pts;
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const std::string field = "vertices[" + std::to_string(k) + "]";
    auto p = detail::numbers_at(verts[k], field);
    if (p.size() != static_cast<std::size_t>(n)) throw FormatError(field, "expected " + std::to_string(n) + " coordinates");
    pts.push_back(std::move(p));
  }
  return detail::build_or_throw("vertices", [&] { return ConvexPolytope(n, std::move(pts)); });
}

inline Json to_json(const PolynomialMap& P) {
  Json terms = Json::array();
  for (const auto& m : P.terms()) terms.push_back({{"out", m.output}, {"exps", m.exponents}, {"coef", m.coefficient}});
  return {{"n", P.inputs()}, {"N", P.outputs()}, {"terms", terms}};
}

inline PolynomialMap polynomial_from_json(const Json& j) {
  const int n = detail::integer_at(detail::require_field(j, "n", ""), "n");
  const int N = detail::integer_at(detail::require_field(j, "N", ""), "N");
  const Json& terms = detail::require_field(j, "terms", "");
  if (!terms.is_array()) throw FormatError("terms", "expected an array of monomials");
  std::vector<Monomial> out;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string field = "terms[" + std::to_string(k) + "].";
    Monomial m;
    m.output = detail::integer_at(detail::require_field(terms[k], "out", field), field + "out");
    const Json& exps = detail::require_field(terms[k], "exps", field);
    if (!exps.is_array()) throw FormatError(field + "exps", "expected an array of integers");
    for (std::size_t e = 0; e < exps.size(); ++e) {
      m.exponents.push_back(detail::integer_at(exps[e], field + "exps[" + std::to_string(e) + "]"));
    }
    m.coefficient = detail::number_at(detail::require_field(terms[k], "coef", field), field + "coef");
    out.push_back(std::move(m));
  }
  return detail::build_or_throw("terms", [&] { return PolynomialMap(n, N, std::move(out)); });
}

// ---------------------------------------------------------------------------
// One-variable test functions.

inline Json to_json(const TestFunction& tf) {
  return tf.visit([](const auto& f) -> Json {
    using F = std::decay_t<decltype(f)>;
    if constexpr (std::is_same_v<F, Gauge1D>) {
      return {{"gauge", {{"center", f.center}, {"scale", f.scale}}}};
    } else {
      return {{"polynomial", f.coefficients()}};
    }
  });
}

/// Gauges get the gauge profile, polynomials the profile of their degree.
inline TestFunction test_function_from_json(const Json& j) {
  if (j.is_object() && j.contains("gauge")) {
    const Json& g = j.at("gauge");
    Gauge1D f;
    if (g.contains("center")) f.center = detail::number_at(g.at("center"), "gauge.center");
    if (g.contains("scale")) f.scale = detail::number_at(g.at("scale"), "gauge.scale");
    if (!(f.scale > 0.0)) throw FormatError("gauge.scale", "must be > 0");
    return {f, gauge_profile()};
  }
  if (j.is_object() && j.contains("polynomial")) {
    Polynomial1D f(detail::numbers_at(j.at("polynomial"), "polynomial"));
    if (f.degree() < 1) throw FormatError("polynomial", "degree must be >= 1");
    const int d = f.degree();
    return {std::move(f), polynomial_profile(d)};
  }
  throw FormatError("function", "expected {\"gauge\": {...}} or {\"polynomial\": [...]}");
}

// ---------------------------------------------------------------------------
// Reports.

inline Json to_json(const CheckReport& r) {
  Json params = Json::object();
  for (const auto& [k, v] : r.parameters) params[k] = detail::finite_or_null(v);
  Json j{{"checkName", r.check_name},
         {"parameters", params},
         {"lhs", detail::finite_or_null(r.lhs)},
         {"rhs", detail::finite_or_null(r.rhs)},
         {"gap", detail::finite_or_null(r.gap)},
         {"pass", r.pass},
         {"tolerance", r.tolerance},
         {"paperAnchor", r.anchor},
         {"status", std::string(to_string(r.status))}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

/// Order-independent summary of a batch of reports. Vacuous and
/// not-applicable reports count as vacuous and do not enter worstGap.
struct ReportSummary {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t vacuous = 0;
  double worst_gap = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> worst_instance;

  void add(const CheckReport& r, std::size_t instance) {
    ++total;
    if (r.pass) ++passed;
    if (r.status == CheckStatus::vacuous || r.status == CheckStatus::not_applicable) {
      ++vacuous;
      return;
    }
    // Ties go to the lowest instance so the summary does not depend on order.
    if (r.gap < worst_gap || (r.gap == worst_gap && worst_instance && instance < *worst_instance)) {
      worst_gap = r.gap;
      worst_instance = instance;
    }
  }

  [[nodiscard]] bool all_passed() const noexcept { return passed == total; }
};

inline Json to_json(const ReportSummary& s) {
  return {{"total", s.total},
          {"passed", s.passed},
          {"vacuous", s.vacuous},
          {"worstGap", detail::finite_or_null(s.worst_gap)},
          {"worstInstance", s.worst_instance ? Json(*s.worst_instance) : Json(nullptr)}};
}

}  // namespace dilatrix

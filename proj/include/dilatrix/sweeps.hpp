#pragma once

// Randomized instance families for batch verification. Instance k of a sweep
// draws everything from derive_seed(seed, k), so any single instance can be
// replayed and results do not depend on the thread count.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dilatrix/check_report.hpp"
#include "dilatrix/deviations.hpp"
#include "dilatrix/instances.hpp"
#include "dilatrix/parallel.hpp"
#include "dilatrix/polynomial.hpp"
#include "dilatrix/remez.hpp"
#include "dilatrix/verifier.hpp"

namespace dilatrix {

enum class SweepFamily {
  theorem1,
  classical,
  corollary1,
  theorem2,
  reconstruction,
  corollary6,
  small_deviation,
  large_deviation,
  fact2,
};

inline constexpr SweepFamily all_sweep_families[] = {
    SweepFamily::theorem1,   SweepFamily::classical,       SweepFamily::corollary1,
    SweepFamily::theorem2,   SweepFamily::reconstruction,  SweepFamily::corollary6,
    SweepFamily::small_deviation, SweepFamily::large_deviation, SweepFamily::fact2,
};

inline std::string_view to_string(SweepFamily f) {
  switch (f) {
    case SweepFamily::theorem1: return "theorem1";
    case SweepFamily::classical: return "classical";
    case SweepFamily::corollary1: return "corollary1";
    case SweepFamily::theorem2: return "theorem2";
    case SweepFamily::reconstruction: return "reconstruction";
    case SweepFamily::corollary6: return "corollary6";
    case SweepFamily::small_deviation: return "small_deviation";
    case SweepFamily::large_deviation: return "large_deviation";
    case SweepFamily::fact2: return "fact2";
  }
  return "unknown";
}

inline std::optional<SweepFamily> parse_sweep_family(std::string_view name) {
  for (auto f : all_sweep_families) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

namespace detail {

/// A random test function and matching random parameters, evaluated by one
/// of the function-level checks.
inline CheckReport function_level_instance(SweepFamily family, Rng& rng, double tolerance) {
  const double s = random_s(rng);
  const auto mu = random_density(rng, s);
  const auto tf = random_test_function(mu, rng);
  const double t = random_t(rng, 6.0);
  const double eps = uniform(rng, 0.02, 1.0);
  const double q = uniform(rng, -0.9, -0.05);
  const double p = s < 0.0 ? uniform(rng, 0.05, 1.2) * (-1.0 / s) : uniform(rng, 0.2, 4.0);
  const double level_at = uniform(rng, 0.05, 0.95);
  const DeviationOptions opt{.s = std::nullopt, .tolerance = tolerance};
  return tf.visit([&](const auto& f) {
    const double level = quantile_median(mu, f, level_at);
    switch (family) {
      case SweepFamily::theorem2: return theorem2_check(mu, f, tf.profile, level, t, opt);
      case SweepFamily::corollary6: return corollary6_check(mu, f, tf.profile, level, eps, opt);
      case SweepFamily::small_deviation: return small_dev_neg_khintchine(mu, f, tf.profile, eps, q, opt);
      default: return large_dev_pos_khintchine(mu, f, tf.profile, t, p, opt);
    }
  });
}

}  // namespace detail

/// Instance `index` of a family. The report carries the instance index as
/// the parameter "instance".
inline CheckReport sweep_instance(SweepFamily family, std::uint64_t seed, std::size_t index, double tolerance = 1e-9) {
  Rng rng(derive_seed(seed, index));
  CheckReport r;
  switch (family) {
    case SweepFamily::theorem1: {
      const auto mu = random_density(rng, random_s(rng));
      const auto F = random_subset(mu, rng);
      r = theorem1_check(mu, F, random_t(rng), tolerance);
      break;
    }
    case SweepFamily::classical: {
      const auto mu = random_density(rng, random_s(rng));
      const auto variant = static_cast<ClassicalVariant>(uniform_index(rng, 4));
      const auto K = variant == ClassicalVariant::nsv ? random_subset(mu, rng) : random_subset(mu, rng, 1);
      r = classical_check(mu, K, random_t(rng), variant, tolerance);
      break;
    }
    case SweepFamily::corollary1: {
      const auto mu = random_density(rng, uniform(rng, 0.05, 1.0));
      r = corollary1_check(mu, random_subset(mu, rng));
      break;
    }
    case SweepFamily::reconstruction: {
      const auto mu = random_density(rng, random_s(rng));
      const auto F = random_subset(mu, rng);
      r = theorem2_reconstruction(mu, F, random_t(rng), tolerance);
      break;
    }
    case SweepFamily::theorem2:
    case SweepFamily::corollary6:
    case SweepFamily::small_deviation:
    case SweepFamily::large_deviation: r = detail::function_level_instance(family, rng, tolerance); break;
    case SweepFamily::fact2: {
      static const Seminorm norms[] = {Seminorm::sup_norm(), Seminorm::l1_norm(), Seminorm::l2_norm()};
      const int n = 1 + static_cast<int>(uniform_index(rng, 3));
      const int d = 1 + static_cast<int>(uniform_index(rng, 4));
      const int N = 1 + static_cast<int>(uniform_index(rng, 3));
      const auto P = random_polynomial_map(rng, n, d, N);
      const auto& norm = norms[uniform_index(rng, 3)];
      Point x(static_cast<std::size_t>(n));
      for (double& c : x) c = uniform(rng, -1, 1);
      const double c = std::max(1e-3, eval_f(P, norm, x) * uniform(rng, 0.3, 1.5));
      r = fact2_propuf_check(P, norm, c, uniform(rng, 1.1, 4.0), 5, derive_seed(seed, index));
      r.parameters["N"] = N;
      r.parameters["n"] = n;
      break;
    }
  }
  r.parameters["instance"] = static_cast<double>(index);
  return r;
}

/// Instances 0..count-1 of a family, evaluated in parallel and returned in
/// index order.
inline std::vector<CheckReport> run_sweep(SweepFamily family, std::size_t count, std::uint64_t seed,
                                          double tolerance = 1e-9) {
  std::vector<CheckReport> out(count);
  parallel_for(count, [&](std::size_t k) { out[k] = sweep_instance(family, seed, k, tolerance); });
  return out;
}

}  // namespace dilatrix

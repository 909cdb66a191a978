#pragma once

// Derivative-free minimization by the Nelder-Mead simplex method.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace dilatrix {

struct NelderMeadOptions {
  double initial_step = 0.5;
  double f_tolerance = 1e-14;
  double x_tolerance = 1e-10;
  int max_evaluations = 4000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

template <class Objective>
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start, const NelderMeadOptions& opt = {}) {
  const std::size_t n = start.size();
  if (n == 0) throw std::invalid_argument("nelder_mead needs at least one variable");
  std::vector<std::vector<double>> pts(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += opt.initial_step;
  std::vector<double> vals(n + 1);
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  auto along = [&](double coef, std::vector<double>& out) {
    for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + coef * (pts[order[n]][j] - centroid[j]);
  };

  bool converged = false;
  while (evals < opt.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const double best = vals[order[0]];
    const double worst = vals[order[n]];
    double spread = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) spread = std::max(spread, std::abs(pts[order[i]][j] - pts[order[0]][j]));
    }
    if (std::abs(worst - best) <= opt.f_tolerance * (1.0 + std::abs(best)) && spread <= opt.x_tolerance) {
      converged = true;
      break;
    }
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[order[i]][j] / static_cast<double>(n);
    }
    along(-1.0, trial);
    const double fr = eval(trial);
    if (fr < best) {
      along(-2.0, trial2);
      const double fe = eval(trial2);
      if (fe < fr) {
        pts[order[n]] = trial2;
        vals[order[n]] = fe;
      } else {
        pts[order[n]] = trial;
        vals[order[n]] = fr;
      }
      continue;
    }
    if (fr < vals[order[n - 1]]) {
      pts[order[n]] = trial;
      vals[order[n]] = fr;
      continue;
    }
    const bool outside = fr < worst;
    along(outside ? -0.5 : 0.5, trial2);
    const double fc = eval(trial2);
    if (fc < (outside ? fr : worst)) {
      pts[order[n]] = trial2;
      vals[order[n]] = fc;
      continue;
    }
    // Shrink towards the best vertex.
    for (std::size_t i = 1; i <= n; ++i) {
      auto& p = pts[order[i]];
      for (std::size_t j = 0; j < n; ++j) p[j] = pts[order[0]][j] + 0.5 * (p[j] - pts[order[0]][j]);
      vals[order[i]] = eval(p);
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  NelderMeadResult out;
  out.x = pts[static_cast<std::size_t>(it - vals.begin())];
  out.value = *it;
  out.evaluations = evals;
  out.converged = converged;
  return out;
}

}  // namespace dilatrix

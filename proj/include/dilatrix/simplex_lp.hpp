#pragma once

// Feasibility of A x = b, x >= 0 by the phase-one simplex method on a dense
// tableau. Bland's rule rules out cycling; problems here have a handful of
// rows and at most a few hundred columns.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace dilatrix {

struct LpFeasibility {
  bool feasible = false;
  std::vector<double> x;       // a basic solution when feasible
  double infeasibility = 0.0;  // optimal sum of artificial variables
};

inline LpFeasibility find_nonnegative_solution(const std::vector<std::vector<double>>& A, std::vector<double> b,
                                               double tolerance = 1e-9) {
  const std::size_t m = A.size();
  if (m == 0 || b.size() != m) throw std::invalid_argument("constraint matrix and rhs sizes differ");
  const std::size_t n = A.front().size();
  for (const auto& row : A) {
    if (row.size() != n) throw std::invalid_argument("constraint matrix rows differ in length");
  }
  const std::size_t cols = n + m + 1;  // originals, artificials, rhs
  std::vector<std::vector<double>> T(m + 1, std::vector<double>(cols, 0.0));
  std::vector<std::size_t> basis(m);
  double scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) T[i][j] = sign * A[i][j];
    T[i][n + i] = 1.0;
    T[i][cols - 1] = sign * b[i];
    basis[i] = n + i;
    scale = std::max(scale, std::abs(b[i]));
  }
  // Objective row holds reduced costs of "minimize the sum of artificials".
  for (std::size_t j = 0; j < cols; ++j) {
    if (j >= n && j < n + m) continue;
    for (std::size_t i = 0; i < m; ++i) T[m][j] -= T[i][j];
  }

  constexpr double pivot_eps = 1e-12;
  const std::size_t max_iterations = 50 * (n + m) + 100;
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (T[m][j] < -pivot_eps) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (T[i][enter] > pivot_eps) {
        const double ratio = T[i][cols - 1] / T[i][enter];
        if (ratio < best_ratio - 1e-15 || (ratio <= best_ratio + 1e-15 && leave < m && basis[i] < basis[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave == m) break;  // unbounded direction cannot occur in phase one
    const double p = T[leave][enter];
    for (auto& v : T[leave]) v /= p;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || T[i][enter] == 0.0) continue;
      const double f = T[i][enter];
      for (std::size_t j = 0; j < cols; ++j) T[i][j] -= f * T[leave][j];
    }
    basis[leave] = enter;
  }

  LpFeasibility out;
  out.infeasibility = std::max(0.0, -T[m][cols - 1]);
  out.feasible = out.infeasibility <= tolerance * scale;
  out.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) out.x[basis[i]] = T[i][cols - 1];
  }
  return out;
}

}  // namespace dilatrix

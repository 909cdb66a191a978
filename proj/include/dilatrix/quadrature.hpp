#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature on finite intervals.

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace dilatrix {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
  bool converged = true;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class Fn>
Panel gk15(const Fn& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kronrod_weights[7];
  double gauss = fc * gauss_weights[3];
  for (int k = 0; k < 7; ++k) {
    const double dx = h * kronrod_nodes[k];
    const double s = f(c - dx) + f(c + dx);
    kronrod += kronrod_weights[k] * s;
    if (k % 2 == 1) gauss += gauss_weights[k / 2] * s;
  }
  return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

}  // namespace detail

/// Integrates f over [a,b] until the summed error estimate is below
/// max(abs_tol, rel_tol * |value|) or max_panels is reached.
template <class Fn>
QuadratureResult integrate(const Fn& f, double a, double b, double abs_tol = 1e-10,
                           double rel_tol = 1e-12, int max_panels = 4000) {
  QuadratureResult out;
  if (a == b) return out;
  const double sign = a < b ? 1.0 : -1.0;
  if (a > b) std::swap(a, b);

  std::priority_queue<detail::Panel> heap;
  auto first = detail::gk15(f, a, b);
  double value = first.value;
  double error = first.error;
  heap.push(first);
  int panels = 1;
  while (error > std::max(abs_tol, rel_tol * std::abs(value)) && panels < max_panels) {
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    const auto left = detail::gk15(f, worst.a, mid);
    const auto right = detail::gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  // Re-sum to shed accumulated cancellation in the running totals.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = sign * value;
  out.error = error;
  out.panels = panels;
  out.converged = error <= std::max(abs_tol, rel_tol * std::abs(value));
  return out;
}

/// Integrates over consecutive panels split at `breaks` (sorted, inclusive of ends).
template <class Fn>
QuadratureResult integrate_piecewise(const Fn& f, const std::vector<double>& breaks,
                                     double abs_tol = 1e-10, double rel_tol = 1e-12) {
  QuadratureResult out;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const auto r = integrate(f, breaks[k], breaks[k + 1], abs_tol, rel_tol);
    out.value += r.value;
    out.error += r.error;
    out.panels += r.panels;
    out.converged = out.converged && r.converged;
  }
  return out;
}

}  // namespace dilatrix

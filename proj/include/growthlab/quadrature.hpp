#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature with a global error budget.
//
// The panel with the largest error estimate is bisected until the summed
// estimate falls below max(abs_tol, rel_tol * |integral|).  The final panel
// partition is returned so that callers integrating a family of similar
// integrands can reuse it (see integrate_on).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "growthlab/errors.hpp"

namespace growthlab::quad {

struct Options {
  double abs_tol = 1e-14;
  double rel_tol = 1e-8;
  std::size_t max_evals = std::size_t{1} << 16;
  std::size_t initial_panels = 8;
  /// When false, a node-cap breach returns the best estimate with
  /// converged == false instead of throwing.
  bool throw_on_failure = true;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t evals = 0;
  bool converged = true;
  std::vector<double> breakpoints;  // sorted panel edges, front == a, back == b
};

namespace detail {

// Kronrod abscissae on [-1, 1] (positive half, descending); odd indices are
// the Gauss-Legendre 7-point nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  return Panel{a, b, resk * h, std::abs((resk - resg) * h)};
}

}  // namespace detail

/// Adaptive refinement starting from the given sorted breakpoints.
template <class F>
Result integrate_from(F&& f, std::span<const double> initial, const Options& opt = {}) {
  Result res;
  if (initial.size() < 2 || !(initial.back() > initial.front())) {
    res.breakpoints.assign(initial.begin(), initial.end());
    return res;
  }
  const double b = initial.back();
  std::priority_queue<detail::Panel> heap;
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < initial.size(); ++i) {
    if (!(initial[i + 1] > initial[i])) continue;
    auto p = detail::gk15(f, initial[i], initial[i + 1]);
    res.evals += 15;
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (res.evals + 30 > opt.max_evals) {
      res.converged = false;
      break;
    }
    auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {  // panel at machine resolution
      res.converged = false;
      break;
    }
    heap.pop();
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    res.evals += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed accumulated cancellation from the running updates.
  total = 0.0;
  err = 0.0;
  std::vector<double> edges;
  edges.reserve(heap.size() + 1);
  while (!heap.empty()) {
    const auto& p = heap.top();
    total += p.value;
    err += p.error;
    edges.push_back(p.a);
    heap.pop();
  }
  std::sort(edges.begin(), edges.end());
  edges.push_back(b);
  res.value = total;
  res.error = err;
  res.breakpoints = std::move(edges);
  if (!res.converged && opt.throw_on_failure)
    throw QuadratureError("adaptive quadrature did not converge within " + std::to_string(opt.max_evals) +
                          " nodes (estimate " + std::to_string(total) + ", error " + std::to_string(err) + ")");
  return res;
}

template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
  if (!(b > a)) {
    Result res;
    res.breakpoints = {a, b};
    return res;
  }
  const std::size_t n0 = std::max<std::size_t>(1, opt.initial_panels);
  std::vector<double> edges(n0 + 1);
  for (std::size_t i = 0; i <= n0; ++i) edges[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n0);
  edges.back() = b;
  return integrate_from(f, edges, opt);
}

/// Breakpoints on [a, b] graded geometrically toward `target`, finest
/// spacing about `finest`, plus `coarse` uniform panels.
inline std::vector<double> graded_breakpoints(double a, double b, double target, double finest,
                                              std::size_t coarse = 8) {
  std::vector<double> e;
  for (std::size_t i = 0; i <= coarse; ++i) e.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(coarse));
  const double span = b - a;
  finest = std::max(finest, 1e-14 * span);
  for (double d = finest; d < span; d *= 2.0) {
    for (double t : {target - d, target + d})
      if (t > a && t < b) e.push_back(t);
  }
  if (target > a && target < b) e.push_back(target);
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

/// Fixed-partition GK15 over the given breakpoints (no refinement).
template <class F>
Result integrate_on(F&& f, std::span<const double> breakpoints) {
  Result res;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    auto p = detail::gk15(f, breakpoints[i], breakpoints[i + 1]);
    res.value += p.value;
    res.error += p.error;
    res.evals += 15;
  }
  res.breakpoints.assign(breakpoints.begin(), breakpoints.end());
  return res;
}

}  // namespace growthlab::quad

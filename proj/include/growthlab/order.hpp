#pragma once

// [p,q]-order, lower order, type and lower type of a sampled growth curve.
//
// A limsup/liminf at r -> 1 cannot be read off finitely many samples.  The
// estimator regresses the numerator n_i = log_p^+ value_i on
// x_i = log_q(1/(1-r_i)) over the tail window, n = lambda x + C, which is
// the same as fitting ratio_i = n_i/x_i = lambda + C/x_i and extrapolating to
// 1/x -> 0.  The residuals of the ratio around that fit give the limsup
// (largest) and liminf (smallest) offsets.  Curves whose local slope dn/dx
// keeps growing across the last decade of 1 - r are flagged divergent.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "growthlab/characteristics.hpp"
#include "growthlab/errors.hpp"
#include "growthlab/sector.hpp"

namespace growthlab {

enum class EstimateMode { limsup, liminf };

inline std::string_view to_string(EstimateMode m) { return m == EstimateMode::limsup ? "limsup" : "liminf"; }

struct EstimatorOptions {
  std::size_t min_samples = 16;
  double min_reach = 1e-4;          // require r_max >= 1 - min_reach
  std::size_t min_window = 8;
  double window_fraction = 0.1;     // top decile
  double divergence_threshold = 0.5;
};

struct OrderEstimate {
  int p = 1;
  int q = 1;
  EstimateMode mode = EstimateMode::limsup;
  double value = 0.0;               // +inf when infinite_flag
  bool infinite_flag = false;
  bool degenerate = false;          // all values zero
  double r_lo = 0.0, r_hi = 0.0;    // tail window
  double slope = 0.0;               // fitted lambda
  double intercept = 0.0;           // fitted C
  double finite_fit = 0.0;          // estimate before the divergence verdict
  double slope_growth = 0.0;        // divergence statistic
  std::vector<double> r;            // all samples used
  std::vector<double> ratios;
};

struct TypeEstimate : OrderEstimate {
  double order_used = 0.0;
};

namespace detail {

struct Fit {
  double a = 0.0, b = 0.0;  // y = a + b t
};

inline Fit least_squares(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  double st = 0, sy = 0;
  for (std::size_t i = 0; i < t.size(); ++i) st += t[i], sy += y[i];
  const double mt = st / n, my = sy / n;
  double stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) stt += (t[i] - mt) * (t[i] - mt), sty += (t[i] - mt) * (y[i] - my);
  Fit f;
  f.b = stt > 0.0 ? sty / stt : 0.0;
  f.a = my - f.b * mt;
  return f;
}

inline void require_curve(const GrowthCurve& c, const EstimatorOptions& o) {
  c.validate();
  if (c.size() < o.min_samples || c.r.back() < 1.0 - o.min_reach - 1e-15)
    throw InsufficientData("order estimation needs >= " + std::to_string(o.min_samples) +
                           " samples reaching r >= 1 - " + std::to_string(o.min_reach));
}

inline void require_pq(int p, int q) {
  if (!(q >= 1 && p >= q)) throw std::invalid_argument("[p,q] needs p >= q >= 1");
}

/// log_k^+ of the characteristic, accounting for log-scale storage.
inline double log_plus_of(const GrowthCurve& c, std::size_t i, int k) {
  if (!c.log_scale) return iterated_log_plus(k, c.value[i]);
  if (k == 0) return std::exp(c.value[i]);
  return iterated_log_plus(k - 1, std::max(0.0, c.value[i]));
}

/// Shared tail analysis: numerator n_i against abscissa x_i (x_i > 0).
inline OrderEstimate tail_analysis(const std::vector<double>& r, const std::vector<double>& n,
                                   const std::vector<double>& x, EstimateMode mode, const EstimatorOptions& o) {
  OrderEstimate e;
  e.mode = mode;
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (x[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(n[i])) usable.push_back(i);
  if (usable.size() < o.min_window) throw InsufficientData("too few samples with log_q(1/(1-r)) > 0");
  for (auto i : usable) {
    e.r.push_back(r[i]);
    e.ratios.push_back(n[i] / x[i]);
  }

  bool all_zero = true;
  for (auto i : usable) all_zero = all_zero && n[i] == 0.0;
  if (all_zero) {
    e.degenerate = true;
    e.r_lo = r[usable.front()];
    e.r_hi = r[usable.back()];
    return e;
  }

  const std::size_t m = usable.size();
  std::size_t w = std::max(o.min_window, static_cast<std::size_t>(std::ceil(o.window_fraction * static_cast<double>(m))));
  w = std::min(w, m);
  std::vector<double> tx, tn;
  for (std::size_t k = m - w; k < m; ++k) tx.push_back(x[usable[k]]), tn.push_back(n[usable[k]]);
  e.r_lo = r[usable[m - w]];
  e.r_hi = r[usable.back()];

  const Fit fit = least_squares(tx, tn);
  e.slope = fit.b;
  e.intercept = fit.a;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t k = 0; k < tx.size(); ++k) {
    const double resid = (tn[k] - fit.a) / tx[k] - fit.b;
    lo = std::min(lo, resid);
    hi = std::max(hi, resid);
  }
  e.finite_fit = std::max(0.0, fit.b + (mode == EstimateMode::limsup ? hi : lo));

  // Divergence: least-squares slope dn/dx on each half of the last decade of 1 - r.
  const double decade_start = 1.0 - 10.0 * (1.0 - r[usable.back()]);
  std::vector<double> dx, dn;
  for (auto i : usable)
    if (r[i] >= decade_start) dx.push_back(x[i]), dn.push_back(n[i]);
  if (dx.size() >= 6) {
    const std::size_t h = dx.size() / 2;
    const Fit f1 = least_squares({dx.begin(), dx.begin() + static_cast<std::ptrdiff_t>(h + 1)},
                                 {dn.begin(), dn.begin() + static_cast<std::ptrdiff_t>(h + 1)});
    const Fit f2 = least_squares({dx.begin() + static_cast<std::ptrdiff_t>(h), dx.end()},
                                 {dn.begin() + static_cast<std::ptrdiff_t>(h), dn.end()});
    e.slope_growth = f2.b - f1.b;
  }
  e.infinite_flag = e.slope_growth > o.divergence_threshold;
  e.value = e.infinite_flag ? std::numeric_limits<double>::infinity() : e.finite_fit;
  return e;
}

inline double log_q_of(int q, double r) { return iterated_log(q, 1.0 / (1.0 - r)); }

}  // namespace detail

/// [p,q]-order (limsup) or lower [p,q]-order (liminf) of a T / T0 curve.
inline OrderEstimate pq_order(const GrowthCurve& c, int p, int q, EstimateMode mode, const EstimatorOptions& o = {}) {
  detail::require_pq(p, q);
  detail::require_curve(c, o);
  std::vector<double> n(c.size()), x(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    n[i] = detail::log_plus_of(c, i, p);
    x[i] = detail::log_q_of(q, c.r[i]);
  }
  OrderEstimate e = detail::tail_analysis(c.r, n, x, mode, o);
  e.p = p;
  e.q = q;
  return e;
}

/// Order from a maximum-modulus curve: log_{p+1}^+ M against log_q(1/(1-r)).
inline OrderEstimate pq_order_from_max_modulus(const GrowthCurve& c, int p, int q, EstimateMode mode,
                                               const EstimatorOptions& o = {}) {
  if (c.kind != CurveKind::max_modulus) throw std::invalid_argument("pq_order_from_max_modulus needs a max_modulus curve");
  detail::require_pq(p, q);
  detail::require_curve(c, o);
  std::vector<double> n(c.size()), x(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    n[i] = detail::log_plus_of(c, i, p + 1);
    x[i] = detail::log_q_of(q, c.r[i]);
  }
  OrderEstimate e = detail::tail_analysis(c.r, n, x, mode, o);
  e.p = p;
  e.q = q;
  return e;
}

/// [p,q]-type (limsup) or lower type (liminf) at the given order:
/// log_{p-1}^+ value / (log_{q-1}(1/(1-r)))^order, fitted as a + b/x.
inline TypeEstimate pq_type(const GrowthCurve& c, int p, int q, double order, EstimateMode mode,
                            const EstimatorOptions& o = {}) {
  detail::require_pq(p, q);
  if (!(order > 0.0 && std::isfinite(order))) throw std::invalid_argument("pq_type needs 0 < order < inf");
  detail::require_curve(c, o);
  std::vector<double> n(c.size()), x(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    // Work in logs: p = 1 on a log-scale curve would overflow exp(value).
    double log_num;
    if (p == 1)
      log_num = c.log_scale ? c.value[i] : std::log(c.value[i]);
    else
      log_num = std::log(detail::log_plus_of(c, i, p - 1));
    const double den = detail::log_q_of(q - 1, c.r[i]);
    const double ratio = std::exp(log_num - order * std::log(den));
    x[i] = detail::log_q_of(q, c.r[i]);
    // tail_analysis works on n/x, so hand it n = ratio * x.
    n[i] = std::isfinite(ratio) ? ratio * x[i] : (log_num == -std::numeric_limits<double>::infinity() ? 0.0 : ratio);
  }
  // For a type the fit ratio = a + b/x is the same regression as n = a x + b.
  OrderEstimate base = detail::tail_analysis(c.r, n, x, mode, o);
  TypeEstimate t;
  static_cast<OrderEstimate&>(t) = std::move(base);
  t.p = p;
  t.q = q;
  t.order_used = order;
  return t;
}

// --------------------------------------------------------------------------
// Asserted inequalities (shared with the scenario reports).

struct Inequality {
  std::string name;
  std::string anchor;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs, or -|lhs - rhs| for equalities
  bool holds = false;
};

/// lhs <= rhs + tol
inline Inequality check_le(std::string name, std::string anchor, double lhs, double rhs, double tol) {
  Inequality q{std::move(name), std::move(anchor), lhs, rhs, rhs - lhs, false};
  if (std::isinf(lhs) && std::isinf(rhs) && lhs > 0 && rhs > 0) q.margin = 0.0;
  q.holds = q.margin >= -tol;
  return q;
}

/// |lhs - rhs| <= tol
inline Inequality check_eq(std::string name, std::string anchor, double lhs, double rhs, double tol) {
  Inequality q{std::move(name), std::move(anchor), lhs, rhs, -std::abs(lhs - rhs), false};
  if (std::isinf(lhs) && std::isinf(rhs) && (lhs > 0) == (rhs > 0)) q.margin = 0.0;
  q.holds = q.margin >= -tol;
  return q;
}

struct PropositionReport {
  int p = 1, q = 1;
  OrderEstimate rho, rho_m, mu, mu_m;
  std::vector<Inequality> inequalities;
  bool holds() const {
    return std::all_of(inequalities.begin(), inequalities.end(), [](const Inequality& i) { return i.holds; });
  }
};

/// Orders from T- and M-curves in both modes, checked against
/// rho <= rho_M <= rho + 1 (p == q) or rho == rho_M (p > q), and likewise for mu.
inline PropositionReport verify_proposition_pair(const GrowthCurve& t_curve, const GrowthCurve& m_curve, int p, int q,
                                                 double tol = 0.1, const EstimatorOptions& o = {}) {
  PropositionReport rep;
  rep.p = p;
  rep.q = q;
  rep.rho = pq_order(t_curve, p, q, EstimateMode::limsup, o);
  rep.mu = pq_order(t_curve, p, q, EstimateMode::liminf, o);
  rep.rho_m = pq_order_from_max_modulus(m_curve, p, q, EstimateMode::limsup, o);
  rep.mu_m = pq_order_from_max_modulus(m_curve, p, q, EstimateMode::liminf, o);
  const std::string tag = "[" + std::to_string(p) + "," + std::to_string(q) + "]";
  if (p == q) {
    rep.inequalities.push_back(check_le("rho" + tag + " <= rho_M" + tag, "Proposition 1.1(i)", rep.rho.value,
                                        rep.rho_m.value, tol));
    rep.inequalities.push_back(check_le("rho_M" + tag + " <= rho" + tag + " + 1", "Proposition 1.1(i)",
                                        rep.rho_m.value, rep.rho.value + 1.0, tol));
    rep.inequalities.push_back(
        check_le("mu" + tag + " <= mu_M" + tag, "Proposition 1.2(i)", rep.mu.value, rep.mu_m.value, tol));
    rep.inequalities.push_back(check_le("mu_M" + tag + " <= mu" + tag + " + 1", "Proposition 1.2(i)", rep.mu_m.value,
                                        rep.mu.value + 1.0, tol));
  } else {
    rep.inequalities.push_back(
        check_eq("rho" + tag + " == rho_M" + tag, "Proposition 1.1(ii)", rep.rho.value, rep.rho_m.value, tol));
    rep.inequalities.push_back(
        check_eq("mu" + tag + " == mu_M" + tag, "Proposition 1.2(ii)", rep.mu.value, rep.mu_m.value, tol));
  }
  return rep;
}

/// Builds the disc T- and M-curves of f on the grid first.
inline PropositionReport verify_proposition_pair(const AnalyticMap& f, int p, int q,
                                                 const std::vector<double>& grid = default_grid(), double tol = 0.1,
                                                 const EstimatorOptions& o = {}) {
  const auto disc = Sector::full_disc();
  const GrowthCurve t = build_curve(f, CurveKind::nevanlinna_T, disc, grid);
  const GrowthCurve m = build_curve(f, CurveKind::max_modulus, disc, grid);
  return verify_proposition_pair(t, m, p, q, tol, o);
}

// --------------------------------------------------------------------------
// Closed-form synthetic curves.

/// value = c (1-r)^{-lambda}
inline GrowthCurve power_curve(double lambda, double c, const std::vector<double>& grid,
                               CurveKind kind = CurveKind::nevanlinna_T) {
  GrowthCurve g;
  g.kind = kind;
  g.r = grid;
  for (double r : grid) g.value.push_back(c * std::pow(1.0 - r, -lambda));
  return g;
}

/// value = exp{c (1-r)^{-rho}}, stored on log scale.
inline GrowthCurve exp_power_curve(double rho, double c, const std::vector<double>& grid,
                                   CurveKind kind = CurveKind::nevanlinna_T) {
  GrowthCurve g;
  g.kind = kind;
  g.log_scale = true;
  g.r = grid;
  for (double r : grid) g.value.push_back(c * std::pow(1.0 - r, -rho));
  return g;
}

/// value = exp_2{(1-r)^{-sigma}}, stored on log scale (log value = exp{(1-r)^{-sigma}}).
inline GrowthCurve double_exp_power_curve(double sigma, const std::vector<double>& grid,
                                          CurveKind kind = CurveKind::max_modulus) {
  GrowthCurve g;
  g.kind = kind;
  g.log_scale = true;
  g.r = grid;
  for (double r : grid) g.value.push_back(std::exp(std::pow(1.0 - r, -sigma)));
  return g;
}

// --------------------------------------------------------------------------
// JSON: {p, q, mode, value, infinite_flag, window, ratios[]}.  An infinite
// value serializes as null next to infinite_flag = true.

inline nlohmann::json to_json(const OrderEstimate& e) {
  nlohmann::json j;
  j["p"] = e.p;
  j["q"] = e.q;
  j["mode"] = std::string(to_string(e.mode));
  j["value"] = e.infinite_flag ? nlohmann::json(nullptr) : nlohmann::json(e.value);
  j["infinite_flag"] = e.infinite_flag;
  j["degenerate"] = e.degenerate;
  j["window"] = {e.r_lo, e.r_hi};
  j["slope"] = e.slope;
  j["intercept"] = e.intercept;
  j["finite_fit"] = e.finite_fit;
  j["slope_growth"] = e.slope_growth;
  j["ratios"] = e.ratios;
  return j;
}

inline nlohmann::json to_json(const TypeEstimate& t) {
  nlohmann::json j = to_json(static_cast<const OrderEstimate&>(t));
  j["order_used"] = t.order_used;
  return j;
}

inline nlohmann::json to_json(const Inequality& q) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(v > 0 ? "inf" : "-inf"); };
  return {{"name", q.name}, {"anchor", q.anchor}, {"lhs", num(q.lhs)},
          {"rhs", num(q.rhs)}, {"margin", num(q.margin)}, {"holds", q.holds}};
}

}  // namespace growthlab

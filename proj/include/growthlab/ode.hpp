#pragma once

// Monic linear ODEs f^(k) + A_{k-1} f^(k-1) + ... + A_0 f = 0, their
// conjugates on the disc under z = z(u), and a Taylor-series integrator
// along rays.
//
// The integrator carries the state (f, f', ..., f^(k-1)) as e^s * y with y
// normalized to max |y_j| ~ 1, so log|f| = s + log|y_0| stays representable
// however large f becomes.  Each step expands y in a local power series of
// order N from the recurrence induced by the coefficient series.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "growthlab/analytic_map.hpp"
#include "growthlab/conformal_map.hpp"
#include "growthlab/errors.hpp"
#include "growthlab/sector.hpp"
#include "growthlab/series.hpp"

namespace growthlab {

inline constexpr std::size_t kMaxChainOrder = 12;

class LinearOde {
 public:
  /// coefficients = {A_0, ..., A_{k-1}}
  explicit LinearOde(std::vector<AnalyticMap> coefficients, Sector domain = Sector::full_disc())
      : a_(std::move(coefficients)), domain_(domain) {
    if (a_.size() < 2) throw std::invalid_argument("linear ODE needs order k >= 2");
  }

  std::size_t order() const { return a_.size(); }
  const std::vector<AnalyticMap>& coefficients() const { return a_; }
  const Sector& domain() const { return domain_; }

  /// Taylor series of each A_j about z0, to order m.
  std::vector<Jet> coefficient_series(cplx z0, std::size_t m) const {
    const Jet z = Jet::variable(z0, m);
    std::vector<Jet> out;
    out.reserve(a_.size());
    for (const auto& a : a_) out.push_back(a.series(z));
    return out;
  }

  std::vector<cplx> coefficient_values(cplx z) const {
    std::vector<cplx> out;
    for (const auto& j : coefficient_series(z, 0)) out.push_back(j[0]);
    return out;
  }

 private:
  std::vector<AnalyticMap> a_;
  Sector domain_;
};

/// alpha[n][j], 1 <= j <= n <= ell, with f^(n)(z(u)) = sum_j alpha[n][j] F^(j)(u).
class ChainRuleTable {
 public:
  ChainRuleTable(Sector s, std::size_t ell) : s_(s), ell_(ell) {
    if (ell < 1 || ell > kMaxChainOrder)
      throw DomainError("chain-rule order must lie in [1, " + std::to_string(kMaxChainOrder) + "]");
    detail::require_mappable(s);
  }

  std::size_t order() const { return ell_; }
  const Sector& sector() const { return s_; }

  /// Series of every entry about u, to order m; entry [n][j] (row 0 and
  /// column 0 unused, zero).
  std::vector<std::vector<Jet>> series(cplx u, std::size_t m) const {
    // Each recurrence level differentiates once, so V needs ell - 1 extra orders.
    const Jet v = reciprocal_derivative_series(s_, u, m + ell_ - 1);
    const std::size_t top = m + ell_ - 1;
    std::vector<std::vector<Jet>> a(ell_ + 1, std::vector<Jet>(ell_ + 2, Jet(top)));
    a[1][1] = v;
    for (std::size_t n = 2; n <= ell_; ++n) {
      const std::size_t ord = top - (n - 1);
      for (std::size_t j = 1; j <= n; ++j) {
        Jet inner = derivative(a[n - 1][j]).truncated(ord);
        if (j >= 2) inner += a[n - 1][j - 1].truncated(ord);
        a[n][j] = (v.truncated(ord) * inner).truncated(ord);
      }
    }
    for (auto& row : a)
      for (auto& e : row) e = e.truncated(m);
    return a;
  }

  std::vector<std::vector<cplx>> evaluate(cplx u) const {
    const auto s = series(u, 0);
    std::vector<std::vector<cplx>> out(ell_ + 1, std::vector<cplx>(ell_ + 1, cplx{0.0}));
    for (std::size_t n = 1; n <= ell_; ++n)
      for (std::size_t j = 1; j <= n; ++j) out[n][j] = s[n][j][0];
    return out;
  }

  cplx operator()(std::size_t n, std::size_t j, cplx u) const {
    if (n < 1 || n > ell_ || j < 1 || j > n) throw std::out_of_range("chain-rule index out of range");
    return evaluate(u)[n][j];
  }

 private:
  Sector s_;
  std::size_t ell_;
};

inline ChainRuleTable chain_rule_table(const Sector& s, std::size_t ell) { return ChainRuleTable(s, ell); }

/// F^(k) + B_{k-1} F^(k-1) + ... + B_0 F = 0 satisfied by F = f o z.
class TransformedOde {
 public:
  TransformedOde(LinearOde source, Sector s) : src_(std::move(source)), table_(s, src_.order()) {
    if (src_.order() > kMaxChainOrder) throw DomainError("transform_to_disc supports k <= 12");
  }

  std::size_t order() const { return src_.order(); }
  const LinearOde& source() const { return src_; }
  const Sector& sector() const { return table_.sector(); }
  const ChainRuleTable& table() const { return table_; }
  Sector domain() const { return Sector::full_disc(); }

  /// B_0 = A_0(z(u)) / alpha[k][k];
  /// B_j = (alpha[k][j] + sum_{n=j}^{k-1} A_n(z(u)) alpha[n][j]) / alpha[k][k].
  std::vector<Jet> coefficient_series(cplx u0, std::size_t m) const {
    const std::size_t k = order();
    try {
      const Jet z = map_series(sector(), Jet::variable(u0, m));
      std::vector<Jet> a;
      for (const auto& c : src_.coefficients()) a.push_back(c.series(z));
      const auto al = table_.series(u0, m);
      const Jet& akk = al[k][k];
      std::vector<Jet> b(k);
      b[0] = a[0] / akk;
      for (std::size_t j = 1; j < k; ++j) {
        Jet num = al[k][j];
        for (std::size_t n = j; n < k; ++n) num += a[n] * al[n][j];
        b[j] = num / akk;
      }
      return b;
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " (transformed coefficients at u = " + AnalyticMap::format(u0) + ")");
    }
  }

  std::vector<cplx> coefficient_values(cplx u) const {
    std::vector<cplx> out;
    for (const auto& j : coefficient_series(u, 0)) out.push_back(j[0]);
    return out;
  }

  /// B_j as an evaluable map on the disc.
  AnalyticMap coefficient(std::size_t j) const {
    if (j >= order()) throw std::out_of_range("coefficient index out of range");
    auto self = std::make_shared<TransformedOde>(*this);
    return AnalyticMap::from_value("B_" + std::to_string(j), [self, j](const Jet& u) {
      return compose_at_offset(self->coefficient_series(u.value(), u.order())[j], u);
    });
  }

 private:
  LinearOde src_;
  ChainRuleTable table_;
};

inline TransformedOde transform_to_disc(const LinearOde& ode, const Sector& s) { return TransformedOde(ode, s); }

/// |f^(k) + sum A_j f^(j)| / max |term| for a jet (f, f', ..., f^(k)); any
/// common scale factor of the jet cancels.
inline double residual_from_values(const std::vector<cplx>& a, const std::vector<cplx>& jet) {
  const std::size_t k = a.size();
  if (jet.size() != k + 1) throw std::invalid_argument("residual needs a jet of length k + 1");
  cplx sum = jet[k];
  double big = std::abs(jet[k]);
  for (std::size_t j = 0; j < k; ++j) {
    const cplx t = a[j] * jet[j];
    sum += t;
    big = std::max(big, std::abs(t));
  }
  return big > 0.0 ? std::abs(sum) / big : 0.0;
}

template <class Ode>
double residual(const Ode& ode, cplx z, const std::vector<cplx>& jet) {
  return residual_from_values(ode.coefficient_values(z), jet);
}

// --------------------------------------------------------------------------
// Taylor integrator.

struct SolverOptions {
  std::size_t series_order = 20;
  double tail_tol = 1e-12;
  double residual_tol = 1e-9;
  double fixed_step = 0.0;  // > 0: constant steps, no tail or residual control
  double min_step = 1e-14;
  std::size_t max_steps = 4'000'000;
  double renormalize_log = 50.0;
};

/// Normalized state at one radius: f^(j) = e^{log_scale} state[j].
struct RaySample {
  double r = 0.0;
  double log_scale = 0.0;
  std::vector<cplx> state;
  double residual = 0.0;

  double log_abs() const { return log_scale + std::log(std::abs(state[0])); }
  double phase() const { return std::arg(state[0]); }
  /// f^(j) / f
  cplx ratio(std::size_t j) const { return state[j] / state[0]; }
};

struct RaySolution {
  double theta = 0.0;
  std::vector<RaySample> samples;  // output radii (plus every step when requested)
  std::size_t steps = 0;
  std::size_t rejected = 0;
  double min_step = std::numeric_limits<double>::infinity();
  double max_step = 0.0;
  double max_residual = 0.0;
  std::size_t series_order = 0;
};

namespace detail {

/// (l+1)(l+2)...(l+j)
inline double rising(std::size_t l, std::size_t j) {
  double p = 1.0;
  for (std::size_t i = 1; i <= j; ++i) p *= static_cast<double>(l + i);
  return p;
}

/// Local Taylor coefficients c_0..c_N of y about the current point.
inline std::vector<cplx> local_series(const std::vector<Jet>& a, const std::vector<cplx>& y, std::size_t n) {
  const std::size_t k = y.size();
  std::vector<cplx> c(n + 1, cplx{0.0});
  double fact = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    if (j > 0) fact *= static_cast<double>(j);
    c[j] = y[j] / fact;
  }
  for (std::size_t m = 0; m + k <= n; ++m) {
    cplx s{0.0};
    for (std::size_t j = 0; j < k; ++j) {
      const Jet& aj = a[j];
      const std::size_t top = std::min(m, aj.order());
      for (std::size_t i = 0; i <= top; ++i) s += aj[i] * c[m - i + j] * rising(m - i, j);
    }
    c[m + k] = -s / rising(m, k);
  }
  return c;
}

/// y^(j)(t) for j = 0..jmax from the local series.
inline std::vector<cplx> series_jet(const std::vector<cplx>& c, cplx t, std::size_t jmax) {
  const std::size_t n = c.size() - 1;
  std::vector<cplx> out(jmax + 1);
  for (std::size_t j = 0; j <= jmax; ++j) {
    cplx acc{0.0};
    for (std::size_t l = n - j + 1; l-- > 0;) acc = acc * t + c[l + j] * rising(l, j);
    out[j] = acc;
  }
  return out;
}

struct StepState {
  double r;
  double log_scale;
  std::vector<cplx> y;
};

inline void renormalize(StepState& st, double threshold) {
  double big = 0.0;
  for (auto& v : st.y) big = std::max(big, std::abs(v));
  if (!(big > 0.0)) throw NumericError("solution state collapsed to zero");
  const double lb = std::log(big);
  if (std::abs(lb) > threshold || threshold <= 0.0) {
    for (auto& v : st.y) v /= big;
    st.log_scale += lb;
  }
}

template <class Ode>
class RayStepper {
 public:
  RayStepper(const Ode& ode, double theta, const SolverOptions& o)
      : ode_(ode), dir_(std::polar(1.0, theta)), o_(o), k_(ode.order()) {
    if (o.series_order < k_ + 2) throw std::invalid_argument("series order must exceed the ODE order by 2");
  }

  /// Advances st to exactly r_target; returns the residual of the last step.
  double advance(StepState& st, double r_target, RaySolution* stats, double& h_hint) const {
    double last_res = 0.0;
    while (st.r < r_target) {
      const cplx z = st.r * dir_;
      const std::size_t n = o_.series_order;
      const auto a = ode_.coefficient_series(z, n - k_);
      const auto c = local_series(a, st.y, n);
      const double remaining = r_target - st.r;
      double h;
      if (o_.fixed_step > 0.0) {
        h = std::min(o_.fixed_step, remaining);
      } else {
        double amp = 0.0;
        for (std::size_t j = 0; j < k_; ++j) amp = std::max(amp, std::abs(c[j]));
        h = std::min(remaining, 2.0 * h_hint);
        for (std::size_t m : {n - 1, n})
          if (std::abs(c[m]) > 0.0) h = std::min(h, std::pow(o_.tail_tol * amp / std::abs(c[m]), 1.0 / double(m)));
        for (int guard = 0; guard < 200; ++guard) {
          double scale = 0.0, hp = 1.0;
          for (std::size_t m = 0; m <= n; ++m, hp *= h) scale = std::max(scale, std::abs(c[m]) * hp);
          const double tail = std::abs(c[n - 1]) * std::pow(h, double(n - 1)) + std::abs(c[n]) * std::pow(h, double(n));
          if (tail <= o_.tail_tol * scale) break;
          h *= 0.8;
        }
      }
      for (;;) {
        if (h < remaining && h < o_.min_step * std::max(1.0, st.r))
          throw NumericError("step size underflow at r = " + std::to_string(st.r) + " on ray theta = " +
                             std::to_string(std::arg(dir_)));
        const bool last = (h >= remaining);
        const double r_new = last ? r_target : st.r + h;
        const cplx t = (r_new - st.r) * dir_;
        auto jet = series_jet(c, t, k_);
        const double res = residual_from_values(ode_.coefficient_values(r_new * dir_), jet);
        if (o_.fixed_step <= 0.0 && !(res <= o_.residual_tol)) {
          h *= 0.5;
          if (stats) ++stats->rejected;
          continue;
        }
        if (stats) {
          ++stats->steps;
          stats->min_step = std::min(stats->min_step, r_new - st.r);
          stats->max_step = std::max(stats->max_step, r_new - st.r);
          stats->max_residual = std::max(stats->max_residual, res);
          if (stats->steps > o_.max_steps) throw NumericError("ray solver exceeded the step budget");
        }
        if (!last) h_hint = h;
        jet.pop_back();
        st.y = std::move(jet);
        st.r = r_new;
        renormalize(st, o_.renormalize_log);
        last_res = res;
        break;
      }
    }
    return last_res;
  }

 private:
  const Ode& ode_;
  cplx dir_;
  SolverOptions o_;
  std::size_t k_;
};

template <class Ode>
void require_ray(const Ode& ode, double theta, double r_start, double r_end) {
  if (!(r_start >= 0.0 && r_end > r_start && r_end < 1.0))
    throw DomainError("ray needs 0 <= r_start < r_end < 1");
  const Sector d = ode.domain();
  if (!d.is_full_disc()) {
    const double t = arg_2pi(std::polar(1.0, theta));
    const double slack = 1e-12;
    const bool inside = (t >= d.alpha() - slack && t <= d.beta() + slack) ||
                        (d.beta() >= kTwoPi - slack && t <= slack);
    if (!inside) throw DomainError("ray theta = " + std::to_string(theta) + " leaves the coefficient domain");
  }
}

}  // namespace detail

/// Integrates along z = r e^{i theta} from r_start to r_end.  init holds
/// f^(j)(r_start e^{i theta}), j < k.  Samples are recorded at every output
/// radius inside (r_start, r_end] and at r_end; with record_steps, at every
/// accepted step as well.
template <class Ode>
RaySolution solve_ray(const Ode& ode, double theta, double r_start, double r_end, const std::vector<cplx>& init,
                      const SolverOptions& o = {}, std::vector<double> outputs = {}, bool record_steps = false) {
  detail::require_ray(ode, theta, r_start, r_end);
  if (init.size() != ode.order()) throw std::invalid_argument("initial data must have k entries");
  RaySolution sol;
  sol.theta = theta;
  sol.series_order = o.series_order;
  detail::StepState st{r_start, 0.0, init};
  detail::renormalize(st, 0.0);
  outputs.push_back(r_end);
  std::sort(outputs.begin(), outputs.end());
  detail::RayStepper<Ode> stepper(ode, theta, o);
  double h_hint = std::max(1e-3, 0.05 * (r_end - r_start));
  for (double target : outputs) {
    if (target <= st.r || target > r_end) continue;
    if (record_steps) {
      while (st.r < target) {
        // One accepted step at a time.
        const double before = st.r;
        detail::StepState probe = st;
        const double cap = std::min(target, before + 2.0 * h_hint);
        double hh = h_hint;
        const double res = stepper.advance(probe, cap, &sol, hh);
        st = probe;
        h_hint = hh;
        sol.samples.push_back({st.r, st.log_scale, st.y, res});
      }
    } else {
      const double res = stepper.advance(st, target, &sol, h_hint);
      sol.samples.push_back({st.r, st.log_scale, st.y, res});
    }
  }
  return sol;
}

// --------------------------------------------------------------------------
// Solutions as analytic maps.

struct SolutionMapOptions {
  double r_max = 1.0 - 1.0 / 32768.0;
  std::vector<double> output_radii;  // hit exactly and stored
  SolverOptions solver;
  std::size_t max_checkpoints = 2048;  // per ray, besides output radii
};

namespace detail {

template <class Ode>
class SolutionCache {
 public:
  SolutionCache(std::shared_ptr<const Ode> ode, std::vector<cplx> seed, SolutionMapOptions o)
      : ode_(std::move(ode)), seed_(std::move(seed)), o_(std::move(o)) {
    if (seed_.size() != ode_->order()) throw std::invalid_argument("seed must have k entries");
    std::sort(o_.output_radii.begin(), o_.output_radii.end());
  }

  Sample sample(cplx z) const {
    double r = std::abs(z);
    if (r == 0.0) return from_state(seed_, 0.0);
    if (r > o_.r_max && r <= o_.r_max * (1.0 + 1e-12)) r = o_.r_max;  // polar() rounding
    if (!(r <= o_.r_max)) throw DomainError("solution map evaluated beyond r_max at " + AnalyticMap::format(z));
    const double theta = std::arg(z);
    const auto ray = get_ray(theta);
    // Last checkpoint at or below r, then integrate the remainder.
    auto it = std::upper_bound(ray->begin(), ray->end(), r, [](double v, const RaySample& s) { return v < s.r; });
    StepState st{0.0, 0.0, seed_};
    if (it != ray->begin()) {
      const auto& cp = *std::prev(it);
      st = {cp.r, cp.log_scale, cp.state};
    }
    if (st.r < r) {
      RayStepper<Ode> stepper(*ode_, theta, o_.solver);
      double hint = 1e-3;
      stepper.advance(st, r, nullptr, hint);
    }
    return from_state(st.y, st.log_scale);
  }

  std::size_t cached_rays() const {
    std::lock_guard<std::mutex> lock(mu_);
    return rays_.size();
  }

 private:
  using Ray = std::vector<RaySample>;

  static Sample from_state(const std::vector<cplx>& y, double log_scale) {
    Sample s;
    if (y[0] == cplx{0.0}) {
      s.zero = true;
      s.log_abs = -std::numeric_limits<double>::infinity();
      // f'(z) = e^{log_scale} y[1]; only meaningful if it does not overflow.
      s.deriv_at_zero = y[1] * std::exp(log_scale);
      return s;
    }
    s.log_abs = log_scale + std::log(std::abs(y[0]));
    s.phase = std::arg(y[0]);
    s.dlog = y[1] / y[0];
    return s;
  }

  std::shared_ptr<const Ray> get_ray(double theta) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = rays_.find(theta);
      if (it != rays_.end()) return it->second;
    }
    auto sol = solve_ray(*ode_, theta, 0.0, o_.r_max, seed_, o_.solver, o_.output_radii, true);
    // Thin the per-step record, always keeping output radii.
    auto ray = std::make_shared<Ray>();
    const std::size_t stride = std::max<std::size_t>(1, sol.samples.size() / std::max<std::size_t>(1, o_.max_checkpoints));
    for (std::size_t i = 0; i < sol.samples.size(); ++i) {
      const auto& s = sol.samples[i];
      const bool is_output = std::binary_search(o_.output_radii.begin(), o_.output_radii.end(), s.r);
      if (is_output || i % stride == 0 || i + 1 == sol.samples.size()) ray->push_back(s);
    }
    std::lock_guard<std::mutex> lock(mu_);
    return rays_.emplace(theta, std::move(ray)).first->second;
  }

  std::shared_ptr<const Ode> ode_;
  std::vector<cplx> seed_;
  SolutionMapOptions o_;
  mutable std::mutex mu_;
  mutable std::map<double, std::shared_ptr<const Ray>> rays_;
};

}  // namespace detail

/// The solution with f^(j)(0) = seed[j], sampled by integrating along the
/// exact ray through each requested point (cached per ray).
template <class Ode>
AnalyticMap solution_as_analytic_map(std::shared_ptr<const Ode> ode, std::vector<cplx> seed,
                                     SolutionMapOptions o = {}, std::string name = "solution") {
  auto cache = std::make_shared<detail::SolutionCache<Ode>>(std::move(ode), std::move(seed), std::move(o));
  return AnalyticMap::from_sampler(std::move(name), [cache](cplx z) { return cache->sample(z); }, true);
}

/// Default seed f(0) = 1, derivatives 0.
inline std::vector<cplx> unit_seed(std::size_t k) {
  std::vector<cplx> s(k, cplx{0.0});
  s[0] = 1.0;
  return s;
}

}  // namespace growthlab

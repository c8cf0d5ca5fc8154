#pragma once

// Growth characteristics of analytic maps: maximum modulus M(r,f), the
// Nevanlinna characteristic T(r,f) = m(r,f) (no poles), the spherical area
// S(r,Omega,f) and the Ahlfors-Shimizu characteristic T0(r,Omega,f).
//
// T0 has two independent routes:
//
//  * area:     T0 = (1/pi) int_0^r int_alpha^beta sd(f)^2 log(r/rho) rho dtheta drho,
//              the radial integral of S(t)/t with the order of integration
//              swapped (sd = spherical derivative);
//  * boundary: since Laplacian log(1+|f|^2) = 4 sd(f)^2, Green's identity
//              turns the area integral into
//                (1/4pi) int_alpha^beta [phi(re^{it}) - phi(0)] dt
//              + (1/4pi) int_0^r [d_n phi on both rays] log(r/rho) drho,
//              phi = log(1+|f|^2).  Only log|f| and f'/f are needed, so it
//              works for maps far outside double range.  The ray terms cancel
//              for the full disc, leaving the classical Ahlfors-Shimizu form.
//
// The boundary route is the default; the area route is kept as an oracle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "growthlab/analytic_map.hpp"
#include "growthlab/errors.hpp"
#include "growthlab/quadrature.hpp"
#include "growthlab/sector.hpp"

namespace growthlab {

enum class CurveKind { max_modulus, nevanlinna_T, ahlfors_shimizu_T0 };

inline std::string_view to_string(CurveKind k) {
  switch (k) {
    case CurveKind::max_modulus: return "max_modulus";
    case CurveKind::nevanlinna_T: return "nevanlinna_T";
    case CurveKind::ahlfors_shimizu_T0: return "ahlfors_shimizu_T0";
  }
  return "?";
}

inline CurveKind curve_kind_from_string(std::string_view s) {
  if (s == "max_modulus" || s == "M") return CurveKind::max_modulus;
  if (s == "nevanlinna_T" || s == "T") return CurveKind::nevanlinna_T;
  if (s == "ahlfors_shimizu_T0" || s == "T0") return CurveKind::ahlfors_shimizu_T0;
  throw ConfigError("unknown curve kind '" + std::string(s) + "'");
}

/// Samples of a characteristic against radius.  When log_scale is set, value
/// holds the natural log of the characteristic (max-modulus curves are always
/// stored as log M).
struct GrowthCurve {
  CurveKind kind = CurveKind::nevanlinna_T;
  double alpha = 0.0;
  double beta = kTwoPi;
  bool log_scale = false;
  std::vector<double> r;
  std::vector<double> value;

  std::size_t size() const { return r.size(); }

  void validate() const {
    if (r.size() != value.size()) throw std::invalid_argument("curve radius/value length mismatch");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!(r[i] > 0.0 && r[i] < 1.0)) throw std::invalid_argument("curve radius outside (0,1)");
      if (i > 0 && !(r[i] > r[i - 1])) throw std::invalid_argument("curve radii not strictly increasing");
      if (std::isnan(value[i])) throw std::invalid_argument("curve value is NaN");
    }
  }
};

enum class T0Method { boundary, area };

struct CharacteristicOptions {
  double rel_tol_T = 1e-8;
  double rel_tol_area = 1e-6;
  double abs_tol = 1e-13;
  std::size_t angular_cap = std::size_t{1} << 16;
  std::size_t radial_cap = std::size_t{1} << 12;
  T0Method t0_method = T0Method::boundary;
  /// When non-empty, angular integrals use this fixed partition instead of
  /// adaptive refinement (set by build_curve for expensive maps).
  std::vector<double> arc_partition;
};

namespace detail {

inline quad::Options angular_opts(const CharacteristicOptions& o, double rel) {
  quad::Options q;
  q.abs_tol = o.abs_tol;
  q.rel_tol = rel;
  q.max_evals = o.angular_cap;
  q.initial_panels = 16;
  return q;
}

inline quad::Options radial_opts(const CharacteristicOptions& o, double rel) {
  quad::Options q;
  q.abs_tol = o.abs_tol;
  q.rel_tol = rel;
  q.max_evals = o.radial_cap;
  q.initial_panels = 4;
  return q;
}

inline void require_radius(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("radius must lie in (0, 1), got " + std::to_string(r));
}

struct ArcPeak {
  double theta = 0.0;
  double log_abs = -std::numeric_limits<double>::infinity();
};

/// Location and value of max log|f| on the arc, coarse scan plus zoom.
/// Expensive maps (each new angle is a fresh ODE ray) get a coarser scan.
inline ArcPeak arc_peak(const AnalyticMap& f, double r, double lo, double hi, bool periodic) {
  auto logabs = [&](double t) {
    const Sample s = f.sample(std::polar(r, t));
    return s.zero ? -std::numeric_limits<double>::infinity() : s.log_abs;
  };
  const bool cheap = !f.expensive();
  const std::size_t n0 = cheap ? 1025 : 257, candidates = cheap ? 8 : 2;
  const int zoom_steps = cheap ? 40 : 12, fan = cheap ? 8 : 4;
  std::vector<double> th(n0), val(n0);
  for (std::size_t i = 0; i < n0; ++i) {
    th[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n0 - 1);
    val[i] = logabs(th[i]);
  }
  std::vector<std::size_t> idx(n0);
  for (std::size_t i = 0; i < n0; ++i) idx[i] = i;
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(candidates), idx.end(),
                    [&](auto x, auto y) { return val[x] > val[y]; });
  ArcPeak best{th[idx[0]], val[idx[0]]};
  const double h0 = (hi - lo) / static_cast<double>(n0 - 1);
  for (std::size_t c = 0; c < candidates; ++c) {
    double center = th[idx[c]], half = h0, cur = val[idx[c]];
    for (int it = 0; it < zoom_steps && half > 1e-15; ++it) {
      double bc = center, bv = cur;
      for (int j = -fan; j <= fan; ++j) {
        double t = center + half * static_cast<double>(j) / fan;
        if (!periodic) t = std::clamp(t, lo, hi);
        const double v = logabs(t);
        if (v > bv) bv = v, bc = t;
      }
      const double gain = bv - cur;
      center = bc;
      cur = bv;
      half /= cheap ? 4.0 : 2.0;
      if (gain < 1e-9 && half < 1e-12) break;
    }
    if (cur > best.log_abs) best = {center, cur};
  }
  if (periodic) {
    best.theta = std::fmod(best.theta - lo, hi - lo);
    if (best.theta < 0.0) best.theta += hi - lo;
    best.theta += lo;
  }
  return best;
}

/// Initial partition of [a, b] graded toward the peak of |f| on the arc, so
/// that boundary layers of width ~ (1 - r) are seen by the first panels.
inline std::vector<double> arc_breakpoints(const AnalyticMap& f, double r, double a, double b, bool periodic) {
  const double peak = arc_peak(f, r, a, b, periodic).theta;
  const double finest = 0.25 * (1.0 - r);
  std::vector<double> e = quad::graded_breakpoints(a, b, peak, finest, 16);
  if (periodic) {
    for (double wrap : {peak - (b - a), peak + (b - a)}) {
      auto extra = quad::graded_breakpoints(a, b, wrap, finest, 1);
      e.insert(e.end(), extra.begin(), extra.end());
    }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
  }
  return e;
}

template <class F>
quad::Result arc_integral(const AnalyticMap& map, double r, F&& f, double a, double b, const CharacteristicOptions& o,
                          double rel) {
  if (!o.arc_partition.empty()) return quad::integrate_on(f, o.arc_partition);
  const auto edges = arc_breakpoints(map, r, a, b, b - a >= kTwoPi - 1e-15);
  return quad::integrate_from(f, edges, angular_opts(o, rel));
}

/// Radial partition of [0, r] graded toward r.
inline std::vector<double> radial_breakpoints(double r) {
  return quad::graded_breakpoints(0.0, r, r, 0.125 * (1.0 - r), 4);
}

}  // namespace detail

/// log M(r, f) over the arc |z| = r inside the sector (full disc by default).
inline double max_modulus(const AnalyticMap& f, double r, const Sector& domain = Sector::full_disc()) {
  detail::require_radius(r);
  const double a = domain.alpha(), b = domain.beta();
  const double guard = domain.is_full_disc() ? 0.0 : 1e-12 * (b - a);
  const double lo = a + guard, hi = b - guard;
  if (!(hi > lo)) throw DomainError("empty arc");
  return detail::arc_peak(f, r, lo, hi, domain.is_full_disc()).log_abs;
}

/// T(r, f) = (1/2pi) int log^+ |f(re^{it})| dt for analytic f.
inline double nevanlinna_t(const AnalyticMap& f, double r, const CharacteristicOptions& o = {}) {
  detail::require_radius(r);
  auto integrand = [&](double t) {
    const Sample s = f.sample(std::polar(r, t));
    return s.zero ? 0.0 : std::max(0.0, s.log_abs);
  };
  return detail::arc_integral(f, r, integrand, 0.0, kTwoPi, o, o.rel_tol_T).value / kTwoPi;
}

/// S(r, Omega, f) = (1/pi) iint_{Omega(r)} sd(f)^2 dsigma by nested adaptive quadrature.
inline double spherical_area(const AnalyticMap& f, double r, const Sector& s, const CharacteristicOptions& o = {}) {
  detail::require_radius(r);
  auto inner = [&](double rho) {
    auto ang = [&](double t) {
      const double sd = f.sample(std::polar(rho, t)).spherical_derivative();
      return sd * sd;
    };
    return rho * quad::integrate(ang, s.alpha(), s.beta(), detail::angular_opts(o, o.rel_tol_area * 0.1)).value;
  };
  return quad::integrate_from(inner, detail::radial_breakpoints(r), detail::radial_opts(o, o.rel_tol_area)).value / kPi;
}

/// S(r, Omega, f) from the boundary form (arc flux plus both ray fluxes).
inline double spherical_area_boundary(const AnalyticMap& f, double r, const Sector& s,
                                      const CharacteristicOptions& o = {}) {
  detail::require_radius(r);
  auto arc = [&](double t) {
    const cplx n = std::polar(1.0, t);
    return r * f.sample(r * n).normal_derivative_log1p_abs2(n);
  };
  double total = detail::arc_integral(f, r, arc, s.alpha(), s.beta(), o, o.rel_tol_T).value;
  if (!s.is_full_disc()) {
    const cplx ea = std::polar(1.0, s.alpha()), eb = std::polar(1.0, s.beta());
    auto rays = [&](double rho) {
      return f.sample(rho * eb).normal_derivative_log1p_abs2(cplx{0, 1} * eb) +
             f.sample(rho * ea).normal_derivative_log1p_abs2(cplx{0, -1} * ea);
    };
    total += quad::integrate_from(rays, detail::radial_breakpoints(r), detail::radial_opts(o, o.rel_tol_T)).value;
  }
  return total / (4.0 * kPi);
}

/// T0(r, Omega, f) = int_0^r S(t, Omega, f) / t dt.
inline double ahlfors_shimizu_t0(const AnalyticMap& f, double r, const Sector& s, const CharacteristicOptions& o = {}) {
  detail::require_radius(r);
  if (o.t0_method == T0Method::area) {
    auto inner = [&](double rho) {
      auto ang = [&](double t) {
        const double sd = f.sample(std::polar(rho, t)).spherical_derivative();
        return sd * sd;
      };
      return rho * std::log(r / rho) *
             quad::integrate(ang, s.alpha(), s.beta(), detail::angular_opts(o, o.rel_tol_area * 0.1)).value;
    };
    return quad::integrate_from(inner, detail::radial_breakpoints(r), detail::radial_opts(o, o.rel_tol_area)).value / kPi;
  }
  const double phi0 = f.sample(cplx{0.0}).log1p_abs2();
  auto arc = [&](double t) { return f.sample(std::polar(r, t)).log1p_abs2() - phi0; };
  double total = detail::arc_integral(f, r, arc, s.alpha(), s.beta(), o, o.rel_tol_T).value;
  if (!s.is_full_disc()) {
    const cplx ea = std::polar(1.0, s.alpha()), eb = std::polar(1.0, s.beta());
    const cplx na = cplx{0, -1} * ea, nb = cplx{0, 1} * eb;
    // rho = r s^2 removes the log(r/rho) endpoint singularity.
    auto rays = [&](double sv) {
      const double rho = r * sv * sv;
      const double flux =
          f.sample(rho * eb).normal_derivative_log1p_abs2(nb) + f.sample(rho * ea).normal_derivative_log1p_abs2(na);
      return flux * (-2.0 * std::log(sv)) * 2.0 * r * sv;
    };
    auto ro = detail::radial_opts(o, o.rel_tol_T);
    ro.abs_tol = std::max(o.abs_tol, 1e-12 * std::abs(total));
    total += quad::integrate_from(rays, quad::graded_breakpoints(0.0, 1.0, 1.0, 0.125 * (1.0 - r), 4), ro).value;
  }
  return total / (4.0 * kPi);
}

/// m(r, f^{(k)}/f) = (1/2pi) int log^+ |f^{(k)}/f| dt.
inline double log_derivative_proximity(const AnalyticMap& f, std::size_t k, double r,
                                       const CharacteristicOptions& o = {}) {
  detail::require_radius(r);
  if (k < 1) throw std::invalid_argument("log_derivative_proximity: k must be >= 1");
  auto integrand = [&](double t) {
    const cplx z = std::polar(r, t);
    cplx ratio;
    if (k == 1 && !f.has_series()) {
      const Sample s = f.sample(z);
      if (s.zero) return 0.0;
      ratio = s.dlog;
    } else {
      ratio = f.derivative_ratios(z, k)[k];
    }
    const double a = std::abs(ratio);
    return a > 1.0 ? std::log(a) : 0.0;
  };
  return detail::arc_integral(f, r, integrand, 0.0, kTwoPi, o, o.rel_tol_T).value / kTwoPi;
}

/// r_i = 1 - 2^{-i/4}, i = first..last.
inline std::vector<double> default_grid(int first = 4, int last = 60) {
  std::vector<double> g;
  for (int i = first; i <= last; ++i) g.push_back(1.0 - std::exp2(-static_cast<double>(i) / 4.0));
  return g;
}

/// Evaluates one characteristic on an increasing grid.
inline GrowthCurve build_curve(const AnalyticMap& f, CurveKind kind, const Sector& domain,
                               const std::vector<double>& grid, CharacteristicOptions o = {}) {
  if (grid.empty()) throw std::invalid_argument("build_curve: empty radius grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 1.0)) throw DomainError("build_curve: grid radius outside (0,1)");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("build_curve: grid not strictly increasing");
  }
  GrowthCurve c;
  c.kind = kind;
  c.alpha = domain.alpha();
  c.beta = domain.beta();
  c.log_scale = (kind == CurveKind::max_modulus);
  c.r = grid;
  c.value.resize(grid.size());

  // Expensive maps: refine the angular partition once at the largest radius
  // (the hardest integrand) and reuse its nodes for every radius.
  if (f.expensive() && o.arc_partition.empty() && kind != CurveKind::max_modulus) {
    const double rmax = grid.back();
    const double a = (kind == CurveKind::nevanlinna_T) ? 0.0 : domain.alpha();
    const double b = (kind == CurveKind::nevanlinna_T) ? kTwoPi : domain.beta();
    auto probe = [&](double t) {
      const Sample s = f.sample(std::polar(rmax, t));
      return kind == CurveKind::nevanlinna_T ? (s.zero ? 0.0 : std::max(0.0, s.log_abs)) : s.log1p_abs2();
    };
    const auto seed = detail::arc_breakpoints(f, rmax, a, b, b - a >= kTwoPi - 1e-15);
    // Solver noise (residual tolerance ~1e-9) floors the attainable accuracy,
    // so the probe only needs to resolve the shape of the integrand.
    auto po = detail::angular_opts(o, std::max(o.rel_tol_T, 1e-7));
    po.throw_on_failure = false;
    o.arc_partition = quad::integrate_from(probe, seed, po).breakpoints;
  }

  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      switch (kind) {
        case CurveKind::max_modulus: c.value[i] = max_modulus(f, grid[i], domain); break;
        case CurveKind::nevanlinna_T: c.value[i] = nevanlinna_t(f, grid[i], o); break;
        case CurveKind::ahlfors_shimizu_T0: c.value[i] = ahlfors_shimizu_t0(f, grid[i], domain, o); break;
      }
    } catch (const std::exception& e) {
      throw NumericError("build_curve failed at r = " + std::to_string(grid[i]) + ": " + e.what());
    }
  }
  // T and T0 are integrals of nonnegative densities: tolerate quadrature-level
  // jitter, reject genuine decreases.
  if (kind != CurveKind::max_modulus) {
    for (std::size_t i = 1; i < c.value.size(); ++i) {
      if (c.value[i] < c.value[i - 1]) {
        const double slack = 1e-6 * std::max(1.0, std::abs(c.value[i - 1]));
        if (c.value[i - 1] - c.value[i] > slack)
          throw NumericError("characteristic decreased between r = " + std::to_string(c.r[i - 1]) + " and " +
                             std::to_string(c.r[i]));
        c.value[i] = c.value[i - 1];
      }
    }
  }
  return c;
}

struct GrowthClassification {
  GrowthClass cls = GrowthClass::bounded;
  double tail_variation = 0.0;  // relative spread over the last decade of 1 - r
  double ratio_growth = 0.0;    // ratio increase factor over the upper half of the window
  bool ratio_monotone = false;
  std::vector<double> ratios;   // value / log(1/(1-r))
};

/// Heuristic classification from a finite curve: bounded if the tail is flat
/// to 1%, admissible if value / log(1/(1-r)) increases monotonically by at
/// least 2x over the upper half of the window, non-admissible otherwise.
inline GrowthClassification classify_growth(const GrowthCurve& c) {
  c.validate();
  if (c.size() < 8 || c.r.back() < 1.0 - 1e-3)
    throw InsufficientData("classify_growth needs >= 8 samples reaching r >= 1 - 1e-3");
  GrowthClassification g;
  std::vector<double> v(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) v[i] = c.log_scale ? std::max(0.0, c.value[i]) : c.value[i];
  const double tail_start = 1.0 - 10.0 * (1.0 - c.r.back());
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.r[i] >= tail_start) lo = std::min(lo, v[i]), hi = std::max(hi, v[i]);
  g.tail_variation = (hi - lo) / std::max(std::abs(hi), 1e-300);
  if (hi == lo) g.tail_variation = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) g.ratios.push_back(v[i] / std::log(1.0 / (1.0 - c.r[i])));
  if (g.tail_variation < 0.01) {
    g.cls = GrowthClass::bounded;
    return g;
  }
  const double lmax = std::log(1.0 / (1.0 - c.r.back()));
  std::size_t first = 0;
  while (first < c.size() && std::log(1.0 / (1.0 - c.r[first])) < 0.5 * lmax) ++first;
  g.ratio_monotone = true;
  for (std::size_t i = first + 1; i < c.size(); ++i)
    if (g.ratios[i] < g.ratios[i - 1] * (1.0 - 1e-9)) g.ratio_monotone = false;
  g.ratio_growth = g.ratios.back() / std::max(g.ratios[std::min(first, c.size() - 1)], 1e-300);
  g.cls = (g.ratio_monotone && g.ratio_growth >= 2.0) ? GrowthClass::admissible : GrowthClass::non_admissible;
  return g;
}

// --------------------------------------------------------------------------
// CSV: header `r,value,log_scale`, 17 significant digits.

inline void write_curve_csv(std::ostream& os, const GrowthCurve& c) {
  os << "r,value,log_scale\n" << std::setprecision(17);
  for (std::size_t i = 0; i < c.size(); ++i) os << c.r[i] << ',' << c.value[i] << ',' << (c.log_scale ? 1 : 0) << '\n';
}

inline void write_curve_csv(const std::string& path, const GrowthCurve& c) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_curve_csv(os, c);
}

inline GrowthCurve read_curve_csv(std::istream& is, CurveKind kind = CurveKind::nevanlinna_T) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("r,value,log_scale", 0) != 0)
    throw std::runtime_error("curve CSV: missing header r,value,log_scale");
  GrowthCurve c;
  c.kind = kind;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b, d;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, d))
      throw std::runtime_error("curve CSV: malformed row '" + line + "'");
    c.r.push_back(std::stod(a));
    c.value.push_back(std::stod(b));
    const bool lg = std::stoi(d) != 0;
    if (first) c.log_scale = lg, first = false;
    else if (lg != c.log_scale) throw std::runtime_error("curve CSV: mixed log_scale flags");
  }
  c.validate();
  return c;
}

inline GrowthCurve read_curve_csv(const std::string& path, CurveKind kind = CurveKind::nevanlinna_T) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_curve_csv(is, kind);
}

}  // namespace growthlab

namespace growthlab {

// --------------------------------------------------------------------------
// Maps of double-exponential size, f = exp(exp(G)).  Even log|f| =
// e^{Re G} cos(Im G) overflows once Re G passes ~709, so T0 is returned on
// log scale and the arc integral is taken with the factor e^{max Re G}
// pulled out.

struct LogLogMap {
  std::string name;
  std::function<cplx(cplx)> g;                  // G(z) = log log f
  std::function<Jet(const Jet&)> g_series;      // same, on jets
  /// Optional G(r e^{i(t + dt)}) evaluated from (r, t, dt) directly.  Near a
  /// boundary singularity G turns by ~1e12 radians per radian of t, so both
  /// forming z and rounding t + dt would swamp the phase.
  std::function<cplx(double, double, double)> g_polar;

  cplx at(double r, double t, double dt = 0.0) const {
    return g_polar ? g_polar(r, t, dt) : g(std::polar(r, t + dt));
  }

  /// The same function as an ordinary map (valid while Re G stays below ~700).
  AnalyticMap as_map() const {
    auto gs = g_series;
    return AnalyticMap::from_log(name, [gs](const Jet& z) { return exp(gs(z)); });
  }
};

namespace detail {

/// e^{-m} log(1 + |f|^2) with log|f| = e^{Re G} cos(Im G).
inline double scaled_log1p_abs2(cplx G, double m) {
  const double c = std::cos(G.imag());
  if (G.real() < 700.0) {
    const double ell = std::exp(G.real()) * c;
    const double a = std::abs(ell);
    const double v = (ell > 0.0 ? 2.0 * ell : 0.0) + std::log1p(std::exp(-2.0 * a));
    return v * std::exp(-m);
  }
  return c > 0.0 ? 2.0 * std::exp(G.real() - m) * c : 0.0;
}

/// Windowed arc integral of e^{-m} log(1+|f|^2) for large m: only the arc
/// where Re G > m - 50 contributes, and panels are split where cos(Im G)
/// changes sign so that every panel is smooth.
inline double scaled_arc_integral(const LogLogMap& f, double r, double a, double b, double peak, double m,
                                  double rel_tol) {
  // Integrate in the offset x = t - peak so that node spacing far below
  // ulp(peak) stays resolved.
  auto G = [&](double x) { return f.at(r, peak, x); };
  a -= peak;
  b -= peak;
  const double cut = m - 50.0;
  std::vector<double> edges{0.0};
  for (int side : {-1, 1}) {
    double t = 0.0;
    for (;;) {
      // Step so that Im G moves by at most about pi/4.
      const double dt0 = 1e-6 * (1.0 - r);
      const double slope = std::abs((G(t + dt0) - G(t - dt0)).imag()) / (2.0 * dt0);
      const double grow = std::abs((G(t + dt0) - G(t - dt0)).real()) / (2.0 * dt0);
      double h = 0.25 * kPi / std::max(slope, 1e-300);
      h = std::min(h, 5.0 / std::max(grow, 1e-300));
      h = std::min(h, 0.01 * (b - a));
      h = std::max(h, 1e-15);
      const double next = t + side * h;
      if (side < 0 && next <= a) { edges.push_back(a); break; }
      if (side > 0 && next >= b) { edges.push_back(b); break; }
      edges.push_back(next);
      t = next;
      if (G(t).real() < cut) break;
    }
  }
  std::sort(edges.begin(), edges.end());
  // Insert the sign changes of cos(Im G) inside each walk interval.
  std::vector<double> panels;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    panels.push_back(edges[i]);
    const double lo = edges[i], hi = edges[i + 1];
    const double il = G(lo).imag(), ih = G(hi).imag();
    const double kl = std::floor((il - kPi / 2) / kPi), kh = std::floor((ih - kPi / 2) / kPi);
    for (double k = std::min(kl, kh) + 1; k <= std::max(kl, kh); k += 1.0) {
      const double target = kPi / 2 + k * kPi;
      double x0 = lo, x1 = hi;
      const bool up = ih > il;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (x0 + x1);
        if ((G(mid).imag() < target) == up) x0 = mid; else x1 = mid;
      }
      panels.push_back(0.5 * (x0 + x1));
    }
  }
  panels.push_back(edges.back());
  std::sort(panels.begin(), panels.end());
  panels.erase(std::unique(panels.begin(), panels.end()), panels.end());
  auto integrand = [&](double t) { return scaled_log1p_abs2(G(t), m); };
  quad::Options q;
  q.rel_tol = rel_tol;
  q.abs_tol = 1e-300;
  q.max_evals = std::max<std::size_t>(std::size_t{1} << 20, 64 * panels.size());
  return quad::integrate_from(integrand, panels, q).value;
}

}  // namespace detail

/// log T0(r, Omega, f) for f = exp(exp(G)).
inline double log_ahlfors_shimizu_t0(const LogLogMap& f, double r, const Sector& s, const CharacteristicOptions& o = {}) {
  detail::require_radius(r);
  // Peak of Re G on the arc.
  double peak = s.alpha(), m = -std::numeric_limits<double>::infinity();
  constexpr int n0 = 2049;
  for (int i = 0; i < n0; ++i) {
    const double t = s.alpha() + (s.beta() - s.alpha()) * i / (n0 - 1.0);
    const double v = f.at(r, t).real();
    if (v > m) m = v, peak = t;
  }
  for (double half = (s.beta() - s.alpha()) / (n0 - 1.0); half > 1e-15; half *= 0.5) {
    for (double t : {peak - half, peak + half}) {
      if (t < s.alpha() || t > s.beta()) continue;
      const double v = f.at(r, t).real();
      if (v > m) m = v, peak = t;
    }
  }
  const AnalyticMap plain = f.as_map();
  if (m < 20.0) return std::log(ahlfors_shimizu_t0(plain, r, s, o));

  const double arc = detail::scaled_arc_integral(f, r, s.alpha(), s.beta(), peak, m, 1e-7);
  // Ray fluxes and the value at the origin live in ordinary range.
  double rest = -(s.beta() - s.alpha()) * plain.sample(cplx{0.0}).log1p_abs2();
  if (!s.is_full_disc()) {
    const cplx ea = std::polar(1.0, s.alpha()), eb = std::polar(1.0, s.beta());
    const cplx na = cplx{0, -1} * ea, nb = cplx{0, 1} * eb;
    auto rays = [&](double sv) {
      const double rho = r * sv * sv;
      const double flux = plain.sample(rho * eb).normal_derivative_log1p_abs2(nb) +
                          plain.sample(rho * ea).normal_derivative_log1p_abs2(na);
      return flux * (-2.0 * std::log(sv)) * 2.0 * r * sv;
    };
    rest += quad::integrate_from(rays, quad::graded_breakpoints(0.0, 1.0, 1.0, 0.125 * (1.0 - r), 4),
                                 detail::radial_opts(o, o.rel_tol_T))
                .value;
  }
  const double total_scaled = arc + rest * std::exp(-m);
  if (!(total_scaled > 0.0)) throw NumericError("log T0: nonpositive scaled integral");
  return m + std::log(total_scaled) - std::log(4.0 * kPi);
}

/// T0 curve of a double-exponential map, stored as log T0.
inline GrowthCurve build_log_t0_curve(const LogLogMap& f, const Sector& s, const std::vector<double>& grid,
                                      const CharacteristicOptions& o = {}) {
  if (grid.empty()) throw std::invalid_argument("build_curve: empty radius grid");
  GrowthCurve c;
  c.kind = CurveKind::ahlfors_shimizu_T0;
  c.alpha = s.alpha();
  c.beta = s.beta();
  c.log_scale = true;
  c.r = grid;
  for (double r : grid) {
    try {
      c.value.push_back(log_ahlfors_shimizu_t0(f, r, s, o));
    } catch (const std::exception& e) {
      throw NumericError("build_curve failed at r = " + std::to_string(r) + ": " + e.what());
    }
  }
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c.value[i] < c.value[i - 1]) {
      if (c.value[i - 1] - c.value[i] > 1e-6) throw NumericError("log T0 decreased at r = " + std::to_string(c.r[i]));
      c.value[i] = c.value[i - 1];
    }
  }
  c.validate();
  return c;
}

}  // namespace growthlab

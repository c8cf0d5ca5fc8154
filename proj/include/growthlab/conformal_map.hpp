#pragma once

// The conformal map of a sector onto the unit disc,
//
//   u(z) = (w^{2a} + 2 w^{a} - 1) / (w^{2a} - 2 w^{a} - 1),  w = z e^{-i theta0},
//   a = pi / (2 delta),
//
// its inverse z(u) = e^{i theta0} ((-(1+u) + sqrt(2(1+u^2))) / (1-u))^{2 delta / pi},
// derivative jets of z(u) and V = 1/z', and the geometric constants that
// relate sub-regions of the sector to discs |u| < rho.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "growthlab/analytic_map.hpp"
#include "growthlab/errors.hpp"
#include "growthlab/sector.hpp"
#include "growthlab/series.hpp"

namespace growthlab {

/// Maps within this distance of |u| = 1 are refused.
inline constexpr double kUnitCircleGuard = 1e-12;

namespace detail {

inline void require_mappable(const Sector& s) {
  if (!s.mappable()) throw DomainError("conformal map needs 0 < beta - alpha < 2*pi");
}

inline void require_open_disc(cplx u) {
  if (!(std::abs(u) < 1.0 - kUnitCircleGuard))
    throw DomainError("point " + AnalyticMap::format(u) + " is not inside the open unit disc");
}

/// z(u) on a generic scalar (cplx or Jet); principal branches throughout.
template <class T>
T inverse_map_expr(const Sector& s, const T& u) {
  using std::pow;
  using std::sqrt;
  const T w = (-(1.0 + u) + sqrt(2.0 * (1.0 + u * u))) / (1.0 - u);
  return std::polar(1.0, s.theta0()) * pow(w, cplx{2.0 * s.delta() / kPi});
}

}  // namespace detail

inline cplx map_to_disc(const Sector& s, cplx z) {
  detail::require_mappable(s);
  if (!s.contains(z)) throw DomainError("point " + AnalyticMap::format(z) + " is outside the open sector");
  // Bisector-relative argument lies in (-delta, delta), away from the cut.
  const cplx lw = std::log(z * std::polar(1.0, -s.theta0()));
  const double a = kPi / (2.0 * s.delta());
  const cplx wa = std::exp(a * lw);
  const cplx w2a = wa * wa;
  const cplx den = w2a - 2.0 * wa - 1.0;
  if (std::abs(den) < 1e-300) throw NumericError("conformal map denominator vanished");
  return (w2a + 2.0 * wa - 1.0) / den;
}

inline cplx map_to_sector(const Sector& s, cplx u) {
  detail::require_mappable(s);
  detail::require_open_disc(u);
  return detail::inverse_map_expr(s, u);
}

/// Taylor coefficients of z(u + t) to the given order (no order cap).
inline Jet map_series(const Sector& s, cplx u, std::size_t order) {
  detail::require_mappable(s);
  detail::require_open_disc(u);
  return detail::inverse_map_expr(s, Jet::variable(u, order));
}

/// z(U) for a jet argument U (used to pull maps back to the disc).
inline Jet map_series(const Sector& s, const Jet& u) {
  detail::require_mappable(s);
  detail::require_open_disc(u.value());
  return detail::inverse_map_expr(s, u);
}

/// Taylor coefficients of V(u + t) = 1 / z'(u + t) to the given order.
inline Jet reciprocal_derivative_series(const Sector& s, cplx u, std::size_t order) {
  const Jet zs = map_series(s, u, order + 1);
  const Jet dz = derivative(zs);
  if (std::abs(dz[0]) < 1e-300) throw NumericError("z'(u) vanished at u = " + AnalyticMap::format(u));
  return 1.0 / dz;
}

struct MapJet {
  cplx u;
  std::vector<cplx> z_derivs;  // z, z', ..., z^{(m)}
  std::vector<cplx> v_derivs;  // V, V', ..., V^{(m-1)}
};

inline MapJet map_jet(const Sector& s, cplx u, std::size_t m, std::size_t max_order = 12) {
  if (m < 1 || m > max_order)
    throw DomainError("map_jet order must lie in [1, " + std::to_string(max_order) + "]");
  const Jet zs = map_series(s, u, m);
  const Jet dz = derivative(zs);
  if (std::abs(dz[0]) < 1e-300) throw NumericError("z'(u) vanished at u = " + AnalyticMap::format(u));
  const Jet v = 1.0 / dz;
  MapJet jet{u, {}, {}};
  for (std::size_t k = 0; k <= m; ++k) jet.z_derivs.push_back(zs.derivative(k));
  for (std::size_t k = 0; k < m; ++k) jet.v_derivs.push_back(v.derivative(k));
  return jet;
}

struct ShrinkConstant {
  double b;
};

/// b = eps / (2^{pi/(2 delta) + 1} delta).
inline ShrinkConstant shrink_constant(const Sector& s, double epsilon) {
  detail::require_mappable(s);
  const double d = s.delta();
  if (!(epsilon > 0.0 && epsilon < d)) throw DomainError("shrink constant needs 0 < epsilon < delta");
  return ShrinkConstant{epsilon / (std::pow(2.0, kPi / (2.0 * d) + 1.0) * d)};
}

struct InclusionReport {
  // Forward: images of {1/2 < |z| < r, |arg z - theta0| < delta - eps}.
  std::size_t forward_samples = 0;
  std::size_t forward_violations = 0;
  double max_abs_u = 0.0;
  double forward_bound = 0.0;  // 1 - b (1 - r)
  // Reverse: preimages of |u| < rho must satisfy |z| < 1 - delta (1 - rho) / (8 pi).
  std::size_t reverse_samples = 0;
  std::size_t reverse_violations = 0;
  double worst_reverse_margin = 0.0;  // min over samples of bound - |z|
  // Informational: images of the same angular window at |z| <= 1/2.
  double max_abs_u_inner = 0.0;

  bool ok() const { return forward_violations == 0 && reverse_violations == 0; }
};

/// Samples the annular sub-sector on a tensor grid (about `samples` points)
/// and checks both inclusions.  Violations are counted, never thrown.
inline InclusionReport check_inclusions(const Sector& s, double epsilon, double r, std::size_t samples,
                                        const std::vector<double>& rho_grid = {0.1, 0.3, 0.5, 0.7, 0.8, 0.9, 0.95,
                                                                               0.99}) {
  detail::require_mappable(s);
  if (!(r > 0.5 && r < 1.0)) throw DomainError("inclusion check needs r in (1/2, 1)");
  const double b = shrink_constant(s, epsilon).b;
  const double d = s.delta();
  InclusionReport rep;
  rep.forward_bound = 1.0 - b * (1.0 - r);

  const auto side = static_cast<std::size_t>(std::max(2.0, std::ceil(std::sqrt(static_cast<double>(samples)))));
  const double half_width = d - epsilon;
  // Open region: stay strictly inside both the radial and angular bounds,
  // but include points arbitrarily close to them.
  for (std::size_t i = 0; i < side; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(side);
    const double rad = 0.5 + (r - 0.5) * (i + 1 == side ? 1.0 - 1e-12 : t);
    for (std::size_t j = 0; j < side; ++j) {
      const double sj = -1.0 + 2.0 * (static_cast<double>(j) + 0.5) / static_cast<double>(side);
      const double edge = (j == 0) ? -(1.0 - 1e-12) : (j + 1 == side ? 1.0 - 1e-12 : sj);
      const cplx z = std::polar(rad, s.theta0() + edge * half_width);
      const double au = std::abs(map_to_disc(s, z));
      ++rep.forward_samples;
      rep.max_abs_u = std::max(rep.max_abs_u, au);
      if (!(au < rep.forward_bound)) ++rep.forward_violations;
      const cplx zin = std::polar(0.5 * rad / r, s.theta0() + edge * half_width);
      rep.max_abs_u_inner = std::max(rep.max_abs_u_inner, std::abs(map_to_disc(s, zin)));
    }
  }

  rep.worst_reverse_margin = 1.0;
  for (double rho : rho_grid) {
    const double zbound = 1.0 - d * (1.0 - rho) / (8.0 * kPi);
    for (std::size_t i = 0; i < side; ++i) {
      const double rad = rho * (i + 1 == side ? 1.0 - 1e-12 : (static_cast<double>(i) + 0.5) / static_cast<double>(side));
      for (std::size_t j = 0; j < side; ++j) {
        const double phi = kTwoPi * static_cast<double>(j) / static_cast<double>(side);
        const cplx z = map_to_sector(s, std::polar(rad, phi));
        ++rep.reverse_samples;
        const double rel_arg = std::abs(std::arg(z * std::polar(1.0, -s.theta0())));
        const double margin = zbound - std::abs(z);
        rep.worst_reverse_margin = std::min(rep.worst_reverse_margin, margin);
        if (!(margin > 0.0) || !(rel_arg < d)) ++rep.reverse_violations;
      }
    }
  }
  return rep;
}

/// F(u) = f(z(u)) on the unit disc.
inline AnalyticMap pullback(const AnalyticMap& f, const Sector& s) {
  detail::require_mappable(s);
  const std::string name = f.name() + " o z(u)";
  if (f.has_log_series())
    return AnalyticMap::from_log(name, [f, s](const Jet& u) { return f.log_series(map_series(s, u)); });
  if (f.has_series())
    return AnalyticMap::from_value(name, [f, s](const Jet& u) { return f.series(map_series(s, u)); });
  return AnalyticMap::from_sampler(
      name,
      [f, s](cplx u) {
        const Jet zs = map_series(s, u, 1);
        Sample smp = f.sample(zs[0]);
        if (smp.zero)
          smp.deriv_at_zero *= zs[1];
        else
          smp.dlog *= zs[1];
        return smp;
      },
      f.expensive());
}

}  // namespace growthlab

#pragma once

// Second-order equations with a known double-exponential solution,
//
//   f = exp(exp(g)),  g = c (1 - z e^{-i theta0})^{-s},
//   f'' + A_1 f' + A_0 f = 0,  A_0 = -e^g (e^g g'^2 + g'' + g'^2 + A_1 g').
//
// A_0 has [1,1]-order s - 1 in any sector around theta0 while f has
// [2,1]-order s, so these equations realize the dominant-coefficient
// setting with an exact solution to compare against.  A_1 is either a
// polynomial or exp(c_1 (1 - z e^{-i theta0})^{-s}) with c_1 < c (equal order,
// smaller type).

#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "growthlab/analytic_map.hpp"
#include "growthlab/characteristics.hpp"
#include "growthlab/ode.hpp"

namespace growthlab {

struct DoubleExpFamily {
  double c = 1.0;
  double s = 1.5;
  double theta0 = kPi / 2;
  std::vector<cplx> a1_polynomial{cplx{0.0}, cplx{1.0}};  // used when a1_scale == 0
  double a1_scale = 0.0;                                    // > 0: A_1 = exp(a1_scale (1 - z e^{-i theta0})^{-s})

  void validate() const {
    if (!(c > 0.0 && s > 1.0)) throw std::invalid_argument("double-exponential family needs c > 0 and s > 1");
    if (a1_scale < 0.0 || a1_scale >= c) throw std::invalid_argument("A_1 scale must lie in [0, c)");
  }
};

struct ExplicitSolutionOde {
  std::shared_ptr<const LinearOde> ode;
  LogLogMap solution;        // f = exp(exp(g))
  std::vector<cplx> seed;    // f(0), f'(0)
};

namespace detail {

template <class T>
struct FamilyTerms {
  T g, g1, g2;  // g, g', g''
};

template <class T>
FamilyTerms<T> family_terms(double c, double s, cplx rot, const T& z) {
  using std::pow;
  const T w = 1.0 - z * rot;
  return {c * pow(w, cplx{-s}), (c * s) * rot * pow(w, cplx{-s - 1.0}), (c * s * (s + 1.0)) * rot * rot * pow(w, cplx{-s - 2.0})};
}

}  // namespace detail

inline ExplicitSolutionOde double_exp_equation(const DoubleExpFamily& p) {
  p.validate();
  const cplx rot = std::polar(1.0, -p.theta0);
  const AnalyticMap a1 = p.a1_scale > 0.0 ? zoo::h_family(p.s, p.theta0, p.a1_scale) : zoo::polynomial(p.a1_polynomial);
  const bool a1_exp = p.a1_scale > 0.0;
  const double a1c = p.a1_scale;

  // log A_0 with the large factor pulled out according to the sign of Re g at
  // the base point, so no intermediate exp overflows.
  auto log_a0 = [=](const Jet& z) {
    const auto t = detail::family_terms(p.c, p.s, rot, z);
    const Jet gp2 = t.g1 * t.g1;
    const Jet lin = t.g2 + gp2;
    if (t.g[0].real() >= 0.0) {
      const Jet e = exp(-t.g);
      Jet a1g = a1_exp ? exp(detail::family_terms(a1c, p.s, rot, z).g - t.g) * t.g1 : a1.series(z) * t.g1 * e;
      return 2.0 * t.g + log(-(gp2 + e * lin + a1g));
    }
    const Jet a1g = a1.series(z) * t.g1;
    return t.g + log(-(exp(t.g) * gp2 + lin + a1g));
  };
  auto a0 = AnalyticMap::from_log("double-exp-coefficient", log_a0);

  LogLogMap sol;
  sol.name = "double-exp-solution";
  sol.g = [=](cplx z) { return p.c * std::pow(1.0 - z * rot, -p.s); };
  sol.g_polar = [=](double r, double t, double dt) {
    // 1 - r e^{id} = (1 - r) + 2 r sin^2(d/2) - i r sin d
    const double d = (t - p.theta0) + dt, sh = std::sin(0.5 * d);
    return p.c * std::pow(cplx{(1.0 - r) + 2.0 * r * sh * sh, -r * std::sin(d)}, -p.s);
  };
  sol.g_series = [=](const Jet& z) { return detail::family_terms(p.c, p.s, rot, z).g; };

  // f(0) = exp(e^c), f'(0) = f(0) e^c g'(0).
  const double ec = std::exp(p.c);
  const cplx f0 = std::exp(cplx{ec});
  const cplx gp0 = p.c * p.s * rot;
  ExplicitSolutionOde out{std::make_shared<LinearOde>(std::vector<AnalyticMap>{a0, a1}), sol, {f0, f0 * ec * gp0}};
  if (!std::isfinite(std::abs(f0 * ec * gp0))) throw std::invalid_argument("double-exponential family: f(0) overflows");
  return out;
}

}  // namespace growthlab

#pragma once

// Evaluable analytic functions in extended-range form.
//
// Every characteristic is computed from log|f| and f'/f, never from |f|
// itself, so maps whose modulus leaves the double range (log|f| ~ 1e20) are
// still usable.  A map is built from its value series, its logarithm series,
// or (for numerically integrated solutions) a point sampler.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "growthlab/errors.hpp"
#include "growthlab/sector.hpp"
#include "growthlab/series.hpp"

namespace growthlab {

/// Point data of f at z.  At a zero of f, log_abs == -inf and deriv_at_zero
/// carries f'(z); dlog is meaningless there.
struct Sample {
  double log_abs = 0.0;
  double phase = 0.0;
  cplx dlog{0.0};
  bool zero = false;
  cplx deriv_at_zero{0.0};

  /// log(1 + |f|^2), overflow-free.
  double log1p_abs2() const {
    if (zero) return 0.0;
    const double l2 = 2.0 * log_abs;
    return l2 > 0.0 ? l2 + std::log1p(std::exp(-l2)) : std::log1p(std::exp(l2));
  }

  /// |f|^2 / (1 + |f|^2)
  double saturation() const {
    if (zero) return 0.0;
    return 1.0 / (1.0 + std::exp(-2.0 * log_abs));
  }

  /// Spherical derivative |f'| / (1 + |f|^2) = |f'/f| / (2 cosh log|f|).
  double spherical_derivative() const {
    if (zero) return std::abs(deriv_at_zero);
    const double l = log_abs;
    if (std::abs(l) > 700.0) return 0.0;
    return std::abs(dlog) / (2.0 * std::cosh(l));
  }

  /// d/dn log(1 + |f|^2) in the direction n (|n| = 1).
  double normal_derivative_log1p_abs2(cplx n) const {
    if (zero) return 0.0;
    return 2.0 * saturation() * std::real(dlog * n);
  }
};

class AnalyticMap {
 public:
  using SeriesFn = std::function<Jet(const Jet&)>;
  using SampleFn = std::function<Sample(cplx)>;

  AnalyticMap() = default;

  /// Map given by f itself on a jet argument.
  static AnalyticMap from_value(std::string name, SeriesFn value) {
    AnalyticMap m;
    m.name_ = std::move(name);
    m.value_ = std::move(value);
    return m;
  }

  /// Map given by log f on a jet argument; the value is exp of it.
  static AnalyticMap from_log(std::string name, SeriesFn log_value) {
    AnalyticMap m;
    m.name_ = std::move(name);
    m.log_ = std::move(log_value);
    return m;
  }

  /// Point-sampled map (no series access).  `expensive` asks characteristic
  /// builders to reuse quadrature nodes across radii.
  static AnalyticMap from_sampler(std::string name, SampleFn sampler, bool expensive) {
    AnalyticMap m;
    m.name_ = std::move(name);
    m.sampler_ = std::move(sampler);
    m.expensive_ = expensive;
    return m;
  }

  const std::string& name() const { return name_; }
  bool expensive() const { return expensive_; }
  bool has_series() const { return static_cast<bool>(value_) || static_cast<bool>(log_); }
  bool has_log_series() const { return static_cast<bool>(log_); }

  Sample sample(cplx z) const {
    if (sampler_) return sampler_(z);
    if (log_) {
      const Jet l = log_(Jet::variable(z, 1));
      Sample s;
      s.log_abs = l[0].real();
      s.phase = l[0].imag();
      s.dlog = l[1];
      if (!std::isfinite(s.log_abs)) throw NumericError(name_ + ": log|f| not finite at z = " + format(z));
      return s;
    }
    if (value_) {
      const Jet v = value_(Jet::variable(z, 1));
      Sample s;
      if (v[0] == cplx{0.0}) {
        s.zero = true;
        s.log_abs = -std::numeric_limits<double>::infinity();
        s.deriv_at_zero = v[1];
        return s;
      }
      s.log_abs = std::log(std::abs(v[0]));
      s.phase = std::arg(v[0]);
      s.dlog = v[1] / v[0];
      if (!std::isfinite(s.log_abs)) throw NumericError(name_ + ": |f| overflowed at z = " + format(z));
      return s;
    }
    throw std::logic_error("empty AnalyticMap");
  }

  /// f composed with the jet argument.
  Jet series(const Jet& z) const {
    if (value_) return value_(z);
    if (log_) return exp(log_(z));
    throw std::logic_error(name_ + ": map has no series representation");
  }

  /// log f composed with the jet argument (principal branch at the base point).
  Jet log_series(const Jet& z) const {
    if (log_) return log_(z);
    if (value_) return log(value_(z));
    throw std::logic_error(name_ + ": map has no series representation");
  }

  /// f^{(j)}(z) / f(z) for j = 0..k via the normalized series exp(log f - log f(z)).
  std::vector<cplx> derivative_ratios(cplx z, std::size_t k) const {
    Jet l = log_series(Jet::variable(z, k));
    l[0] = 0.0;
    const Jet g = exp(l);
    std::vector<cplx> out(k + 1);
    for (std::size_t j = 0; j <= k; ++j) out[j] = g.derivative(j);
    return out;
  }

  static std::string format(cplx z) { return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")"; }

 private:
  std::string name_;
  SeriesFn value_;
  SeriesFn log_;
  SampleFn sampler_;
  bool expensive_ = false;
};

// --------------------------------------------------------------------------
// Built-in functions.

namespace zoo {

inline AnalyticMap identity() {
  return AnalyticMap::from_value("identity", [](const Jet& z) { return z; });
}

inline AnalyticMap constant(cplx c) {
  return AnalyticMap::from_value("constant", [c](const Jet& z) { return Jet::constant(c, z.order()); });
}

/// e^z
inline AnalyticMap exponential() {
  return AnalyticMap::from_log("exp", [](const Jet& z) { return z; });
}

/// exp{scale * (1 - z e^{-i theta})^{-mu}}: scale = 1, theta = 0 is the
/// classical example with order mu - 1 and maximum-modulus order mu.
/// Rotating by theta moves the singular boundary point to e^{i theta}.
inline AnalyticMap h_family(double mu, double theta = 0.0, double scale = 1.0) {
  const cplx rot = std::polar(1.0, -theta);
  return AnalyticMap::from_log("h", [=](const Jet& z) { return scale * pow(1.0 - z * rot, -mu); });
}

/// exp{exp{(1 - z e^{-i theta})^{-sigma}}}: [2,1]-order sigma.
inline AnalyticMap double_exponential(double sigma, double theta = 0.0) {
  const cplx rot = std::polar(1.0, -theta);
  return AnalyticMap::from_log("exp2", [=](const Jet& z) { return exp(pow(1.0 - z * rot, -sigma)); });
}

/// sum c_k z^k
inline AnalyticMap polynomial(std::vector<cplx> coeffs) {
  return AnalyticMap::from_value("polynomial", [coeffs = std::move(coeffs)](const Jet& z) {
    Jet acc = Jet::constant(coeffs.empty() ? cplx{0.0} : coeffs.back(), z.order());
    for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * z + coeffs[k - 1];
    return acc;
  });
}

/// -(mu(mu+1)(1-z)^{-mu-2} + mu^2 (1-z)^{-2mu-2}): with this A_0 the
/// equation f'' + A_0 f = 0 has the explicit solution exp{(1-z)^{-mu}}.
inline AnalyticMap h_equation_coefficient(double mu) {
  return AnalyticMap::from_value("h-coefficient", [mu](const Jet& z) {
    const Jet w = 1.0 - z;
    return -(mu * (mu + 1.0) * pow(w, -mu - 2.0) + mu * mu * pow(w, -2.0 * mu - 2.0));
  });
}

}  // namespace zoo

}  // namespace growthlab

#pragma once

// Truncated complex power series ("jets") for Taylor-mode differentiation.
//
// A Jet of order n holds c_0 ... c_n of f(z0 + t) = sum c_k t^k.  Binary
// operations truncate to the smaller of the two orders.  Elementary functions
// use the standard power-series recurrences, so a composition of elementary
// operations evaluated on Jet::variable(z0, n) yields the Taylor coefficients
// of the composed function at z0, exact up to rounding.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace growthlab {

using cplx = std::complex<double>;

class Jet {
 public:
  Jet() : c_(1, cplx{0.0}) {}
  explicit Jet(std::size_t order, cplx c0 = cplx{0.0}) : c_(order + 1, cplx{0.0}) { c_[0] = c0; }
  explicit Jet(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(cplx{0.0});
  }

  static Jet constant(cplx c, std::size_t order) { return Jet(order, c); }

  /// The identity map z0 + t.
  static Jet variable(cplx at, std::size_t order) {
    Jet j(order, at);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  std::size_t order() const { return c_.size() - 1; }
  cplx operator[](std::size_t k) const { return c_[k]; }
  cplx& operator[](std::size_t k) { return c_[k]; }
  std::span<const cplx> coeffs() const { return c_; }
  cplx value() const { return c_[0]; }

  /// k-th derivative at the expansion point, k! c_k.
  cplx derivative(std::size_t k) const {
    double fact = 1.0;
    for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
    return fact * c_[k];
  }

  /// Sum of the series at offset t (Horner).
  cplx eval(cplx t) const {
    cplx acc{0.0};
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * t + c_[k];
    return acc;
  }

  Jet truncated(std::size_t order) const {
    std::vector<cplx> c(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(std::min(order, this->order()) + 1));
    return Jet(std::move(c));
  }

  Jet& operator+=(const Jet& o) {
    shrink_to(o.order());
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    shrink_to(o.order());
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator+=(cplx s) { c_[0] += s; return *this; }
  Jet& operator-=(cplx s) { c_[0] -= s; return *this; }
  Jet& operator*=(cplx s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Jet& operator/=(cplx s) {
    for (auto& v : c_) v /= s;
    return *this;
  }

  Jet operator-() const {
    Jet r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }

 private:
  void shrink_to(std::size_t order) {
    if (order < this->order()) c_.resize(order + 1);
  }
  std::vector<cplx> c_;
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator+(Jet a, cplx s) { return a += s; }
inline Jet operator+(cplx s, Jet a) { return a += s; }
inline Jet operator-(Jet a, cplx s) { return a -= s; }
inline Jet operator-(cplx s, const Jet& a) { return (-a) += s; }
inline Jet operator*(Jet a, cplx s) { return a *= s; }
inline Jet operator*(cplx s, Jet a) { return a *= s; }
inline Jet operator/(Jet a, cplx s) { return a /= s; }
inline Jet operator+(Jet a, double s) { return a += cplx{s}; }
inline Jet operator+(double s, Jet a) { return a += cplx{s}; }
inline Jet operator-(Jet a, double s) { return a -= cplx{s}; }
inline Jet operator-(double s, const Jet& a) { return (-a) += cplx{s}; }
inline Jet operator*(Jet a, double s) { return a *= cplx{s}; }
inline Jet operator*(double s, Jet a) { return a *= cplx{s}; }
inline Jet operator/(Jet a, double s) { return a /= cplx{s}; }

inline Jet operator*(const Jet& a, const Jet& b) {
  const std::size_t n = std::min(a.order(), b.order());
  Jet r(n);
  for (std::size_t k = 0; k <= n; ++k) {
    cplx s{0.0};
    for (std::size_t i = 0; i <= k; ++i) s += a[i] * b[k - i];
    r[k] = s;
  }
  return r;
}

inline Jet operator/(const Jet& a, const Jet& b) {
  if (b[0] == cplx{0.0}) throw std::domain_error("series division by a series with zero constant term");
  const std::size_t n = std::min(a.order(), b.order());
  Jet q(n);
  for (std::size_t k = 0; k <= n; ++k) {
    cplx s = a[k];
    for (std::size_t i = 1; i <= k; ++i) s -= b[i] * q[k - i];
    q[k] = s / b[0];
  }
  return q;
}

inline Jet operator/(cplx s, const Jet& b) { return Jet::constant(s, b.order()) / b; }
inline Jet operator/(double s, const Jet& b) { return Jet::constant(cplx{s}, b.order()) / b; }

inline Jet exp(const Jet& a) {
  const std::size_t n = a.order();
  Jet r(n, std::exp(a[0]));
  for (std::size_t k = 1; k <= n; ++k) {
    cplx s{0.0};
    for (std::size_t i = 1; i <= k; ++i) s += static_cast<double>(i) * a[i] * r[k - i];
    r[k] = s / static_cast<double>(k);
  }
  return r;
}

/// Principal branch at the constant term.
inline Jet log(const Jet& a) {
  if (a[0] == cplx{0.0}) throw std::domain_error("series logarithm of a series with zero constant term");
  const std::size_t n = a.order();
  Jet r(n, std::log(a[0]));
  for (std::size_t k = 1; k <= n; ++k) {
    cplx s{0.0};
    for (std::size_t i = 1; i < k; ++i) s += static_cast<double>(i) * r[i] * a[k - i];
    r[k] = (a[k] - s / static_cast<double>(k)) / a[0];
  }
  return r;
}

/// a^p with the principal branch at the constant term.
inline Jet pow(const Jet& a, cplx p) {
  if (a[0] == cplx{0.0}) throw std::domain_error("series power of a series with zero constant term");
  const std::size_t n = a.order();
  Jet r(n, std::exp(p * std::log(a[0])));
  for (std::size_t k = 1; k <= n; ++k) {
    cplx s{0.0};
    for (std::size_t i = 1; i <= k; ++i)
      s += (p * static_cast<double>(i) - static_cast<double>(k - i)) * a[i] * r[k - i];
    r[k] = s / (static_cast<double>(k) * a[0]);
  }
  return r;
}

inline Jet pow(const Jet& a, double p) { return pow(a, cplx{p}); }
inline Jet sqrt(const Jet& a) { return pow(a, cplx{0.5}); }

/// d/dt; the result has one order less (order 0 stays order 0 with value 0).
inline Jet derivative(const Jet& a) {
  if (a.order() == 0) return Jet(0);
  Jet r(a.order() - 1);
  for (std::size_t k = 1; k <= a.order(); ++k) r[k - 1] = static_cast<double>(k) * a[k];
  return r;
}

/// Evaluates the series `outer` (in the offset variable) at `inner` - outer's
/// expansion point, i.e. sum outer[k] (inner - inner[0])^k.  Used to pull a
/// series expanded at inner.value() back along an arbitrary jet argument.
inline Jet compose_at_offset(const Jet& outer, const Jet& inner) {
  Jet shift = inner;
  shift[0] = 0.0;
  Jet acc = Jet::constant(outer[outer.order()], inner.order());
  for (std::size_t k = outer.order(); k-- > 0;) acc = acc * shift + outer[k];
  return acc;
}

}  // namespace growthlab

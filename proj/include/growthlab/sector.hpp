#pragma once

// Angular sectors of the unit disc, iterated logarithms/exponentials and the
// bounded / non-admissible / admissible growth classes.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "growthlab/errors.hpp"

namespace growthlab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Principal argument folded into [0, 2*pi).
inline double arg_2pi(std::complex<double> z) {
  double a = std::arg(z);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

/// Open sector {alpha < arg z < beta, |z| < 1}, 0 <= alpha < beta <= 2*pi.
/// The degenerate (0, 2*pi) sector stands for the full disc.
class Sector {
 public:
  Sector(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha >= 0.0 && alpha < beta && beta <= kTwoPi + 1e-15) || !std::isfinite(alpha) || !std::isfinite(beta))
      throw DomainError("sector bounds must satisfy 0 <= alpha < beta <= 2*pi (got " + std::to_string(alpha) + ", " +
                        std::to_string(beta) + ")");
  }

  static Sector full_disc() { return Sector(0.0, kTwoPi); }

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double opening() const { return beta_ - alpha_; }
  double theta0() const { return 0.5 * (alpha_ + beta_); }
  double delta() const { return 0.5 * (beta_ - alpha_); }
  double omega() const { return kPi / (beta_ - alpha_); }
  bool is_full_disc() const { return opening() >= kTwoPi - 1e-15; }
  /// The conformal map needs 0 < beta - alpha < 2*pi.
  bool mappable() const { return opening() < kTwoPi - 1e-15; }

  bool contains(std::complex<double> z) const {
    const double r = std::abs(z);
    if (!(r > 0.0 && r < 1.0)) return false;
    if (is_full_disc()) return true;
    const double a = arg_2pi(z);
    return a > alpha_ && a < beta_;
  }

  bool operator==(const Sector&) const = default;

 private:
  double alpha_;
  double beta_;
};

/// Sector with both bounding rays pulled inward by epsilon.
class ShrunkSector {
 public:
  ShrunkSector(Sector base, double epsilon) : base_(base), epsilon_(epsilon) {
    if (!(epsilon > 0.0 && epsilon < base.delta()))
      throw DomainError("shrink epsilon must lie in (0, (beta - alpha)/2), got " + std::to_string(epsilon));
  }

  const Sector& base() const { return base_; }
  double epsilon() const { return epsilon_; }
  Sector effective() const { return Sector(base_.alpha() + epsilon_, base_.beta() - epsilon_); }
  bool contains(std::complex<double> z) const { return effective().contains(z); }

  bool operator==(const ShrunkSector&) const = default;

 private:
  Sector base_;
  double epsilon_;
};

inline ShrunkSector shrink(const Sector& s, double epsilon) { return ShrunkSector(s, epsilon); }

/// Shrinking twice composes additively in epsilon.
inline ShrunkSector shrink(const ShrunkSector& s, double epsilon) {
  return ShrunkSector(s.base(), s.epsilon() + epsilon);
}

inline bool contains(const Sector& s, std::complex<double> z) { return s.contains(z); }
inline bool contains(const ShrunkSector& s, std::complex<double> z) { return s.contains(z); }

/// log_p^+ x: log^+ x = max(0, log x) iterated p times; p == 0 returns x.
inline double iterated_log_plus(int p, double x) {
  if (p < 0) throw std::invalid_argument("iterated_log_plus: p must be nonnegative");
  double v = x;
  for (int i = 0; i < p; ++i) v = (v > 1.0) ? std::log(v) : 0.0;
  return v;
}

/// Plain iterated logarithm log_q x (no clamping), q == 0 is the identity.
/// Returns -inf / NaN when an intermediate value is not positive.
inline double iterated_log(int q, double x) {
  if (q < 0) throw std::invalid_argument("iterated_log: q must be nonnegative");
  double v = x;
  for (int i = 0; i < q; ++i) {
    if (!(v > 0.0)) return -std::numeric_limits<double>::infinity();
    v = std::log(v);
  }
  return v;
}

/// exp_p x with exp_0 x = x.  Throws NumericError if the result overflows.
inline double iterated_exp(int p, double x) {
  if (p < 0) throw std::invalid_argument("iterated_exp: p must be nonnegative");
  double v = x;
  for (int i = 0; i < p; ++i) {
    v = std::exp(v);
    if (!std::isfinite(v)) throw NumericError("iterated_exp overflow; request log-scale output instead");
  }
  return v;
}

/// log(exp_p x) = exp_{p-1} x: the log-scale form of iterated_exp for p >= 1.
inline double iterated_exp_log(int p, double x) {
  if (p < 1) throw std::invalid_argument("iterated_exp_log: p must be >= 1");
  return iterated_exp(p - 1, x);
}

enum class GrowthClass { bounded, non_admissible, admissible };

inline std::string_view to_string(GrowthClass c) {
  switch (c) {
    case GrowthClass::bounded: return "bounded";
    case GrowthClass::non_admissible: return "non-admissible";
    case GrowthClass::admissible: return "admissible";
  }
  return "?";
}

}  // namespace growthlab

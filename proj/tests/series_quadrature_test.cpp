#include <gtest/gtest.h>

#include "growthlab/quadrature.hpp"
#include "growthlab/series.hpp"

using namespace growthlab;

namespace {

double max_err(const Jet& a, const std::vector<cplx>& expect) {
  double e = 0.0;
  for (std::size_t k = 0; k < expect.size(); ++k) e = std::max(e, std::abs(a[k] - expect[k]));
  return e;
}

}  // namespace

TEST(Jet, ExpLogRoundTrip) {
  const Jet z = Jet::variable({0.3, 0.2}, 10);
  const Jet back = log(exp(z));
  EXPECT_LT(max_err(back, std::vector<cplx>(z.coeffs().begin(), z.coeffs().end())), 1e-14);
}

TEST(Jet, ExpTaylorCoefficients) {
  const Jet e = exp(Jet::variable(0.0, 8));
  double fact = 1.0;
  for (std::size_t k = 0; k <= 8; ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    EXPECT_NEAR(e[k].real(), 1.0 / fact, 1e-15);
  }
}

TEST(Jet, DivisionInvertsMultiplication) {
  const Jet z = Jet::variable({0.1, -0.4}, 12);
  const Jet a = exp(z) + 2.0, b = z * z + 3.0;
  const Jet q = (a * b) / b;
  EXPECT_LT(max_err(q, std::vector<cplx>(a.coeffs().begin(), a.coeffs().end())), 1e-13);
}

TEST(Jet, PowMatchesClosedForm) {
  // (1 - z)^{-3/2} about 0: coefficients (3/2)_k / k!
  const Jet p = pow(1.0 - Jet::variable(0.0, 6), -1.5);
  double c = 1.0;
  for (std::size_t k = 0; k <= 6; ++k) {
    EXPECT_NEAR(p[k].real(), c, 1e-13);
    c *= (1.5 + static_cast<double>(k)) / static_cast<double>(k + 1);
  }
}

TEST(Jet, DerivativeShiftsCoefficients) {
  const Jet d = derivative(exp(Jet::variable(0.0, 6)));
  EXPECT_EQ(d.order(), 5u);
  EXPECT_NEAR(d[0].real(), 1.0, 1e-15);
  EXPECT_NEAR(d[2].real(), 0.5, 1e-15);
}

TEST(Quadrature, PolynomialIsExact) {
  const auto r = quad::integrate([](double x) { return x * x * x - 2 * x; }, 0.0, 2.0);
  EXPECT_NEAR(r.value, 0.0, 1e-13);
  EXPECT_TRUE(r.converged);
}

TEST(Quadrature, PeakedIntegrand) {
  const double eps = 1e-4;
  const auto r = quad::integrate([&](double x) { return eps / (x * x + eps * eps); }, -1.0, 1.0,
                                 {.abs_tol = 1e-14, .rel_tol = 1e-10, .max_evals = 1 << 16});
  EXPECT_NEAR(r.value, 2 * std::atan(1.0 / eps), 1e-8);
}

TEST(Quadrature, CapBreachThrowsOrReports) {
  auto f = [](double x) { return std::sin(1.0 / (x + 1e-9)); };
  quad::Options o;
  o.max_evals = 300;
  o.rel_tol = 1e-14;
  EXPECT_THROW(quad::integrate(f, 0.0, 1.0, o), QuadratureError);
  o.throw_on_failure = false;
  const auto r = quad::integrate(f, 0.0, 1.0, o);
  EXPECT_FALSE(r.converged);
}

TEST(Quadrature, PartitionReuse) {
  auto f = [](double x) { return std::exp(-100 * x * x); };
  const auto r = quad::integrate(f, -1.0, 1.0);
  const auto again = quad::integrate_on(f, r.breakpoints);
  EXPECT_NEAR(again.value, r.value, 1e-13);
  EXPECT_NEAR(r.value, std::sqrt(3.14159265358979323846) / 10 * std::erf(10.0), 1e-12);
}

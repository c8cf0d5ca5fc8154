#include <gtest/gtest.h>

#include "growthlab/explicit_solutions.hpp"
#include "growthlab/ode.hpp"

using namespace growthlab;

TEST(Ode, PolynomialSolutionExact) {
  LinearOde ode({zoo::constant(0.0), zoo::constant(0.0)});
  const auto sol = solve_ray(ode, 1.0, 0.0, 0.9, {2.0, -1.0});
  const cplx z = std::polar(0.9, 1.0);
  const auto& s = sol.samples.back();
  EXPECT_LT(std::abs(s.state[0] * std::exp(s.log_scale) - (2.0 - z)), 1e-13);
}

TEST(Ode, ExpEquationOnRay) {
  // f'' - f = 0, f(0) = 1, f'(0) = 1 gives e^z
  LinearOde ode({zoo::constant(-1.0), zoo::constant(0.0)});
  const auto sol = solve_ray(ode, 0.4, 0.0, 0.95, {1.0, 1.0});
  const auto& s = sol.samples.back();
  EXPECT_NEAR(s.log_abs(), std::polar(0.95, 0.4).real(), 1e-12);
  EXPECT_LE(sol.max_residual, SolverOptions{}.residual_tol);
}

TEST(Ode, HEquationAtNinetyNine) {
  for (double mu : {1.5, 2.0}) {
    const auto h = zoo::h_family(mu);
    const LinearOde ode({zoo::h_equation_coefficient(mu), zoo::constant(0.0)});
    const auto d = h.derivative_ratios(0.0, 1);
    const cplx h0 = std::exp(1.0);
    const auto sol = solve_ray(ode, 0.0, 0.0, 0.99, {h0, h0 * d[1]});
    const double exact = std::pow(0.01, -mu);
    EXPECT_LT(std::abs(sol.samples.back().log_abs() - exact) / exact, 1e-6);
  }
}

TEST(Ode, OutputRadiiAreHitExactly) {
  LinearOde ode({zoo::constant(1.0), zoo::constant(0.0)});
  const auto sol = solve_ray(ode, 0.0, 0.0, 0.9, {0.0, 1.0}, {}, {0.25, 0.5});
  ASSERT_EQ(sol.samples.size(), 3u);
  EXPECT_EQ(sol.samples[0].r, 0.25);
  EXPECT_NEAR(std::real(sol.samples[1].state[0] * std::exp(sol.samples[1].log_scale)), std::sin(0.5), 1e-14);
}

TEST(Ode, RejectsBadRays) {
  LinearOde ode({zoo::constant(1.0), zoo::constant(0.0)}, Sector(0.0, kPi / 2));
  EXPECT_THROW(solve_ray(ode, 0.0, 0.0, 1.0, {0.0, 1.0}), DomainError);
  EXPECT_THROW(solve_ray(ode, 3.0, 0.0, 0.5, {0.0, 1.0}), DomainError);
  EXPECT_THROW(solve_ray(ode, 0.5, 0.0, 0.5, {0.0}), std::invalid_argument);
  EXPECT_THROW(LinearOde({zoo::constant(1.0)}), std::invalid_argument);
}

TEST(Ode, FixedStepHalvingConvergence) {
  const LinearOde ode({zoo::h_equation_coefficient(1.5), zoo::constant(0.0)});
  SolverOptions o;
  o.series_order = 12;
  const cplx h0 = std::exp(1.0);
  auto res = [&](double step) {
    o.fixed_step = step;
    return solve_ray(ode, 0.0, 0.0, 0.6, {h0, 1.5 * h0}, o).max_residual;
  };
  EXPECT_GE(res(0.05) / res(0.025), 256.0);
}

TEST(ChainRule, FirstRowsMatchClosedForm) {
  const Sector s(0.0, kPi);
  const auto t = chain_rule_table(s, 3);
  const cplx u{0.2, 0.1};
  const auto mj = map_jet(s, u, 3);
  const cplx V = mj.v_derivs[0], Vp = mj.v_derivs[1];
  EXPECT_LT(std::abs(t(1, 1, u) - V), 1e-14);
  EXPECT_LT(std::abs(t(2, 2, u) - V * V), 1e-13);
  EXPECT_LT(std::abs(t(2, 1, u) - V * Vp), 1e-12);
  EXPECT_LT(std::abs(t(3, 3, u) - V * V * V), 1e-12);
  EXPECT_THROW(t(3, 4, u), std::out_of_range);
  EXPECT_THROW(chain_rule_table(s, 13), DomainError);
}

TEST(Transform, PulledBackSolutionSolvesDiscEquation) {
  // f = e^z solves f'' - f = 0; F = f o z must solve the transformed equation.
  const Sector s(kPi / 4, 3 * kPi / 4);
  const LinearOde ode({zoo::constant(-1.0), zoo::constant(0.0)}, s);
  const auto tr = transform_to_disc(ode, s);
  const auto F = pullback(zoo::exponential(), s);
  for (cplx u : {cplx{0.0, 0.0}, cplx{0.5, -0.2}, cplx{-0.3, 0.6}}) {
    const Jet Fs = F.series(Jet::variable(u, 2));
    const std::vector<cplx> jet{Fs.derivative(0), Fs.derivative(1), Fs.derivative(2)};
    EXPECT_LT(residual(tr, u, jet), 1e-10);
  }
}

TEST(SolutionMap, MatchesExplicitAndIsDeterministic) {
  const double mu = 1.5;
  const auto ode = std::make_shared<const LinearOde>(
      std::vector<AnalyticMap>{zoo::h_equation_coefficient(mu), zoo::constant(0.0)});
  const cplx h0 = std::exp(1.0);
  SolutionMapOptions mo;
  mo.r_max = 0.9;
  const auto f = solution_as_analytic_map(ode, {h0, mu * h0}, mo);
  EXPECT_TRUE(f.expensive());
  const cplx z = std::polar(0.8, 0.7);
  const auto a = f.sample(z), b = f.sample(z);
  EXPECT_NEAR(a.log_abs, zoo::h_family(mu).sample(z).log_abs, 1e-9);
  EXPECT_EQ(a.log_abs, b.log_abs);
  EXPECT_THROW(f.sample(std::polar(0.95, 0.0)), DomainError);
}

TEST(ExplicitFamily, SolverTracksClosedForm) {
  const auto eq = double_exp_equation(DoubleExpFamily{});
  for (double th : {kPi / 2, kPi / 3}) {
    const auto sol = solve_ray(*eq.ode, th, 0.0, 0.8, eq.seed);
    const double exact = std::exp(eq.solution.at(0.8, th)).real();
    EXPECT_LT(std::abs(sol.samples.back().log_abs() - exact) / std::max(1.0, std::abs(exact)), 1e-8);
  }
  DoubleExpFamily bad;
  bad.a1_scale = 2.0;
  EXPECT_THROW(double_exp_equation(bad), std::invalid_argument);
}

#include <gtest/gtest.h>

#include <sstream>

#include "growthlab/characteristics.hpp"
#include "growthlab/explicit_solutions.hpp"

using namespace growthlab;

TEST(Characteristics, MaxModulusOfExp) {
  EXPECT_NEAR(max_modulus(zoo::exponential(), 0.8), 0.8, 1e-10);
  EXPECT_NEAR(max_modulus(zoo::exponential(), 0.8, Sector(kPi / 2, kPi)), 0.0, 1e-6);
}

TEST(Characteristics, NevanlinnaTOfExp) {
  // T(r, e^z) = r / pi
  for (double r : {0.3, 0.9, 0.999}) EXPECT_NEAR(nevanlinna_t(zoo::exponential(), r), r / kPi, 1e-10);
}

TEST(Characteristics, IdentityT0ClosedForm) {
  for (const auto& s : {Sector::full_disc(), Sector(0.0, kPi / 2), Sector(1.0, 4.0)}) {
    for (double r : {0.2, 0.7, 0.99}) {
      const double exact = s.opening() / (4 * kPi) * std::log1p(r * r);
      for (auto m : {T0Method::boundary, T0Method::area}) {
        CharacteristicOptions o;
        o.t0_method = m;
        EXPECT_NEAR(ahlfors_shimizu_t0(zoo::identity(), r, s, o) / exact, 1.0, 1e-6);
      }
    }
  }
}

TEST(Characteristics, SphericalAreaAdditive) {
  const auto f = zoo::h_family(1.5);
  const double r = 0.9;
  const double whole = spherical_area(f, r, Sector(0.0, kPi));
  const double parts = spherical_area(f, r, Sector(0.0, 1.0)) + spherical_area(f, r, Sector(1.0, kPi));
  EXPECT_NEAR(whole, parts, 1e-6 * whole);
  EXPECT_NEAR(spherical_area_boundary(f, r, Sector(0.0, kPi)), whole, 1e-6 * whole);
}

TEST(Characteristics, BuildCurveValidatesGrid) {
  EXPECT_THROW(build_curve(zoo::identity(), CurveKind::nevanlinna_T, Sector::full_disc(), {}), std::invalid_argument);
  EXPECT_THROW(build_curve(zoo::identity(), CurveKind::nevanlinna_T, Sector::full_disc(), {0.5, 0.4}), DomainError);
  EXPECT_THROW(build_curve(zoo::identity(), CurveKind::nevanlinna_T, Sector::full_disc(), {0.5, 1.0}), DomainError);
}

TEST(Characteristics, CurveCsvRoundTrip) {
  const auto c = build_curve(zoo::exponential(), CurveKind::ahlfors_shimizu_T0, Sector(0.0, kPi), default_grid(4, 12));
  std::stringstream ss;
  write_curve_csv(ss, c);
  const auto back = read_curve_csv(ss, CurveKind::ahlfors_shimizu_T0);
  ASSERT_EQ(back.size(), c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_DOUBLE_EQ(back.r[i], c.r[i]);
    EXPECT_DOUBLE_EQ(back.value[i], c.value[i]);
  }
}

TEST(Characteristics, ClassifyGrowth) {
  const auto grid = default_grid(4, 60);
  EXPECT_EQ(classify_growth(build_curve(zoo::constant(3.0), CurveKind::nevanlinna_T, Sector::full_disc(), grid)).cls,
            GrowthClass::bounded);
  EXPECT_EQ(classify_growth(build_curve(zoo::h_family(2.0), CurveKind::nevanlinna_T, Sector::full_disc(), grid)).cls,
            GrowthClass::admissible);
}

TEST(LogLogT0, AgreesWithPlainRouteOnModerateGrowth) {
  // Small peak: the log-scale evaluator must reduce to the plain one.
  DoubleExpFamily p;
  p.c = 0.2;
  p.s = 1.2;
  const auto eq = double_exp_equation(p);
  const Sector s(0.0, kPi);
  const auto f = eq.solution.as_map();
  for (double r : {0.5, 0.7}) {
    const double plain = std::log(ahlfors_shimizu_t0(f, r, s));
    EXPECT_NEAR(log_ahlfors_shimizu_t0(eq.solution, r, s), plain, 1e-6);
  }
}

TEST(LogLogT0, HugeValuesStayFinite) {
  const auto eq = double_exp_equation(DoubleExpFamily{});
  const Sector s(0.0, kPi);
  const auto c = build_log_t0_curve(eq.solution, s, default_grid(20, 40));
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_TRUE(std::isfinite(c.value[i]));
    if (i > 0) {
      EXPECT_GE(c.value[i], c.value[i - 1]);
    }
  }
  // log T0 grows like e^{c (1-r)^{-s}} on the bisector scale.
  EXPECT_GT(c.value.back(), 100.0);
}

#include <gtest/gtest.h>

#include "growthlab/order.hpp"

using namespace growthlab;

namespace {

const auto kGrid = default_grid(4, 60);

}  // namespace

TEST(Order, PowerCurveOrder) {
  // T = (1-r)^{-lambda}: [1,1]-order lambda
  for (double lambda : {0.5, 1.0, 2.5}) {
    const auto e = pq_order(power_curve(lambda, 1.0, kGrid), 1, 1, EstimateMode::limsup);
    EXPECT_NEAR(e.value, lambda, 0.05);
    EXPECT_FALSE(e.infinite_flag);
  }
}

TEST(Order, ExpPowerCurveIsTwoOne) {
  const auto c = exp_power_curve(1.5, 1.0, kGrid);
  EXPECT_NEAR(pq_order(c, 2, 1, EstimateMode::limsup).value, 1.5, 0.05);
  EXPECT_NEAR(pq_order(c, 2, 1, EstimateMode::liminf).value, 1.5, 0.05);
  EXPECT_TRUE(pq_order(c, 1, 1, EstimateMode::limsup).infinite_flag);
}

TEST(Order, MaxModulusShiftsP) {
  auto c = exp_power_curve(2.0, 1.0, kGrid, CurveKind::max_modulus);
  EXPECT_NEAR(pq_order_from_max_modulus(c, 1, 1, EstimateMode::limsup).value, 2.0, 0.05);
  GrowthCurve t = c;
  t.kind = CurveKind::nevanlinna_T;
  EXPECT_THROW(pq_order_from_max_modulus(t, 1, 1, EstimateMode::limsup), std::invalid_argument);
}

TEST(Order, DoubleExponentialDiverges) {
  const auto c = double_exp_power_curve(1.0, kGrid);
  EXPECT_TRUE(pq_order(c, 1, 1, EstimateMode::limsup).infinite_flag);
  EXPECT_NEAR(pq_order(c, 3, 1, EstimateMode::limsup).value, 1.0, 0.05);
}

TEST(Order, ZeroCurveIsDegenerate) {
  GrowthCurve c;
  c.r = kGrid;
  c.value.assign(kGrid.size(), 0.0);
  const auto e = pq_order(c, 1, 1, EstimateMode::limsup);
  EXPECT_TRUE(e.degenerate);
  EXPECT_EQ(e.value, 0.0);
}

TEST(Order, RejectsShortOrShallowCurves) {
  EXPECT_THROW(pq_order(power_curve(1.0, 1.0, default_grid(4, 12)), 1, 1, EstimateMode::limsup), InsufficientData);
  EXPECT_THROW(pq_order(power_curve(1.0, 1.0, kGrid), 0, 1, EstimateMode::limsup), std::invalid_argument);
}

TEST(Order, TypeOfPowerCurve) {
  const auto t = pq_type(power_curve(1.5, 3.0, kGrid), 1, 1, 1.5, EstimateMode::limsup);
  EXPECT_NEAR(t.value, 3.0, 0.05);
  EXPECT_DOUBLE_EQ(t.order_used, 1.5);
  const auto l = pq_type(exp_power_curve(1.5, 2.0, kGrid), 2, 1, 1.5, EstimateMode::liminf);
  EXPECT_NEAR(l.value, 2.0, 0.05);
}

TEST(Order, OscillatingCurveSeparatesModes) {
  // log T = (1-r)^{-(1.5 + 0.5 sin log log)}: lim inf and lim sup differ
  GrowthCurve c;
  c.log_scale = true;
  c.r = kGrid;
  for (double r : kGrid) {
    const double x = std::log(1.0 / (1.0 - r));
    c.value.push_back(std::pow(1.0 - r, -(1.5 + 0.5 * std::sin(2.0 * std::log(x)))));
  }
  const auto hi = pq_order(c, 2, 1, EstimateMode::limsup);
  const auto lo = pq_order(c, 2, 1, EstimateMode::liminf);
  EXPECT_GT(hi.value, lo.value);
}

TEST(Order, InequalityHelpers) {
  EXPECT_TRUE(check_le("a", "x", 1.05, 1.0, 0.1).holds);
  EXPECT_FALSE(check_le("a", "x", 1.2, 1.0, 0.1).holds);
  EXPECT_TRUE(check_eq("a", "x", 2.0, 2.05, 0.1).holds);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(check_le("a", "x", inf, inf, 0.0).holds);
  EXPECT_FALSE(check_le("a", "x", inf, 1.0, 0.1).holds);
}

TEST(Order, PropositionPairOnExp) {
  const auto rep = verify_proposition_pair(zoo::exponential(), 1, 1);
  EXPECT_TRUE(rep.holds());
  EXPECT_TRUE(rep.rho.degenerate || rep.rho.value < 0.1);
}

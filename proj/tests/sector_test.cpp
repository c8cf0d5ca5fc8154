#include <gtest/gtest.h>

#include "growthlab/sector.hpp"

using namespace growthlab;

TEST(Sector, RejectsBadBounds) {
  EXPECT_THROW(Sector(1.0, 1.0), DomainError);
  EXPECT_THROW(Sector(-0.1, 1.0), DomainError);
  EXPECT_THROW(Sector(0.0, 7.0), DomainError);
  EXPECT_NO_THROW(Sector(0.0, kTwoPi));
}

TEST(Sector, ContainsIsOpen) {
  const Sector s(0.0, kPi / 2);
  EXPECT_TRUE(s.contains(std::polar(0.5, 0.3)));
  EXPECT_FALSE(s.contains(std::polar(0.5, 0.0)));
  EXPECT_FALSE(s.contains(std::polar(0.5, kPi / 2)));
  EXPECT_FALSE(s.contains(std::polar(1.0, 0.3)));
  EXPECT_FALSE(s.contains({0.0, 0.0}));
}

TEST(Sector, WrapsNegativeArguments) {
  const Sector s(3 * kPi / 2, kTwoPi);
  EXPECT_TRUE(s.contains(std::polar(0.5, -0.2)));
  EXPECT_FALSE(s.contains(std::polar(0.5, 0.2)));
}

TEST(Sector, FullDiscIsNotMappable) {
  const auto d = Sector::full_disc();
  EXPECT_TRUE(d.is_full_disc());
  EXPECT_FALSE(d.mappable());
  EXPECT_TRUE(d.contains(std::polar(0.9, 0.0)));
}

TEST(Sector, DerivedQuantities) {
  const Sector s(kPi / 4, 3 * kPi / 4);
  EXPECT_DOUBLE_EQ(s.theta0(), kPi / 2);
  EXPECT_DOUBLE_EQ(s.delta(), kPi / 4);
  EXPECT_DOUBLE_EQ(s.omega(), 2.0);
}

TEST(ShrunkSector, EpsilonRangeAndComposition) {
  const Sector s(0.0, kPi);
  EXPECT_THROW(shrink(s, 0.0), DomainError);
  EXPECT_THROW(shrink(s, kPi / 2), DomainError);
  const auto a = shrink(shrink(s, 0.1), 0.2);
  EXPECT_NEAR(a.epsilon(), 0.3, 1e-15);
  EXPECT_NEAR(a.effective().alpha(), 0.3, 1e-15);
  EXPECT_NEAR(a.effective().beta(), kPi - 0.3, 1e-15);
  EXPECT_FALSE(a.contains(std::polar(0.5, 0.2)));
  EXPECT_TRUE(a.contains(std::polar(0.5, 1.0)));
}

TEST(IteratedLogs, Definitions) {
  EXPECT_DOUBLE_EQ(iterated_log_plus(0, 5.0), 5.0);
  EXPECT_DOUBLE_EQ(iterated_log_plus(1, 0.5), 0.0);
  EXPECT_NEAR(iterated_log_plus(2, std::exp(std::exp(2.0))), 2.0, 1e-12);
  EXPECT_NEAR(iterated_log(2, std::exp(std::exp(-1.0))), -1.0, 1e-12);
  EXPECT_EQ(iterated_log(2, 0.5), -std::numeric_limits<double>::infinity());
  EXPECT_NEAR(iterated_exp(2, 0.0), std::exp(1.0), 1e-15);
  EXPECT_THROW(iterated_exp(3, 10.0), NumericError);
  EXPECT_DOUBLE_EQ(iterated_exp_log(2, 10.0), std::exp(10.0));
  EXPECT_THROW(iterated_exp_log(3, 10.0), NumericError);
  EXPECT_THROW(iterated_log_plus(-1, 1.0), std::invalid_argument);
}

#include <gtest/gtest.h>

#include <random>

#include "growthlab/conformal_map.hpp"

using namespace growthlab;

namespace {

const Sector kSectors[] = {Sector(0.0, kPi), Sector(kPi / 4, 3 * kPi / 4), Sector(5.5, 2 * kPi), Sector(0.0, 5.5)};

}  // namespace

TEST(ConformalMap, RoundTripOnDisc) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rad(0.0, 0.95), ang(-kPi, kPi);
  for (const auto& s : kSectors) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const cplx u = std::polar(rad(rng), ang(rng));
      const cplx z = map_to_sector(s, u);
      ASSERT_TRUE(s.contains(z));
      worst = std::max(worst, std::abs(map_to_disc(s, z) - u));
    }
    EXPECT_LT(worst, 1e-10) << "sector (" << s.alpha() << ", " << s.beta() << ")";
  }
}

TEST(ConformalMap, BisectorToRealAxis) {
  const Sector s(kPi / 4, 3 * kPi / 4);
  const cplx u = map_to_disc(s, std::polar(0.4, s.theta0()));
  EXPECT_NEAR(u.imag(), 0.0, 1e-14);
}

TEST(ConformalMap, RejectsPointsOutside) {
  const Sector s(0.0, kPi / 2);
  EXPECT_THROW(map_to_disc(s, std::polar(0.5, 2.0)), DomainError);
  EXPECT_THROW(map_to_sector(s, {1.0, 0.0}), DomainError);
  EXPECT_THROW(map_to_disc(Sector::full_disc(), {0.5, 0.0}), DomainError);
}

TEST(ConformalMap, DerivativesMatchFiniteDifferences) {
  const Sector s(0.3, 2.0);
  for (cplx u : {cplx{0.1, 0.2}, cplx{-0.6, 0.3}, cplx{0.0, -0.8}}) {
    const auto jet = map_jet(s, u, 3);
    const double h = 1e-5;
    const cplx fd = (map_to_sector(s, u + h) - map_to_sector(s, u - h)) / (2 * h);
    EXPECT_LT(std::abs(fd - jet.z_derivs[1]) / std::abs(jet.z_derivs[1]), 1e-7);
    const auto d1 = map_jet(s, u + h, 2), d0 = map_jet(s, u - h, 2);
    const cplx fd2 = (d1.z_derivs[1] - d0.z_derivs[1]) / (2 * h);
    EXPECT_LT(std::abs(fd2 - jet.z_derivs[2]) / std::abs(jet.z_derivs[2]), 1e-6);
    EXPECT_LT(std::abs(jet.v_derivs[0] * jet.z_derivs[1] - 1.0), 1e-13);
  }
}

TEST(ConformalMap, MapJetOrderCap) {
  const Sector s(0.0, kPi);
  EXPECT_THROW(map_jet(s, 0.1, 0), DomainError);
  EXPECT_THROW(map_jet(s, 0.1, 13), DomainError);
}

TEST(ConformalMap, ShrinkInclusionsHold) {
  for (const auto& s : {Sector(0.0, kPi), Sector(kPi / 4, 3 * kPi / 4)}) {
    for (double r : {0.7, 0.9}) {
      const auto rep = check_inclusions(s, kPi / 8, r, 4000);
      EXPECT_TRUE(rep.ok()) << rep.forward_violations << " forward, " << rep.reverse_violations << " reverse";
      EXPECT_GT(rep.forward_samples, 3000u);
      EXPECT_LT(rep.max_abs_u, rep.forward_bound);
    }
  }
}

TEST(ConformalMap, PullbackComposes) {
  const Sector s(0.0, kPi);
  const auto F = pullback(zoo::exponential(), s);
  const cplx u{0.2, -0.3};
  const cplx z = map_to_sector(s, u);
  EXPECT_NEAR(F.sample(u).log_abs, z.real(), 1e-13);
}

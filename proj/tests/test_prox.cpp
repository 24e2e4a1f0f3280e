#include <gtest/gtest.h>

#include <random>

#include "grid_oracle.hpp"
#include "minmaxkit/error.hpp"
#include "minmaxkit/prox.hpp"

using namespace minmax;

TEST(Prox, SoftThresholdShrinksTowardZero) {
  const auto g = ProxSpec::soft_threshold(1.0);
  EXPECT_DOUBLE_EQ(g.scalar_prox(0.5, 2.0), 1.5);
  EXPECT_DOUBLE_EQ(g.scalar_prox(0.5, -2.0), -1.5);
  EXPECT_DOUBLE_EQ(g.scalar_prox(0.5, 0.3), 0.0);
}

TEST(Prox, McpFirmThreshold) {
  const auto g = ProxSpec::firm_threshold_mcp(1.0, 2.0);
  // dead zone, shrink region rescaled by 1 / (1 - tau / gamma), identity above gamma * alpha
  EXPECT_DOUBLE_EQ(g.scalar_prox(0.5, 0.4), 0.0);
  EXPECT_DOUBLE_EQ(g.scalar_prox(0.5, 1.5), (1.5 - 0.5) / 0.75);
  EXPECT_DOUBLE_EQ(g.scalar_prox(0.5, 3.0), 3.0);
  EXPECT_DOUBLE_EQ(g.weak_convexity(), 0.5);
}

TEST(Prox, McpRejectsStepAtWeakConvexityLimit) {
  const auto g = ProxSpec::firm_threshold_mcp(1.0, 2.0);
  EXPECT_THROW(g.check_step(2.0), Error);
  EXPECT_NO_THROW(g.check_step(1.9));
}

TEST(Prox, BoxAndQuadratic) {
  EXPECT_DOUBLE_EQ(ProxSpec::box(-1.0, 2.0).scalar_prox(0.3, 5.0), 2.0);
  EXPECT_DOUBLE_EQ(ProxSpec::box(-1.0, 2.0).scalar_prox(0.3, -5.0), -1.0);
  EXPECT_DOUBLE_EQ(ProxSpec::quadratic(2.0).scalar_prox(0.5, 4.0), 2.0);
  EXPECT_DOUBLE_EQ(ProxSpec::zero().scalar_prox(0.7, 1.25), 1.25);
}

TEST(Prox, ToyBranchesAndBoundaryContinuity) {
  // middle branch x / (1 - 2 tau), outer branches (x +- 2 tau) / (1 + 2 tau)
  EXPECT_DOUBLE_EQ(toy_prox_piecewise(0.25, 0.1), 0.2);
  EXPECT_DOUBLE_EQ(toy_prox_piecewise(0.25, 1.0), 1.5 / 1.5);
  EXPECT_DOUBLE_EQ(toy_prox_piecewise(0.25, -2.0), -2.5 / 1.5);
  for (double tau : {0.05, 0.2, 0.29, 0.45}) {
    const double b = 0.5 - tau;
    for (double s : {-1.0, 1.0}) {
      const double left = toy_prox_piecewise(tau, s * (b - 1e-12));
      const double right = toy_prox_piecewise(tau, s * (b + 1e-12));
      EXPECT_NEAR(left, right, 1e-9) << "tau " << tau;
      EXPECT_NEAR(toy_prox_piecewise(tau, s * b), s * 0.5, 1e-12);
    }
  }
}

TEST(Prox, ToyRejectsLargeSteps) {
  EXPECT_THROW(toy_prox_piecewise(0.5, 1.0), Error);
  EXPECT_THROW(ProxSpec::toy_piecewise().prox(0.6, Vec{1.0}), Error);
}

TEST(Prox, MatchesGridOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> anchor(-3.0, 3.0);
  const ProxSpec specs[] = {ProxSpec::soft_threshold(0.7), ProxSpec::firm_threshold_mcp(0.5, 1.5),
                            ProxSpec::box(-0.4, 1.1), ProxSpec::quadratic(1.3),
                            ProxSpec::toy_piecewise(), ProxSpec::zero()};
  for (const auto& g : specs) {
    for (int i = 0; i < 40; ++i) {
      const double tau = g.weak_convexity() > 0 ? 0.9 / (g.weak_convexity() * 2.0) : 0.8;
      const double a = anchor(rng);
      EXPECT_NEAR(g.scalar_prox(tau, a), grid_prox(g, tau, a), 5e-4) << g.to_string() << " at " << a;
    }
  }
}

TEST(Prox, MinNormShift) {
  const auto g = ProxSpec::soft_threshold(1.0);
  EXPECT_DOUBLE_EQ(g.scalar_min_norm_shift(0.0, 0.4), 0.0);
  EXPECT_DOUBLE_EQ(g.scalar_min_norm_shift(0.0, 1.5), 0.5);
  EXPECT_DOUBLE_EQ(g.scalar_min_norm_shift(2.0, 0.5), 1.5);
  EXPECT_DOUBLE_EQ(ProxSpec::toy_piecewise().scalar_min_norm_shift(-5.0, 5.0), -3.0);
}

TEST(Prox, TextRoundTrip) {
  for (const auto& g : {ProxSpec::soft_threshold(0.003), ProxSpec::firm_threshold_mcp(0.1, 3.0),
                        ProxSpec::box(-1.0, 0.5), ProxSpec::quadratic(0.25), ProxSpec::toy_piecewise(),
                        ProxSpec::zero()})
    EXPECT_EQ(ProxSpec::parse(g.to_string()), g);
  EXPECT_THROW(ProxSpec::parse("soft_threshold(1,2)"), Error);
  EXPECT_THROW(ProxSpec::parse("l2"), Error);
}

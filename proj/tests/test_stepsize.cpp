#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "minmaxkit/error.hpp"
#include "minmaxkit/problems.hpp"
#include "minmaxkit/stepsize.hpp"

using namespace minmax;

namespace {

SmoothnessConstants toy() { return make_toy_problem().constants; }

}  // namespace

TEST(Bounds, Gdrga) {
  EXPECT_EQ(bounds_gdrga(toy(), 1.0), 0.5);
  EXPECT_DOUBLE_EQ(bounds_gdrga(SmoothnessConstants::make(0, 1, 1, 10, 1, 0), 1.0), 0.05);
  EXPECT_LT(bounds_gdrga(toy(), 1e-9), 1e-9);
}

TEST(Bounds, Pdrga) {
  EXPECT_NEAR(bounds_pdrga(toy(), 1.0), 0.29289321881345248, 1e-15);
  EXPECT_NEAR(bounds_pdrga(SmoothnessConstants::make(2, 1, 1, 1, 1, 0.1), 1.0), 0.29289321881345248, 1e-15);
  EXPECT_DOUBLE_EQ(bounds_pdrga(SmoothnessConstants::make(2, 1, 1, 1, 1, 100), 1.0), 0.01);
}

TEST(Bounds, PdrgaBelowGdrgaOnRandomConstants) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.05, 20.0), t(0.01, 1.0);
  for (int i = 0; i < 500; ++i) {
    const auto c = SmoothnessConstants::make(u(rng), u(rng), u(rng), u(rng), u(rng), u(rng));
    const double tau = t(rng);
    EXPECT_LE(bounds_pdrga(c, tau), bounds_gdrga(c, tau));
    for (double frac : {0.0, 0.5, 0.99}) {
      const double g1 = gamma_gdrga(c, tau, frac * bounds_gdrga(c, tau)).value;
      EXPECT_GT(g1, -0.5);
      EXPECT_LT(g1, 1.0);
      const double g2 = gamma_pdrga(c, tau, frac * bounds_pdrga(c, tau)).value;
      EXPECT_GT(g2, -0.5);
      EXPECT_LT(g2, 1.0);
    }
  }
}

TEST(Bounds, GdrgaMonotone) {
  const auto base = SmoothnessConstants::make(1, 1, 1, 2, 1, 0);
  EXPECT_LT(bounds_gdrga(base, 0.5), bounds_gdrga(base, 1.0));
  EXPECT_GT(bounds_gdrga(SmoothnessConstants::make(1, 1, 1, 2, 1.5, 0), 1.0), bounds_gdrga(base, 1.0));
  EXPECT_LT(bounds_gdrga(SmoothnessConstants::make(1, 2, 1, 2, 1, 0), 1.0), bounds_gdrga(base, 1.0));
  EXPECT_LT(bounds_gdrga(SmoothnessConstants::make(1, 1, 1, 4, 1, 0), 1.0), bounds_gdrga(base, 1.0));
}

TEST(Gamma, Gdrga) {
  EXPECT_NEAR(gamma_gdrga(toy(), 1.0, 0.29).value, 0.6682, 1e-15);
  EXPECT_DOUBLE_EQ(gamma_gdrga(toy(), 1.0, 0.0).value, 0.5);
  const auto edge = gamma_gdrga(toy(), 1.0, 0.5);
  EXPECT_DOUBLE_EQ(edge.value, 1.0);
  EXPECT_FALSE(edge.contracting);
}

TEST(Gamma, Pdrga) {
  EXPECT_NEAR(gamma_pdrga(toy(), 1.0, 0.2).value, 0.66925866829956539, 1e-14);
  EXPECT_DOUBLE_EQ(gamma_pdrga(toy(), 1.0, 0.0).value, 0.5);
  const auto near_edge = gamma_pdrga(toy(), 1.0, 0.2928);
  EXPECT_LT(near_edge.value, 1.0);
  EXPECT_GT(near_edge.value, 0.99);
  try {
    gamma_pdrga(toy(), 1.0, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDenominatorNonpositive);
  }
}

TEST(Gamma, PdrgaThetaFormAgreesAtCorollaryTheta) {
  const double theta = theta_star(1.0, 1.0).pdrga_theta;
  EXPECT_NEAR(gamma_pdrga_theta(toy(), 1.0, 0.2, theta).value, gamma_pdrga(toy(), 1.0, 0.2).value,
              1e-14);
}

TEST(Theta, BothChoices) {
  const auto a = theta_star(1.0, 1.0);
  EXPECT_NEAR(a.pdrga_theta, 0.70710678118654752, 1e-15);
  EXPECT_DOUBLE_EQ(a.delta_lemma_theta, 1.0);
  EXPECT_NEAR(theta_star(0.5, 2.0).pdrga_theta, 0.17677669529663688, 1e-15);
  double prev = a.pdrga_theta, prev2 = a.delta_lemma_theta;
  for (double k : {2.0, 5.0, 50.0}) {
    const auto t = theta_star(1.0, k);
    EXPECT_LT(t.pdrga_theta, prev);
    EXPECT_LT(t.delta_lemma_theta, prev2);
    EXPECT_GT(t.delta_lemma_theta, 0.0);
    prev = t.pdrga_theta;
    prev2 = t.delta_lemma_theta;
  }
}

TEST(Tables, JointlyLipschitz) {
  const auto r1 = table_jointly_lipschitz(1.0);
  EXPECT_EQ(r1.bound_lin, 1.0 / 64.0);
  EXPECT_EQ(r1.bound_bot, 1.0 / 12.0);
  EXPECT_EQ(r1.bound_ours, 0.5);
  const auto r3 = table_jointly_lipschitz(3.0);
  EXPECT_DOUBLE_EQ(r3.bound_lin, 1.0 / 256.0);
  EXPECT_DOUBLE_EQ(r3.bound_bot, 1.0 / 48.0);
  EXPECT_DOUBLE_EQ(r3.bound_ours, 1.0 / 18.0);
  for (double k : {1.0, 2.0, 5.0, 10.0, 100.0}) EXPECT_TRUE(table_jointly_lipschitz(k).ordered);
}

TEST(Tables, Blockwise) {
  const auto t = table_blockwise(toy());
  EXPECT_EQ(t.bound_cohen, 0.1);
  EXPECT_EQ(t.bound_ours, 0.5);
  EXPECT_TRUE(t.dominance_decidable);
  EXPECT_TRUE(t.ours_dominates);
  const auto b = table_blockwise(SmoothnessConstants::make(0, 1, 1, 1, 1, 0));
  EXPECT_DOUBLE_EQ(b.bound_cohen, 0.125);
  const auto n = table_blockwise(SmoothnessConstants::make(0, 1, 2, 1, 1, 0));
  EXPECT_FALSE(n.dominance_decidable);
  EXPECT_GT(n.bound_cohen, 0.0);
}

TEST(Compute, AllBounds) {
  const auto b = compute_bounds(toy(), 1.0);
  EXPECT_EQ(b.eta_y_max, 1.0);
  EXPECT_EQ(b.eta_x_max_gdrga, 0.5);
  EXPECT_LT(b.gamma_gdrga, 1.0);
  EXPECT_LT(b.gamma_pdrga, 1.0);
}

#include <gtest/gtest.h>

#include <cmath>

#include "minmaxkit/error.hpp"
#include "minmaxkit/imaging.hpp"
#include "minmaxkit/oracle.hpp"
#include "minmaxkit/solvers.hpp"

using namespace minmax;

namespace {

ImagingProblem small_blur(ProxSpec g) {
  const Shape s{8, 8};
  ImagingProblem ip;
  ip.a = make_blur_operator(Kernel2D::gaussian(3, 0.8), s);
  ip.b = gaussian_noise(s.size(), 3);
  ip.g = g;
  ip.a_norm = blur_spectral_norm(Kernel2D::gaussian(3, 0.8), s);
  ip.lambda = 0.9 * lambda_cap(ip.sigma, ip.a_norm);
  return ip;
}

}  // namespace

TEST(LambdaCap, FrozenValues) {
  EXPECT_NEAR(lambda_cap(0.03, 1.0), 0.000263603896932107, 1e-18);
  EXPECT_NEAR(lambda_cap(0.03, 0.24), 0.00109834957055, 1e-14);
  EXPECT_NEAR(0.00109 / 0.0009, 1.2111111111111111, 1e-15);
}

TEST(LambdaCap, Enforced) {
  auto ip = small_blur(ProxSpec::zero());
  ip.lambda = 1.01 * lambda_cap(ip.sigma, ip.a_norm);
  try {
    build_imaging_minmax(ip);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConstraintViolated);
  }
  ip.enforce_lambda_cap = false;
  EXPECT_NO_THROW(build_imaging_minmax(ip));
}

TEST(Imaging, Constants) {
  const auto ip = small_blur(ProxSpec::soft_threshold(0.01));
  const auto p = build_imaging_minmax(ip);
  const double mu = ip.sigma * ip.sigma / ip.lambda;
  EXPECT_DOUBLE_EQ(p.constants.mu, mu);
  EXPECT_DOUBLE_EQ(p.constants.l_yy, mu);
  EXPECT_DOUBLE_EQ(p.constants.l_xy, ip.a_norm);
  EXPECT_EQ(p.constants.l_xx, 0.0);
  EXPECT_EQ(p.constants.rho, 0.0);
  EXPECT_EQ(build_imaging_minmax(small_blur(ProxSpec::firm_threshold_mcp(0.1, 4.0))).constants.rho,
            0.25);
}

TEST(Imaging, ClosedFormMatchesIteration) {
  const auto ip = small_blur(ProxSpec::quadratic(0.5));
  auto p = build_imaging_minmax(ip);
  const Vec x = gaussian_noise(64, 11);
  const auto closed = solve_inner(p, x);
  p.y_star_closed_form.reset();
  const auto iter = solve_inner(p, x, 1e-12);
  EXPECT_GT(iter.inner_iterations, 0);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(closed.y_star[i], iter.y_star[i], 1e-9);
  EXPECT_NEAR(closed.phi, iter.phi, 1e-9 * (1.0 + std::abs(closed.phi)));
}

TEST(Imaging, EnergyIdentity) {
  for (auto g : {ProxSpec::zero(), ProxSpec::soft_threshold(0.02), ProxSpec::quadratic(2.0)}) {
    const auto ip = small_blur(g);
    const auto p = build_imaging_minmax(ip);
    const Vec x = gaussian_noise(64, 5);
    const Vec r = axpy(ip.a.apply(x), -1.0, ip.b);
    const double expected = ip.lambda / (2.0 * ip.sigma * ip.sigma) * dot(r, r) + g.value(x);
    EXPECT_NEAR(solve_inner(p, x).phi, expected, 1e-10 * std::abs(expected)) << g.to_string();
  }
}

TEST(Imaging, IdentityOperatorClosedForms) {
  ImagingProblem ip;
  ip.a = identity_operator(3);
  ip.b = Vec(3, 0.0);
  ip.a_norm = 1.0;
  ip.g = ProxSpec::zero();
  ip.lambda = 0.0002;
  const auto p = build_imaging_minmax(ip);
  const Vec x{0.3, -0.1, 0.7};
  const auto o = solve_inner(p, x);
  const double s = ip.lambda / (ip.sigma * ip.sigma);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(o.y_star[i], s * x[i], 1e-15);
    EXPECT_NEAR(o.grad_phi[i], s * x[i], 1e-15);
  }
}

TEST(Imaging, UnitTauLandsOnMaximizer) {
  const auto ip = small_blur(ProxSpec::soft_threshold(0.01));
  const auto p = build_imaging_minmax(ip);
  const auto cfg = StepSizeConfig::from_tau(1e-4, 1.0, p.constants);
  for (Scheme sc : {Scheme::kGdRga, Scheme::kPdRga}) {
    const auto s = step(sc, p, {gaussian_noise(64, 1), gaussian_noise(64, 2), 0}, cfg);
    const Vec ys = solve_inner(p, s.x).y_star;
    for (std::size_t i = 0; i < ys.size(); ++i)
      EXPECT_NEAR(s.y[i], ys[i], 1e-12 * (1.0 + std::abs(ys[i])));
  }
}

TEST(Imaging, MinNormGradient) {
  // at x = 0 the soft-threshold subdifferential absorbs small A^T y
  ImagingProblem ip;
  ip.a = identity_operator(2);
  ip.b = Vec{-1e-6, 2.0};
  ip.a_norm = 1.0;
  ip.g = ProxSpec::soft_threshold(0.5);
  ip.lambda = 0.0002;
  const auto p = build_imaging_minmax(ip);
  const auto g = p.eval_grad_x(Vec{0.0, 0.0}, Vec{0.3, -0.7});
  EXPECT_EQ(g[0], 0.0);
  EXPECT_NEAR(g[1], -0.2, 1e-15);
}

TEST(Setup, DeblurAndSuperRes) {
  DeblurOptions d;
  d.n = 32;
  const auto a = make_deblur_setup(d);
  EXPECT_EQ(a.truth.shape, (Shape{32, 32}));
  EXPECT_NEAR(a.problem.lambda, lambda_cap(d.sigma, a.problem.a_norm), 1e-18);
  EXPECT_NEAR(a.problem.a_norm, 1.0, 1e-12);

  SuperResOptions s;
  s.n = 32;
  const auto b = make_superres_setup(s);
  EXPECT_EQ(b.observation_shape, (Shape{16, 16}));
  EXPECT_EQ(b.observation.shape, (Shape{32, 32}));
  EXPECT_NEAR(b.problem.a_norm, 0.5, 1e-3);
  const auto again = make_superres_setup(s);
  EXPECT_EQ(again.problem.b, b.problem.b);
}

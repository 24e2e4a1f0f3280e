#include "minmaxkit/stepsize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "minmaxkit/error.hpp"
#include "minmaxkit/text.hpp"

namespace minmax {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

void check_tau(double tau) {
  require(tau > 0.0 && tau <= 1.0, ErrorCode::kOutOfRangeStepSize,
          "tau must lie in (0, 1], got " + format_double(tau));
}

}  // namespace

double bounds_gdrga(const SmoothnessConstants& c, double tau) {
  check_tau(tau);
  return tau * c.beta() / (2.0 * c.kappa_y());
}

double bounds_pdrga(const SmoothnessConstants& c, double tau) {
  check_tau(tau);
  const double coupling_side = tau * c.beta() / (kSqrt2 * (kSqrt2 * c.kappa_y() + tau));
  const double prox_side = c.rho > 0.0 ? 1.0 / c.rho : std::numeric_limits<double>::infinity();
  return std::min(coupling_side, prox_side);
}

GammaValue gamma_gdrga(const SmoothnessConstants& c, double tau, double eta_x) {
  check_tau(tau);
  const double kappa = c.kappa_y();
  const double beta = c.beta();
  const double g = 1.0 - tau / (2.0 * kappa) + 2.0 * kappa * eta_x * eta_x / (tau * beta * beta);
  return {g, std::abs(g) < 1.0};
}

GammaValue gamma_pdrga_theta(const SmoothnessConstants& c, double tau, double eta_x,
                             double theta) {
  check_tau(tau);
  require(theta > 0.0, ErrorCode::kInvalidArgument, "theta must be positive");
  const double kappa = c.kappa_y();
  const double beta = c.beta();
  const double denom = beta * beta - 2.0 * eta_x * eta_x * (1.0 + 1.0 / theta);
  require(denom > 0.0, ErrorCode::kDenominatorNonpositive,
          "beta^2 - 2 eta_x^2 (1 + 1/theta) = " + format_double(denom));
  const double g = 1.0 - tau / (2.0 * kappa) +
                   2.0 * kappa * eta_x * eta_x * (1.0 + theta) / (tau * denom);
  return {g, std::abs(g) < 1.0};
}

GammaValue gamma_pdrga(const SmoothnessConstants& c, double tau, double eta_x) {
  check_tau(tau);
  const double kappa = c.kappa_y();
  const double beta = c.beta();
  const double s = kSqrt2 * kappa + tau;
  const double denom = beta * beta * tau - 2.0 * s * eta_x * eta_x;
  require(denom > 0.0, ErrorCode::kDenominatorNonpositive,
          "beta^2 tau - 2 (sqrt2 kappa + tau) eta_x^2 = " + format_double(denom));
  const double g = 1.0 - tau / (2.0 * kappa) + kSqrt2 * s * eta_x * eta_x / denom;
  return {g, std::abs(g) < 1.0};
}

ThetaPair theta_star(double tau, double kappa_y) {
  check_tau(tau);
  require(kappa_y >= 1.0, ErrorCode::kInvalidArgument, "kappa_y must be >= 1");
  const double k3 = kappa_y * kappa_y * kappa_y;
  return {tau / (kSqrt2 * kappa_y),
          (2.0 * kappa_y - tau) * (kappa_y + tau) * (kappa_y + tau) / (2.0 * k3) - 1.0};
}

JointlyLipschitzRow table_jointly_lipschitz(double kappa_y) {
  require(kappa_y >= 1.0, ErrorCode::kInvalidArgument, "kappa_y must be >= 1");
  const double kp1 = (kappa_y + 1.0) * (kappa_y + 1.0);
  JointlyLipschitzRow row{kappa_y, 1.0 / (16.0 * kp1), 1.0 / (3.0 * kp1),
                          1.0 / (2.0 * kappa_y * kappa_y), false};
  row.ordered = row.bound_lin < row.bound_bot && row.bound_bot < row.bound_ours;
  return row;
}

BlockwiseRow table_blockwise(const SmoothnessConstants& c, double tau) {
  check_tau(tau);
  const double kappa = c.kappa_y();
  BlockwiseRow row;
  row.bound_cohen = c.mu / (c.mu * (c.l_xy * c.l_xy + c.l_phi()) +
                            2.0 * kappa * (2.0 * kappa + 1.0) * c.l_yx * c.l_yx);
  row.bound_ours = bounds_gdrga(c, tau);
  row.dominance_decidable = c.l_xy == c.l_yx;
  row.ours_dominates = row.dominance_decidable && row.bound_ours >= row.bound_cohen;
  return row;
}

StepSizeBounds compute_bounds(const SmoothnessConstants& c, double tau) {
  StepSizeBounds b;
  b.eta_y_max = 1.0 / c.l_yy;
  b.eta_x_max_gdrga = bounds_gdrga(c, tau);
  b.eta_x_max_pdrga = bounds_pdrga(c, tau);
  b.gamma_gdrga = gamma_gdrga(c, tau, kAutoStepFraction * b.eta_x_max_gdrga).value;
  b.gamma_pdrga = gamma_pdrga(c, tau, kAutoStepFraction * b.eta_x_max_pdrga).value;
  b.theta_star_pdrga = theta_star(tau, c.kappa_y()).pdrga_theta;
  return b;
}

}  // namespace minmax

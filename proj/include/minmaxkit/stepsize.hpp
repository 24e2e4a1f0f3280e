#pragma once

#include "minmaxkit/problem.hpp"

namespace minmax {

/// Supremum of admissible eta_x for GD-RGA: tau * beta / (2 kappa_y).
double bounds_gdrga(const SmoothnessConstants& c, double tau);

/// Supremum for PD-RGA: min(tau beta / (sqrt2 (sqrt2 kappa_y + tau)), 1 / rho).
double bounds_pdrga(const SmoothnessConstants& c, double tau);

/// Contraction factor of the delta recursion. `contracting` is |value| < 1.
struct GammaValue {
  double value = 0.0;
  bool contracting = false;
};

/// 1 - tau / (2 kappa) + 2 kappa eta_x^2 / (tau beta^2)
GammaValue gamma_gdrga(const SmoothnessConstants& c, double tau, double eta_x);

/// PD-RGA factor for a general theta > 0:
/// 1 - tau / (2 kappa) + 2 kappa eta^2 (1 + theta) / (tau (beta^2 - 2 eta^2 (1 + 1/theta))).
/// Throws DenominatorNonpositive when beta^2 <= 2 eta^2 (1 + 1/theta).
GammaValue gamma_pdrga_theta(const SmoothnessConstants& c, double tau, double eta_x,
                             double theta);

/// PD-RGA factor at theta = tau / (sqrt2 kappa):
/// 1 - tau / (2 kappa) + sqrt2 (sqrt2 kappa + tau) eta^2 / (beta^2 tau - 2 (sqrt2 kappa + tau) eta^2).
/// Throws DenominatorNonpositive when the denominator is <= 0.
GammaValue gamma_pdrga(const SmoothnessConstants& c, double tau, double eta_x);

/// The two distinct theta choices of the analysis.
struct ThetaPair {
  double pdrga_theta;        // tau / (sqrt2 kappa): maximizes the PD-RGA step range
  double delta_lemma_theta;  // (2 kappa - tau)(kappa + tau)^2 / (2 kappa^3) - 1
};

ThetaPair theta_star(double tau, double kappa_y);

/// eta_x / eta_y ratios under a jointly Lipschitz gradient.
struct JointlyLipschitzRow {
  double kappa_y;
  double bound_lin;   // 1 / (16 (kappa + 1)^2)
  double bound_bot;   // 1 / (3 (kappa + 1)^2)
  double bound_ours;  // 1 / (2 kappa^2)
  bool ordered;       // bound_lin < bound_bot < bound_ours
};

JointlyLipschitzRow table_jointly_lipschitz(double kappa_y);

struct BlockwiseRow {
  double bound_cohen;  // mu / (mu (l_xy^2 + l_phi) + 2 kappa (2 kappa + 1) l_yx^2)
  double bound_ours;   // tau mu / (2 kappa l_xy l_yx)
  /// Set only when l_xy == l_yx, where the comparison is decidable.
  bool dominance_decidable = false;
  bool ours_dominates = false;
};

BlockwiseRow table_blockwise(const SmoothnessConstants& c, double tau = 1.0);

struct StepSizeBounds {
  double eta_y_max;
  double eta_x_max_gdrga;
  double eta_x_max_pdrga;
  double gamma_gdrga;        // at eta_x = auto_fraction * eta_x_max_gdrga
  double gamma_pdrga;        // at eta_x = auto_fraction * eta_x_max_pdrga
  double theta_star_pdrga;
};

inline constexpr double kAutoStepFraction = 0.99;

StepSizeBounds compute_bounds(const SmoothnessConstants& c, double tau);

}  // namespace minmax

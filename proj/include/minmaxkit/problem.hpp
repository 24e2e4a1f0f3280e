#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minmaxkit/prox.hpp"
#include "minmaxkit/vec.hpp"

namespace minmax {

/// Block-wise smoothness and curvature constants of the coupling.
///
/// Construct through make(); the factory validates the fields and inflates
/// l_yy up to mu when the declared inner condition number would fall below 1.
struct SmoothnessConstants {
  double l_xx = 0.0;  // of grad_x in x
  double l_xy = 1.0;  // of grad_x in y
  double l_yx = 1.0;  // of grad_y in x
  double l_yy = 1.0;  // of grad_y in y
  double mu = 1.0;    // strong concavity in y
  double rho = 0.0;   // weak convexity in x

  bool l_yy_inflated = false;
  double declared_l_yy = 1.0;

  static SmoothnessConstants make(double l_xx, double l_xy, double l_yx, double l_yy, double mu,
                                  double rho);

  double kappa_y() const { return l_yy / mu; }
  double beta() const { return mu / (l_xy * l_yx); }
  double l_phi() const { return l_xx + l_xy * l_yx / mu; }
};

struct EffectiveConstants {
  double kappa_y;
  double beta;
  double l_phi;
};

EffectiveConstants effective_constants(const SmoothnessConstants& c);

enum class ConcavitySource { kCouplingStronglyConcave, kRegularizerStronglyConvex };

using PartialGradient = std::function<Vec(VecView x, VecView y)>;
using CouplingValue = std::function<double(VecView x, VecView y)>;
/// prox of eta * coupling(., y) evaluated at x.
using CouplingProx = std::function<Vec(double eta, VecView x, VecView y)>;
using SolutionMap = std::function<Vec(VecView x)>;

/// min over x, max over y of coupling(x, y) - h(y).
///
/// Immutable after construction; every callable must be safe for concurrent
/// invocation. The checked accessors verify dimensions and finiteness.
struct MinMaxProblem {
  std::string id;
  std::size_t dim_x = 0;
  std::size_t dim_y = 0;
  PartialGradient grad_x;
  PartialGradient grad_y;
  CouplingValue coupling;
  ProxFriendlyFunction h = ProxSpec::zero();
  std::optional<CouplingProx> prox_x;
  std::optional<SolutionMap> y_star_closed_form;
  SmoothnessConstants constants;
  ConcavitySource concavity_source = ConcavitySource::kCouplingStronglyConcave;
  /// Known lower bound of phi, when available; feeds the stationarity rate.
  std::optional<double> phi_lower_bound;

  /// Throws on inconsistent fields.
  void validate() const;

  Vec eval_grad_x(VecView x, VecView y) const;
  Vec eval_grad_y(VecView x, VecView y) const;
  double eval_coupling(VecView x, VecView y) const;
  /// coupling(x, y) - h(y)
  double eval_objective(VecView x, VecView y) const;
  Vec eval_prox_x(double eta, VecView x, VecView y) const;

  void check_x(VecView x) const;
  void check_y(VecView y) const;
};

struct ConstantCheck {
  std::string name;
  double declared = 0.0;
  double max_observed = 0.0;  // largest difference quotient seen
  double max_ratio = 0.0;     // max_observed / declared
  bool violated = false;
};

struct ValidationReport {
  std::vector<ConstantCheck> checks;  // l_xx, l_xy, l_yx, l_yy in that order
  std::int64_t pairs_evaluated = 0;
  bool ok() const;
};

/// Falsification test for the declared block-wise Lipschitz constants: draws
/// `trials` random pairs from `samples` and records difference quotients.
ValidationReport validate_problem(const MinMaxProblem& p,
                                  const std::vector<std::pair<Vec, Vec>>& samples,
                                  std::int64_t trials, std::uint64_t seed = 0);

}  // namespace minmax

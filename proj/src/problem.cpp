#include "minmaxkit/problem.hpp"

#include <cmath>
#include <random>

#include "minmaxkit/error.hpp"
#include "minmaxkit/text.hpp"

namespace minmax {

SmoothnessConstants SmoothnessConstants::make(double l_xx, double l_xy, double l_yx, double l_yy,
                                              double mu, double rho) {
  for (double v : {l_xx, l_xy, l_yx, l_yy, mu, rho})
    require(std::isfinite(v), ErrorCode::kInvalidArgument, "smoothness constants must be finite");
  require(l_xx >= 0.0 && rho >= 0.0, ErrorCode::kInvalidArgument, "l_xx and rho must be >= 0");
  require(l_xy > 0.0 && l_yx > 0.0 && l_yy > 0.0 && mu > 0.0, ErrorCode::kInvalidArgument,
          "l_xy, l_yx, l_yy and mu must be > 0");
  SmoothnessConstants c;
  c.l_xx = l_xx;
  c.l_xy = l_xy;
  c.l_yx = l_yx;
  c.l_yy = l_yy;
  c.mu = mu;
  c.rho = rho;
  c.declared_l_yy = l_yy;
  if (l_yy < mu) {
    // kappa_y >= 1 is required by the step-size analysis; a larger l_yy is
    // always a valid Lipschitz constant.
    c.l_yy = mu;
    c.l_yy_inflated = true;
  }
  return c;
}

EffectiveConstants effective_constants(const SmoothnessConstants& c) {
  return {c.kappa_y(), c.beta(), c.l_phi()};
}

void MinMaxProblem::validate() const {
  require(dim_x > 0 && dim_y > 0, ErrorCode::kDimensionMismatch, id + ": dimensions must be positive");
  require(static_cast<bool>(grad_x) && static_cast<bool>(grad_y) && static_cast<bool>(coupling),
          ErrorCode::kInvalidArgument, id + ": grad_x, grad_y and coupling are required");
  if (concavity_source == ConcavitySource::kRegularizerStronglyConvex) {
    require(h.strong_convexity() >= constants.mu, ErrorCode::kInvalidArgument,
            id + ": h must be mu-strongly convex when it carries the concavity");
  }
  require(h.weak_convexity() == 0.0, ErrorCode::kInvalidArgument, id + ": h must be convex");
}

void MinMaxProblem::check_x(VecView x) const {
  require(x.size() == dim_x, ErrorCode::kDimensionMismatch,
          id + ": x has " + std::to_string(x.size()) + " entries, expected " + std::to_string(dim_x));
}

void MinMaxProblem::check_y(VecView y) const {
  require(y.size() == dim_y, ErrorCode::kDimensionMismatch,
          id + ": y has " + std::to_string(y.size()) + " entries, expected " + std::to_string(dim_y));
}

Vec MinMaxProblem::eval_grad_x(VecView x, VecView y) const {
  check_x(x);
  check_y(y);
  Vec g = grad_x(x, y);
  require(g.size() == dim_x, ErrorCode::kDimensionMismatch, id + ": grad_x returned wrong size");
  require(all_finite(g), ErrorCode::kNonFiniteEvaluation, id + ": grad_x is not finite");
  return g;
}

Vec MinMaxProblem::eval_grad_y(VecView x, VecView y) const {
  check_x(x);
  check_y(y);
  Vec g = grad_y(x, y);
  require(g.size() == dim_y, ErrorCode::kDimensionMismatch, id + ": grad_y returned wrong size");
  require(all_finite(g), ErrorCode::kNonFiniteEvaluation, id + ": grad_y is not finite");
  return g;
}

double MinMaxProblem::eval_coupling(VecView x, VecView y) const {
  check_x(x);
  check_y(y);
  const double v = coupling(x, y);
  require(std::isfinite(v), ErrorCode::kNonFiniteEvaluation, id + ": coupling is not finite");
  return v;
}

double MinMaxProblem::eval_objective(VecView x, VecView y) const {
  const double hv = h.value(y);
  require(std::isfinite(hv), ErrorCode::kNonFiniteEvaluation, id + ": h(y) is not finite");
  return eval_coupling(x, y) - hv;
}

Vec MinMaxProblem::eval_prox_x(double eta, VecView x, VecView y) const {
  require(prox_x.has_value(), ErrorCode::kMissingProxOracle, id + ": no prox in x available");
  check_x(x);
  check_y(y);
  Vec z = (*prox_x)(eta, x, y);
  require(z.size() == dim_x, ErrorCode::kDimensionMismatch, id + ": prox_x returned wrong size");
  require(all_finite(z), ErrorCode::kNonFiniteEvaluation, id + ": prox_x is not finite");
  return z;
}

bool ValidationReport::ok() const {
  for (const auto& c : checks)
    if (c.violated) return false;
  return true;
}

ValidationReport validate_problem(const MinMaxProblem& p,
                                  const std::vector<std::pair<Vec, Vec>>& samples,
                                  std::int64_t trials, std::uint64_t seed) {
  require(!samples.empty(), ErrorCode::kInvalidArgument, "validate_problem needs samples");
  for (const auto& [x, y] : samples) {
    p.check_x(x);
    p.check_y(y);
  }
  constexpr double kRelativeSlack = 1e-9;
  const auto& c = p.constants;
  ValidationReport report;
  report.checks = {{"l_xx", c.l_xx}, {"l_xy", c.l_xy}, {"l_yx", c.l_yx}, {"l_yy", c.l_yy}};

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
  auto record = [](ConstantCheck& chk, double diff, double step) {
    if (step <= 0.0) return;
    const double q = diff / step;
    chk.max_observed = std::max(chk.max_observed, q);
    if (chk.declared > 0.0) {
      chk.max_ratio = std::max(chk.max_ratio, q / chk.declared);
    } else if (q > 0.0) {
      chk.max_ratio = INFINITY;
    }
    if (q > chk.declared * (1.0 + kRelativeSlack) + 1e-300) chk.violated = true;
  };

  for (std::int64_t t = 0; t < trials; ++t) {
    const auto& [x1, y1] = samples[pick(rng)];
    const auto& [x2, y2] = samples[pick(rng)];
    const double dx = distance(x1, x2);
    const double dy = distance(y1, y2);
    // x varies, y frozen at y1
    record(report.checks[0], distance(p.eval_grad_x(x1, y1), p.eval_grad_x(x2, y1)), dx);
    record(report.checks[2], distance(p.eval_grad_y(x1, y1), p.eval_grad_y(x2, y1)), dx);
    // y varies, x frozen at x1
    record(report.checks[1], distance(p.eval_grad_x(x1, y1), p.eval_grad_x(x1, y2)), dy);
    record(report.checks[3], distance(p.eval_grad_y(x1, y1), p.eval_grad_y(x1, y2)), dy);
    ++report.pairs_evaluated;
  }
  return report;
}

}  // namespace minmax

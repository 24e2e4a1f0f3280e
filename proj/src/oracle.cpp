#include "minmaxkit/oracle.hpp"

#include <cmath>

#include "minmaxkit/text.hpp"

namespace minmax {

namespace {

OracleResult finish(const MinMaxProblem& p, VecView x, Vec y, std::int64_t iterations,
                    double residual, double error_bound) {
  OracleResult r;
  r.phi = p.eval_objective(x, y);
  r.grad_phi = p.eval_grad_x(x, y);
  r.y_star = std::move(y);
  r.inner_iterations = iterations;
  r.inner_residual = residual;
  r.y_error_bound = error_bound;
  return r;
}

}  // namespace

OracleResult solve_inner(const MinMaxProblem& p, VecView x, double tol, std::int64_t max_iter,
                         std::optional<VecView> warm_start) {
  require(tol > 0.0, ErrorCode::kInvalidArgument, "inner tolerance must be positive");
  p.check_x(x);
  if (p.y_star_closed_form) {
    Vec y = (*p.y_star_closed_form)(x);
    p.check_y(y);
    require(all_finite(y), ErrorCode::kNonFiniteEvaluation, p.id + ": y*(x) is not finite");
    return finish(p, x, std::move(y), 0, 0.0, 0.0);
  }

  const double eta = 1.0 / p.constants.l_yy;
  const double kappa = p.constants.kappa_y();
  Vec y = warm_start ? Vec(warm_start->begin(), warm_start->end()) : Vec(p.dim_y, 0.0);
  p.check_y(y);
  double residual = INFINITY;
  for (std::int64_t t = 0; t < max_iter; ++t) {
    Vec next = p.h.prox(eta, axpy(y, eta, p.eval_grad_y(x, y)));
    require(all_finite(next), ErrorCode::kNonFiniteEvaluation, p.id + ": inner iterate diverged");
    residual = distance(next, y) / eta;
    y = std::move(next);
    if (residual <= tol) {
      // contraction q = kappa / (kappa + 1): |y - y*| <= q / (1 - q) |y - y_prev|
      return finish(p, x, std::move(y), t + 1, residual, kappa * eta * residual);
    }
  }
  auto best = finish(p, x, std::move(y), max_iter, residual, kappa * eta * residual);
  throw MaxIterExceeded("inner ascent stopped at residual " + format_double(residual) +
                            " after " + std::to_string(max_iter) + " iterations",
                        std::move(best));
}

Vec grad_phi_fd(const MinMaxProblem& p, VecView x, double step, double tol) {
  require(step > 0.0, ErrorCode::kInvalidArgument, "finite-difference step must be positive");
  p.check_x(x);
  Vec g(p.dim_x);
  Vec probe(x.begin(), x.end());
  for (std::size_t i = 0; i < p.dim_x; ++i) {
    probe[i] = x[i] + step;
    const double up = solve_inner(p, probe, tol / 10.0).phi;
    probe[i] = x[i] - step;
    const double down = solve_inner(p, probe, tol / 10.0).phi;
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

OracleResult InnerOracle::operator()(VecView x) {
  ++evaluations_;
  std::optional<VecView> start;
  if (warm_start_ && last_) start = VecView(*last_);
  OracleResult r = solve_inner(p_, x, tol_, max_iter_, start);
  if (warm_start_) last_ = r.y_star;
  return r;
}

}  // namespace minmax

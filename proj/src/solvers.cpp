#include "minmaxkit/solvers.hpp"

#include <chrono>
#include <cmath>

#include "minmaxkit/error.hpp"
#include "minmaxkit/oracle.hpp"
#include "minmaxkit/text.hpp"

namespace minmax {

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kGdRga: return "gdrga";
    case Scheme::kPdRga: return "pdrga";
    case Scheme::kPpga: return "ppga";
  }
  return "gdrga";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "gdrga") return Scheme::kGdRga;
  if (name == "pdrga") return Scheme::kPdRga;
  if (name == "ppga") return Scheme::kPpga;
  throw Error(ErrorCode::kConfigParse, "unknown scheme '" + std::string(name) + "'");
}

StepSizeConfig StepSizeConfig::make(double eta_x, double eta_y, const SmoothnessConstants& c) {
  require(std::isfinite(eta_x) && eta_x >= 0.0, ErrorCode::kOutOfRangeStepSize,
          "eta_x must be finite and >= 0");
  require(std::isfinite(eta_y) && eta_y > 0.0, ErrorCode::kOutOfRangeStepSize,
          "eta_y must be positive");
  double tau = eta_y * c.l_yy;
  if (tau > 1.0 && tau <= 1.0 + 1e-12) tau = 1.0;
  require(tau > 0.0 && tau <= 1.0, ErrorCode::kOutOfRangeStepSize,
          "eta_y * l_yy = " + format_double(tau) + " is outside (0, 1]");
  return {eta_x, eta_y, tau};
}

StepSizeConfig StepSizeConfig::from_tau(double eta_x, double tau, const SmoothnessConstants& c) {
  require(tau > 0.0 && tau <= 1.0, ErrorCode::kOutOfRangeStepSize, "tau must lie in (0, 1]");
  return {eta_x, tau / c.l_yy, tau};
}

std::optional<std::string> check_prox_step(const MinMaxProblem& p, const StepSizeConfig& cfg,
                                           bool override_assumption) {
  const double prod = cfg.eta_x * p.constants.rho;
  if (prod < 1.0) return std::nullopt;
  const std::string msg = "eta_x * rho = " + format_double(prod) +
                          " >= 1: the x-prox may be multi-valued";
  require(override_assumption, ErrorCode::kIllPosedProx, msg);
  return "warning: " + msg + " (override in effect)";
}

namespace {

void log_eval(EvalLog* log, const char* map, VecView x, VecView y) {
  if (log) log->push_back({map, Vec(x.begin(), x.end()), Vec(y.begin(), y.end())});
}

}  // namespace

Vec regularized_ascent(const MinMaxProblem& p, VecView x_arg, VecView y, double eta_y,
                       EvalLog* log) {
  log_eval(log, "grad_y", x_arg, y);
  const Vec g = p.eval_grad_y(x_arg, y);
  const Vec anchor = axpy(y, eta_y, g);
  log_eval(log, "prox_h", x_arg, anchor);
  Vec next = p.h.prox(eta_y, anchor);
  require(all_finite(next), ErrorCode::kNonFiniteEvaluation, p.id + ": y iterate is not finite");
  return next;
}

SolverState gd_rga_step(const MinMaxProblem& p, const SolverState& s, const StepSizeConfig& cfg,
                        EvalLog* log) {
  log_eval(log, "grad_x", s.x, s.y);
  Vec x_next = axpy(s.x, -cfg.eta_x, p.eval_grad_x(s.x, s.y));
  require(all_finite(x_next), ErrorCode::kNonFiniteEvaluation, p.id + ": x iterate is not finite");
  Vec y_next = regularized_ascent(p, x_next, s.y, cfg.eta_y, log);
  return {std::move(x_next), std::move(y_next), s.k + 1};
}

SolverState pd_rga_step(const MinMaxProblem& p, const SolverState& s, const StepSizeConfig& cfg,
                        EvalLog* log) {
  require(p.prox_x.has_value(), ErrorCode::kMissingProxOracle,
          p.id + ": PD-RGA needs a prox of the coupling in x");
  log_eval(log, "prox_x", s.x, s.y);
  Vec x_next = p.eval_prox_x(cfg.eta_x, s.x, s.y);
  Vec y_next = regularized_ascent(p, x_next, s.y, cfg.eta_y, log);
  return {std::move(x_next), std::move(y_next), s.k + 1};
}

SolverState ppga_step(const MinMaxProblem& p, const SolverState& s, const StepSizeConfig& cfg,
                      EvalLog* log) {
  log_eval(log, "grad_x", s.x, s.y);
  Vec x_next = axpy(s.x, -cfg.eta_x, p.eval_grad_x(s.x, s.y));
  require(all_finite(x_next), ErrorCode::kNonFiniteEvaluation, p.id + ": x iterate is not finite");
  Vec y_next = regularized_ascent(p, s.x, s.y, cfg.eta_y, log);
  return {std::move(x_next), std::move(y_next), s.k + 1};
}

SolverState step(Scheme scheme, const MinMaxProblem& p, const SolverState& s,
                 const StepSizeConfig& cfg, EvalLog* log) {
  switch (scheme) {
    case Scheme::kGdRga: return gd_rga_step(p, s, cfg, log);
    case Scheme::kPdRga: return pd_rga_step(p, s, cfg, log);
    case Scheme::kPpga: return ppga_step(p, s, cfg, log);
  }
  return s;
}

double pd_rga_implicit_residual(const MinMaxProblem& p, const SolverState& before,
                                const SolverState& after, const StepSizeConfig& cfg) {
  const Vec g = p.eval_grad_x(after.x, before.y);
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = after.x[i] - before.x[i] + cfg.eta_x * g[i];
    s += r * r;
  }
  return std::sqrt(s);
}

namespace {

TraceRecord make_record(const SolverState& s) { return {s.k, s.x, s.y, NAN, NAN, NAN, {}}; }

void fill_record(TraceRecord& r, const OracleResult& o, double& y_error_bound) {
  r.y_star = o.y_star;
  r.phi = o.phi;
  r.grad_norm = norm(o.grad_phi);
  r.delta = squared_distance(o.y_star, r.y);
  y_error_bound = std::max(y_error_bound, o.y_error_bound);
}

void count(EvaluationCounts& c, Scheme scheme) {
  if (scheme == Scheme::kPdRga) {
    ++c.prox_x;
  } else {
    ++c.grad_x;
  }
  ++c.grad_y;
  ++c.prox_h;
}

}  // namespace

void attach_oracle(IterateTrace& trace, const MinMaxProblem& p, double inner_tol) {
  InnerOracle oracle(p, inner_tol);
  trace.y_error_bound = 0.0;
  for (auto& r : trace.records) fill_record(r, oracle(r.x), trace.y_error_bound);
  trace.inner_tol = inner_tol;
  trace.has_oracle = true;
  trace.diagnostic_evaluations += oracle.evaluations();
}

IterateTrace run_solver(const MinMaxProblem& p, Scheme scheme, const StepSizeConfig& cfg,
                        const SolverState& init, const StopRule& stop,
                        const TraceOptions& options) {
  p.check_x(init.x);
  p.check_y(init.y);
  require(stop.max_iter >= 0, ErrorCode::kInvalidArgument, "max_iter must be >= 0");
  require(!stop.grad_tol || options.record_oracle, ErrorCode::kInvalidArgument,
          "gradient-based stopping needs oracle recording");
  if (scheme == Scheme::kPdRga)
    require(p.prox_x.has_value(), ErrorCode::kMissingProxOracle,
            p.id + ": PD-RGA needs a prox of the coupling in x");

  const auto start = std::chrono::steady_clock::now();
  IterateTrace trace;
  trace.scheme = scheme;
  trace.cfg = cfg;
  trace.problem_id = p.id;
  trace.inner_tol = options.inner_tol;
  trace.has_oracle = options.record_oracle;

  InnerOracle oracle(p, options.inner_tol, kDefaultInnerMaxIter, options.warm_start);
  SolverState state = init;
  state.k = 0;
  trace.stop_reason = "max_iter";
  for (;;) {
    TraceRecord rec = make_record(state);
    if (options.record_oracle) fill_record(rec, oracle(state.x), trace.y_error_bound);
    const bool converged = stop.grad_tol && rec.grad_norm < *stop.grad_tol;
    trace.records.push_back(std::move(rec));
    if (converged) {
      trace.stop_reason = "grad_tol";
      break;
    }
    if (state.k >= stop.max_iter) break;
    state = step(scheme, p, state, cfg);
    count(trace.solver_evaluations, scheme);
  }
  trace.diagnostic_evaluations = oracle.evaluations();
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

}  // namespace minmax

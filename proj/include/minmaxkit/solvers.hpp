#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "minmaxkit/problem.hpp"

namespace minmax {

enum class Scheme { kGdRga, kPdRga, kPpga };

std::string_view scheme_name(Scheme s);  // "gdrga", "pdrga", "ppga"
Scheme parse_scheme(std::string_view name);

struct SolverState {
  Vec x;
  Vec y;
  std::int64_t k = 0;
};

/// eta_y = tau / l_yy with tau in (0, 1].
struct StepSizeConfig {
  double eta_x = 0.0;
  double eta_y = 0.0;
  double tau = 0.0;

  /// Derives tau from eta_y and the constants; throws OutOfRangeStepSize when
  /// tau leaves (0, 1]. Rounding up to 1e-12 above 1 is snapped to 1.
  static StepSizeConfig make(double eta_x, double eta_y, const SmoothnessConstants& c);
  static StepSizeConfig from_tau(double eta_x, double tau, const SmoothnessConstants& c);
};

/// Checks the single-valuedness condition eta_x * rho < 1 for PD-RGA. Returns
/// a warning string when the condition fails and `override_assumption` is set;
/// throws IllPosedProx when it fails without the override.
std::optional<std::string> check_prox_step(const MinMaxProblem& p, const StepSizeConfig& cfg,
                                           bool override_assumption);

/// Instrumentation of a single step: which map was evaluated at which point.
struct EvalRecord {
  std::string map;  // "grad_x", "grad_y", "prox_x", "prox_h"
  Vec x;
  Vec y;
};
using EvalLog = std::vector<EvalRecord>;

/// x_{k+1} = x_k - eta_x grad_x(x_k, y_k), then the shared ascent step at x_{k+1}.
SolverState gd_rga_step(const MinMaxProblem& p, const SolverState& s, const StepSizeConfig& cfg,
                        EvalLog* log = nullptr);

/// x_{k+1} = prox_{eta_x coupling(., y_k)}(x_k), then the shared ascent step at x_{k+1}.
SolverState pd_rga_step(const MinMaxProblem& p, const SolverState& s, const StepSizeConfig& cfg,
                        EvalLog* log = nullptr);

/// Simultaneous variant: the ascent step reads grad_y at (x_k, y_k).
SolverState ppga_step(const MinMaxProblem& p, const SolverState& s, const StepSizeConfig& cfg,
                      EvalLog* log = nullptr);

SolverState step(Scheme scheme, const MinMaxProblem& p, const SolverState& s,
                 const StepSizeConfig& cfg, EvalLog* log = nullptr);

/// y_{k+1} = prox_{eta_y h}(y_k + eta_y grad_y(x_arg, y_k)); shared by all schemes.
Vec regularized_ascent(const MinMaxProblem& p, VecView x_arg, VecView y, double eta_y,
                       EvalLog* log = nullptr);

/// |x_{k+1} - x_k + eta_x grad_x(x_{k+1}, y_k)|: first-order optimality of
/// the implicit x-step. Zero up to rounding when the coupling is smooth in x.
double pd_rga_implicit_residual(const MinMaxProblem& p, const SolverState& before,
                                const SolverState& after, const StepSizeConfig& cfg);

struct StopRule {
  std::int64_t max_iter = 1000;
  /// Stop once |grad phi(x_k)| < grad_tol; needs trace recording.
  std::optional<double> grad_tol;
};

struct TraceOptions {
  /// Evaluate y*(x_k), phi, grad phi and delta at every iterate.
  bool record_oracle = true;
  double inner_tol = 1e-10;
  bool warm_start = true;
};

struct TraceRecord {
  std::int64_t k = 0;
  Vec x;
  Vec y;
  double phi = 0.0;
  double grad_norm = 0.0;
  double delta = 0.0;  // |y*(x_k) - y_k|^2
  Vec y_star;
};

struct EvaluationCounts {
  std::int64_t grad_x = 0;
  std::int64_t grad_y = 0;
  std::int64_t prox_x = 0;
  std::int64_t prox_h = 0;
};

struct IterateTrace {
  Scheme scheme = Scheme::kGdRga;
  StepSizeConfig cfg;
  std::string problem_id;
  double inner_tol = 0.0;
  bool has_oracle = false;
  /// Largest oracle error bound on y* over all records.
  double y_error_bound = 0.0;
  std::vector<TraceRecord> records;

  EvaluationCounts solver_evaluations;
  std::int64_t diagnostic_evaluations = 0;  // inner-oracle calls
  double wall_seconds = 0.0;                // excluded from emitted artifacts
  std::string stop_reason;
};

/// Fills y_star, phi, grad_norm and delta of every record from the inner
/// oracle. Used when a trace was loaded from disk.
void attach_oracle(IterateTrace& trace, const MinMaxProblem& p, double inner_tol);

IterateTrace run_solver(const MinMaxProblem& p, Scheme scheme, const StepSizeConfig& cfg,
                        const SolverState& init, const StopRule& stop,
                        const TraceOptions& options = {});

}  // namespace minmax

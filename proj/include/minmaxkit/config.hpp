#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "minmaxkit/linops.hpp"
#include "minmaxkit/problem.hpp"
#include "minmaxkit/problems.hpp"
#include "minmaxkit/prox.hpp"
#include "minmaxkit/solvers.hpp"

namespace minmax {

enum class ProblemKind { kToy, kQuadratic, kImagingDeblur, kImagingSuperRes, kCustom };

std::string_view problem_kind_name(ProblemKind k);
ProblemKind parse_problem_kind(std::string_view s);

/// Explicit value or "auto" (0.99 of the scheme's bound for eta_x, 1 / l_yy
/// for eta_y).
struct StepChoice {
  bool automatic = false;
  double value = 0.0;
  friend bool operator==(const StepChoice&, const StepChoice&) = default;
};

enum class InitMode { kDefault, kExplicit, kRandom };

/// Everything a run, restore, validate or certify command needs.
///
/// Text format: `[section]` headers, `key = value` lines, `#` starts a
/// comment. Keys are flat; a key `k` inside `[s]` is addressed as `s.k`.
/// Lists are comma-separated. Unknown keys are rejected.
struct RunConfig {
  ProblemKind problem = ProblemKind::kToy;
  std::vector<Scheme> schemes{Scheme::kGdRga, Scheme::kPdRga, Scheme::kPpga};
  std::vector<std::uint64_t> seeds{0};
  std::int64_t max_iter = 1000;
  std::optional<double> grad_tol;
  double inner_tol = 1e-10;
  std::string output_dir = "out";
  /// Any of "trace", "certificates", "stationarity", "margins".
  std::vector<std::string> diagnostics{"trace", "certificates", "stationarity"};
  std::vector<double> epsilons{1e-1, 1e-2};
  bool override_assumption4 = false;

  StepChoice eta_x{true, 0.0};
  StepChoice eta_x_gdrga;  // used when set (value > 0 or automatic)
  StepChoice eta_x_pdrga;
  StepChoice eta_x_ppga;
  StepChoice eta_y{true, 0.0};
  bool auto_steps = false;  // forces automatic eta_x for every scheme

  InitMode init = InitMode::kDefault;
  Vec init_x;
  Vec init_y;
  double init_scale = 5.0;

  double quad_a = -1.0;
  double quad_b = 1.0;
  double quad_c = 1.0;
  std::int64_t quad_dim = 1;

  std::int64_t image_size = 64;
  std::int64_t factor = 2;
  std::string kernel = "gaussian(7,1)";
  double sigma = 0.03;
  std::optional<double> noise_level;  // sigma when unset
  std::optional<double> lambda;  // cap when unset
  ProxSpec g = ProxSpec::soft_threshold(0.003);
  bool enforce_lambda_cap = true;

  std::string custom_path;

  std::int64_t validate_trials = 1000;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  bool wants(const std::string& diagnostic) const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Writes every key; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

/// Parses "gaussian(n,s)", "uniform(n)", "triangle4", "delta" or
/// "separable(t1,t2,...)".
Kernel2D parse_kernel(const std::string& spec);

/// Dense quadratic problem from JSON:
/// {"P": [[..]], "B": [[..]], "Q": [[..]], "h": "zero",
///  "constants": {"l_xx":..,"l_xy":..,"l_yx":..,"l_yy":..,"mu":..,"rho":..},
///  "concavity": "coupling" | "regularizer", "phi_lower_bound": optional}
MinMaxProblem load_custom_problem(const std::string& path);

}  // namespace minmax

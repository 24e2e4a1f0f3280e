#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "minmaxkit/problem.hpp"
#include "minmaxkit/solvers.hpp"

namespace minmax {

/// One inequality evaluated along a trace. A margin is rhs - lhs; the check
/// passes iff every margin is >= -slack.
struct CheckResult {
  std::string name;
  std::vector<double> margins;
  double slack = 0.0;
  bool skipped = false;
  std::string note;

  bool pass() const;
  double min_margin() const;
};

/// Result of one certificate: the inequality itself plus the trace-integrity
/// checks (step replay and oracle recomputation) it relies on.
struct CertificateReport {
  std::string name;
  std::vector<CheckResult> checks;
  std::optional<double> c1;
  std::optional<double> c2;
  std::optional<double> c3;
  std::optional<double> c;
  std::vector<std::string> notes;

  bool pass() const;
  const CheckResult* find(const std::string& check_name) const;
};

/// Replays every step of the scheme from the stored states.
CheckResult check_trajectory_replay(const IterateTrace& trace, const MinMaxProblem& p);

/// Recomputes y*, phi, |grad phi| and delta from the stored x_k.
CheckResult check_oracle_consistency(const IterateTrace& trace, const MinMaxProblem& p);

/// Cumulative descent bound for GD-RGA:
/// phi(x_N) <= phi(x_0) - (eta/2)(1 - 2 L_phi eta) sum |grad phi(x_k)|^2
///             + (eta/2)(1 + 2 L_phi eta) l_xy^2 sum delta_k.
CertificateReport check_descent_inequality_gdrga(const IterateTrace& trace, const MinMaxProblem& p);

/// Cumulative descent bound for PD-RGA with the shifted index:
/// phi(x_N) <= phi(x_0) - (eta/2)(1 - 2 rho eta) sum |grad phi(x_{k+1})|^2
///             + (eta/2)(1 + 2 rho eta) l_xy^2 sum |y*(x_{k+1}) - y_k|^2.
CertificateReport check_descent_inequality_pdrga(const IterateTrace& trace, const MinMaxProblem& p);

/// delta_{k+1} <= (1 - tau/(2 kappa)) delta_k + (kappa/tau) |y*_{k+1} - y*_k|^2 for
/// GD-RGA and PD-RGA, plus the scheme's geometric bound on delta_k and, for
/// PD-RGA, the bound on |y*_{k+1} - y_k|^2 at theta = tau / (sqrt2 kappa).
/// The geometric parts are skipped when eta_x is outside the admissible range.
CertificateReport check_delta_recursion(const IterateTrace& trace, const MinMaxProblem& p);

/// |y*_{k+1} - y_k|^2 <= (1+theta) beta^2 / D delta_k
///                      + 2 eta^2 (1 + 1/theta) / (l_xy^2 D) |grad phi(x_{k+1})|^2,
/// D = beta^2 - 2 eta^2 (1 + 1/theta). Throws OutOfRangeStepSize when D <= 0.
CertificateReport check_ystar_gap_pdrga(const IterateTrace& trace, const MinMaxProblem& p,
                                        double theta);

/// Constants C1, C2, C3 and C = (C3 + C2) / C1 of the min-gradient bound
/// min |grad phi|^2 <= C / N, assembled from the descent and delta bounds.
struct RateConstants {
  double c1 = 0.0;
  double c1_as_printed = 0.0;  // with the opposite sign inside the bracket
  double c2 = 0.0;
  double c3 = 0.0;
  double c = 0.0;
  /// GD-RGA bounds min over k < N; PD-RGA bounds min over 1 <= k <= N.
  bool shifted_index = false;
};

/// Returns nothing (with a reason) when eta_x is out of range, phi has no
/// known lower bound, or C1 <= 0.
struct RateConstantsResult {
  std::optional<RateConstants> constants;
  std::string reason;
};

RateConstantsResult rate_constants(const IterateTrace& trace, const MinMaxProblem& p);

struct StationarityReport {
  double epsilon = 0.0;
  std::optional<std::int64_t> first_hit;  // first k with |grad phi(x_k)| < epsilon
  std::vector<double> running_min;        // min_{j <= k} |grad phi(x_j)|
  std::optional<RateConstants> constants;
  std::optional<std::int64_t> predicted_n;  // ceil(C / epsilon^2)
  /// sqrt(C / N) - (min gradient up to N), N = 1..K; empty without constants.
  std::vector<double> rate_margins;
  bool rate_pass = true;
  bool first_hit_within_prediction = true;
};

StationarityReport stationarity_report(const IterateTrace& trace, double epsilon,
                                       const std::optional<RateConstants>& constants = std::nullopt);

/// Least-squares slope of log(running_min[N]) against log(N) over [from, to].
double rate_fit_slope(const std::vector<double>& running_min, std::int64_t from, std::int64_t to);

/// All certificates that apply to the trace's scheme.
std::vector<CertificateReport> certify_trace(const IterateTrace& trace, const MinMaxProblem& p);

}  // namespace minmax

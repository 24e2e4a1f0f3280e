#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minmaxkit/config.hpp"
#include "minmaxkit/diagnostics.hpp"
#include "minmaxkit/imaging.hpp"

namespace minmax {

struct ProblemInstance {
  MinMaxProblem problem;
  std::optional<RestoreSetup> setup;  // imaging only
};

ProblemInstance make_problem(const RunConfig& cfg, std::uint64_t seed);
SolverState initial_state(const RunConfig& cfg, const ProblemInstance& inst, std::uint64_t seed);

/// eta_y: explicit or 1 / l_yy. eta_x: explicit, or 0.99 of the GD-RGA /
/// PD-RGA bound, or of the prior blockwise bound for PPGA.
StepSizeConfig resolve_steps(const RunConfig& cfg, Scheme scheme, const MinMaxProblem& p);

struct RunResult {
  Scheme scheme = Scheme::kGdRga;
  std::uint64_t seed = 0;
  std::string problem_id;
  IterateTrace trace;
  std::vector<CertificateReport> certificates;
  RateConstantsResult rate;
  std::vector<StationarityReport> stationarity;
  std::vector<std::string> warnings;

  bool certificates_pass() const;
};

/// Builds the problem for `seed`, runs `scheme` and evaluates the requested
/// diagnostics. Throws on runtime errors.
RunResult execute_run(const RunConfig& cfg, Scheme scheme, std::uint64_t seed);
RunResult execute_run(const RunConfig& cfg, const ProblemInstance& inst, Scheme scheme,
                      std::uint64_t seed);

/// Columns k, x0.., y0.., phi, grad_norm, delta.
void write_trace_csv(const IterateTrace& trace, std::ostream& out);
/// Reads records back; y_star is left empty.
std::vector<TraceRecord> read_trace_csv(std::istream& in, std::size_t dim_x, std::size_t dim_y);

std::string report_json(const CertificateReport& rep);
std::string run_json(const RunResult& r);
/// Columns certificate, check, index, margin.
void write_margins_csv(const std::vector<CertificateReport>& reps, std::ostream& out);
std::string summary_line(const RunResult& r);

/// Pool size for `jobs` independent runs, capped by MINMAXKIT_THREADS.
std::size_t worker_count(std::size_t jobs);

/// Exit codes: 0 success, 1 runtime or usage error, 2 certificate failure.
int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_restore(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_certify(const RunConfig& cfg, const std::string& trace_path, Scheme scheme,
                std::uint64_t seed, std::ostream& out, std::ostream& err);

/// Writes table_jointly_lipschitz.csv and table_blockwise.csv into out_dir
/// (when non-empty) and echoes both to `out`.
int cmd_tables(const std::vector<double>& kappas,
               const std::vector<std::pair<std::string, SmoothnessConstants>>& constants,
               const std::string& out_dir, std::ostream& out, std::ostream& err);

}  // namespace minmax

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "minmaxkit/app.hpp"
#include "minmaxkit/problems.hpp"
#include "minmaxkit/text.hpp"

using namespace minmax;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool override4 = false;
  bool auto_steps = false;
};

void add_common(CLI::App* cmd, Common& c, bool config_required) {
  auto* opt = cmd->add_option("--config", c.config, "Config file");
  if (config_required) opt->required();
  cmd->add_option("--out", c.out, "Output directory (overrides run.output_dir)");
  cmd->add_option("--seed", c.seed, "Single seed (overrides run.seeds)");
  cmd->add_flag("--override-assumption4", c.override4,
                "Continue with a warning when eta_x * rho >= 1");
  cmd->add_flag("--auto-steps", c.auto_steps, "Use 0.99 of each scheme's eta_x bound");
}

RunConfig resolve(const Common& c) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.seed) cfg.seeds = {*c.seed};
  if (c.override4) cfg.override_assumption4 = true;
  if (c.auto_steps) cfg.auto_steps = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minmaxkit: alternating gradient solvers for min-max problems with certificates"};
  app.require_subcommand(1);

  Common run_opts, restore_opts, validate_opts, certify_opts, tables_opts;
  auto* run = app.add_subcommand("run", "Run solvers and emit traces and certificates");
  add_common(run, run_opts, true);
  auto* restore = app.add_subcommand("restore", "Imaging restoration with PSNR report");
  add_common(restore, restore_opts, true);
  auto* validate = app.add_subcommand("validate", "Check declared smoothness constants");
  add_common(validate, validate_opts, true);
  auto* certify = app.add_subcommand("certify", "Re-run the certificates on a stored trace");
  add_common(certify, certify_opts, true);
  std::string trace_path, scheme_text;
  certify->add_option("--trace", trace_path, "Trace CSV written by run")->required();
  certify->add_option("--scheme", scheme_text, "Scheme that produced the trace")->required();
  auto* tables = app.add_subcommand("tables", "Step-size comparison tables");
  add_common(tables, tables_opts, false);
  std::string kappa_text = "1,2,5,10,100";
  tables->add_option("--kappa", kappa_text, "Comma-separated kappa_y values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(resolve(run_opts), std::cout, std::cerr);
    if (*restore) return cmd_restore(resolve(restore_opts), std::cout, std::cerr);
    if (*validate) return cmd_validate(resolve(validate_opts), std::cout, std::cerr);
    if (*certify) {
      const RunConfig cfg = resolve(certify_opts);
      return cmd_certify(cfg, trace_path, parse_scheme(scheme_text),
                         cfg.seeds.empty() ? 0 : cfg.seeds.front(), std::cout, std::cerr);
    }
    if (*tables) {
      std::vector<double> kappas;
      for (const auto& k : split(kappa_text, ','))
        if (!trim(k).empty()) kappas.push_back(parse_double(trim(k)));
      std::vector<std::pair<std::string, SmoothnessConstants>> constants;
      if (tables_opts.config.empty()) {
        constants.emplace_back("toy", make_toy_problem().constants);
      } else {
        const RunConfig cfg = resolve(tables_opts);
        const auto inst = make_problem(cfg, cfg.seeds.empty() ? 0 : cfg.seeds.front());
        constants.emplace_back(inst.problem.id, inst.problem.constants);
      }
      return cmd_tables(kappas, constants, tables_opts.out, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

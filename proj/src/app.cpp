#include "minmaxkit/app.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <omp.h>

#include "json.hpp"
#include "minmaxkit/oracle.hpp"
#include "minmaxkit/problems.hpp"
#include "minmaxkit/stepsize.hpp"
#include "minmaxkit/text.hpp"

namespace minmax {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

ojson num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

ojson opt_num(const std::optional<double>& v) { return v ? num(*v) : ojson(nullptr); }

bool is_imaging(ProblemKind k) {
  return k == ProblemKind::kImagingDeblur || k == ProblemKind::kImagingSuperRes;
}

Vec random_vec(std::size_t n, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, scale);
  Vec v(n);
  for (auto& e : v) e = d(rng);
  return v;
}

std::string run_tag(const RunResult& r) {
  std::string id = r.problem_id;
  for (char& ch : id)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '.' && ch != '-') ch = '_';
  while (!id.empty() && id.back() == '_') id.pop_back();
  return id + "_" + std::string(scheme_name(r.scheme)) + "_s" + std::to_string(r.seed);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), ErrorCode::kIo, "cannot write " + path.string());
  f << content;
  require(f.good(), ErrorCode::kIo, "write failed: " + path.string());
}

// Applies MINMAXKIT_THREADS to the OpenMP kernels as well as the run pool.
void apply_thread_cap() {
  if (const char* env = std::getenv("MINMAXKIT_THREADS")) {
    try {
      const long long n = parse_int(env);
      if (n > 0) omp_set_num_threads(static_cast<int>(n));
    } catch (const Error&) {
    }
  }
}

ojson report_object(const CertificateReport& rep, bool with_margins) {
  ojson j;
  j["name"] = rep.name;
  j["pass"] = rep.pass();
  j["c1"] = opt_num(rep.c1);
  j["c2"] = opt_num(rep.c2);
  j["c3"] = opt_num(rep.c3);
  j["c"] = opt_num(rep.c);
  j["notes"] = rep.notes;
  ojson checks = ojson::array();
  for (const auto& c : rep.checks) {
    ojson cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass();
    cj["skipped"] = c.skipped;
    cj["slack"] = num(c.slack);
    cj["min_margin"] = c.margins.empty() ? ojson(nullptr) : num(c.min_margin());
    cj["count"] = c.margins.size();
    cj["note"] = c.note;
    if (with_margins) {
      ojson m = ojson::array();
      for (double v : c.margins) m.push_back(num(v));
      cj["margins"] = std::move(m);
    }
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  return j;
}

}  // namespace

bool RunResult::certificates_pass() const {
  for (const auto& c : certificates)
    if (!c.pass()) return false;
  return true;
}

ProblemInstance make_problem(const RunConfig& cfg, std::uint64_t seed) {
  ProblemInstance inst;
  switch (cfg.problem) {
    case ProblemKind::kToy:
      inst.problem = make_toy_problem();
      break;
    case ProblemKind::kQuadratic:
      inst.problem = make_quadratic_problem(cfg.quad_a, cfg.quad_b, cfg.quad_c,
                                            static_cast<std::size_t>(cfg.quad_dim));
      break;
    case ProblemKind::kImagingDeblur: {
      DeblurOptions o;
      o.n = static_cast<std::size_t>(cfg.image_size);
      o.kernel = parse_kernel(cfg.kernel);
      o.sigma = cfg.sigma;
      o.noise_level = cfg.noise_level;
      o.lambda = cfg.lambda.value_or(0.0);
      o.g = cfg.g;
      o.seed = seed;
      o.enforce_lambda_cap = cfg.enforce_lambda_cap;
      inst.setup = make_deblur_setup(o);
      inst.problem = build_imaging_minmax(inst.setup->problem);
      break;
    }
    case ProblemKind::kImagingSuperRes: {
      SuperResOptions o;
      o.n = static_cast<std::size_t>(cfg.image_size);
      o.factor = static_cast<std::size_t>(cfg.factor);
      o.kernel = parse_kernel(cfg.kernel);
      o.sigma = cfg.sigma;
      o.noise_level = cfg.noise_level;
      o.lambda = cfg.lambda.value_or(0.0);
      o.g = cfg.g;
      o.seed = seed;
      o.enforce_lambda_cap = cfg.enforce_lambda_cap;
      inst.setup = make_superres_setup(o);
      inst.problem = build_imaging_minmax(inst.setup->problem);
      break;
    }
    case ProblemKind::kCustom:
      require(!cfg.custom_path.empty(), ErrorCode::kConfigParse, "custom.path is empty");
      inst.problem = load_custom_problem(cfg.custom_path);
      break;
  }
  return inst;
}

SolverState initial_state(const RunConfig& cfg, const ProblemInstance& inst, std::uint64_t seed) {
  const auto& p = inst.problem;
  SolverState s;
  switch (cfg.init) {
    case InitMode::kExplicit:
      s.x = cfg.init_x;
      s.y = cfg.init_y;
      break;
    case InitMode::kRandom: {
      std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
      s.x = random_vec(p.dim_x, cfg.init_scale, rng);
      s.y = random_vec(p.dim_y, cfg.init_scale, rng);
      break;
    }
    case InitMode::kDefault:
      if (inst.setup) {
        s.x = inst.setup->observation.pixels;
        s.y.assign(p.dim_y, 0.0);
      } else if (cfg.problem == ProblemKind::kCustom) {
        s.x.assign(p.dim_x, 1.0);
        s.y.assign(p.dim_y, 0.0);
      } else {
        s.x.assign(p.dim_x, -5.0);
        s.y.assign(p.dim_y, 5.0);
      }
      break;
  }
  p.check_x(s.x);
  p.check_y(s.y);
  return s;
}

StepSizeConfig resolve_steps(const RunConfig& cfg, Scheme scheme, const MinMaxProblem& p) {
  const auto& c = p.constants;
  StepSizeConfig base = cfg.eta_y.automatic || cfg.eta_y.value == 0.0
                            ? StepSizeConfig::from_tau(0.0, 1.0, c)
                            : StepSizeConfig::make(0.0, cfg.eta_y.value, c);
  const StepChoice& specific = scheme == Scheme::kGdRga   ? cfg.eta_x_gdrga
                               : scheme == Scheme::kPdRga ? cfg.eta_x_pdrga
                                                          : cfg.eta_x_ppga;
  StepChoice choice = (specific.automatic || specific.value > 0.0) ? specific : cfg.eta_x;
  if (cfg.auto_steps) choice = {true, 0.0};
  if (choice.automatic || choice.value == 0.0) {
    double bound = 0.0;
    switch (scheme) {
      case Scheme::kGdRga: bound = bounds_gdrga(c, base.tau); break;
      case Scheme::kPdRga: bound = bounds_pdrga(c, base.tau); break;
      case Scheme::kPpga: bound = table_blockwise(c, base.tau).bound_cohen; break;
    }
    base.eta_x = kAutoStepFraction * bound;
  } else {
    base.eta_x = choice.value;
  }
  return base;
}

RunResult execute_run(const RunConfig& cfg, Scheme scheme, std::uint64_t seed) {
  return execute_run(cfg, make_problem(cfg, seed), scheme, seed);
}

RunResult execute_run(const RunConfig& cfg, const ProblemInstance& inst, Scheme scheme,
                      std::uint64_t seed) {
  const auto& p = inst.problem;
  RunResult r;
  r.scheme = scheme;
  r.seed = seed;
  r.problem_id = p.id;
  const StepSizeConfig steps = resolve_steps(cfg, scheme, p);
  if (scheme == Scheme::kPdRga) {
    if (auto w = check_prox_step(p, steps, cfg.override_assumption4)) r.warnings.push_back(*w);
  }
  const double bound = scheme == Scheme::kGdRga   ? bounds_gdrga(p.constants, steps.tau)
                       : scheme == Scheme::kPdRga ? bounds_pdrga(p.constants, steps.tau)
                                                  : table_blockwise(p.constants, steps.tau).bound_cohen;
  if (!(steps.eta_x < bound))
    r.warnings.push_back("eta_x = " + format_double(steps.eta_x) +
                         " is out of range (bound " + format_double(bound) +
                         "); step-size-dependent checks are skipped");
  // explicit x-steps: the bound above does not involve L_phi
  if (scheme != Scheme::kPdRga && steps.eta_x * p.constants.l_phi() >= 2.0)
    r.warnings.push_back("eta_x * L_phi = " + format_double(steps.eta_x * p.constants.l_phi()) +
                         " >= 2; the explicit x-step can diverge");
  if (p.constants.l_yy_inflated)
    r.warnings.push_back("l_yy raised from " + format_double(p.constants.declared_l_yy) +
                         " to mu = " + format_double(p.constants.mu));

  StopRule stop{cfg.max_iter, cfg.grad_tol};
  TraceOptions opt;
  opt.inner_tol = cfg.inner_tol;
  r.trace = run_solver(p, scheme, steps, initial_state(cfg, inst, seed), stop, opt);

  if (cfg.wants("certificates")) r.certificates = certify_trace(r.trace, p);
  if (cfg.wants("stationarity")) {
    r.rate = rate_constants(r.trace, p);
    for (double eps : cfg.epsilons)
      r.stationarity.push_back(stationarity_report(r.trace, eps, r.rate.constants));
    if (r.rate.constants && !r.certificates.empty()) {
      auto& front = r.certificates.front();
      front.c1 = r.rate.constants->c1;
      front.c2 = r.rate.constants->c2;
      front.c3 = r.rate.constants->c3;
      front.c = r.rate.constants->c;
    } else if (!r.rate.constants && !r.certificates.empty()) {
      r.certificates.front().notes.push_back("rate prediction unavailable: " + r.rate.reason);
    }
  }
  return r;
}

void write_trace_csv(const IterateTrace& trace, std::ostream& out) {
  const std::size_t dx = trace.records.empty() ? 0 : trace.records[0].x.size();
  const std::size_t dy = trace.records.empty() ? 0 : trace.records[0].y.size();
  out << "k";
  for (std::size_t i = 0; i < dx; ++i) out << ",x" << i;
  for (std::size_t i = 0; i < dy; ++i) out << ",y" << i;
  out << ",phi,grad_norm,delta\n";
  for (const auto& r : trace.records) {
    out << r.k;
    for (double v : r.x) out << ',' << format_double(v);
    for (double v : r.y) out << ',' << format_double(v);
    out << ',' << format_double(r.phi) << ',' << format_double(r.grad_norm) << ','
        << format_double(r.delta) << '\n';
  }
}

std::vector<TraceRecord> read_trace_csv(std::istream& in, std::size_t dim_x, std::size_t dim_y) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::kTraceIncomplete, "empty trace file");
  require(split(line, ',').size() == 4 + dim_x + dim_y, ErrorCode::kDimensionMismatch,
          "trace header does not match the problem dimensions");
  std::vector<TraceRecord> out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    require(cells.size() == 4 + dim_x + dim_y, ErrorCode::kTraceIncomplete,
            "trace row " + std::to_string(out.size()) + " has " + std::to_string(cells.size()) +
                " fields");
    TraceRecord r;
    r.k = parse_int(trim(cells[0]));
    for (std::size_t i = 0; i < dim_x; ++i) r.x.push_back(parse_double(trim(cells[1 + i])));
    for (std::size_t i = 0; i < dim_y; ++i) r.y.push_back(parse_double(trim(cells[1 + dim_x + i])));
    r.phi = parse_double(trim(cells[1 + dim_x + dim_y]));
    r.grad_norm = parse_double(trim(cells[2 + dim_x + dim_y]));
    r.delta = parse_double(trim(cells[3 + dim_x + dim_y]));
    out.push_back(std::move(r));
  }
  return out;
}

std::string report_json(const CertificateReport& rep) { return report_object(rep, true).dump(2); }

std::string run_json(const RunResult& r) {
  ojson j;
  j["problem"] = r.problem_id;
  j["scheme"] = std::string(scheme_name(r.scheme));
  j["seed"] = r.seed;
  j["eta_x"] = num(r.trace.cfg.eta_x);
  j["eta_y"] = num(r.trace.cfg.eta_y);
  j["tau"] = num(r.trace.cfg.tau);
  j["iterations"] = r.trace.records.empty() ? 0 : r.trace.records.back().k;
  j["stop_reason"] = r.trace.stop_reason;
  if (!r.trace.records.empty()) {
    const auto& last = r.trace.records.back();
    ojson f;
    f["phi"] = num(last.phi);
    f["grad_norm"] = num(last.grad_norm);
    f["delta"] = num(last.delta);
    if (last.x.size() <= 16) {
      ojson x = ojson::array();
      for (double v : last.x) x.push_back(num(v));
      f["x"] = std::move(x);
    }
    j["final"] = std::move(f);
  }
  ojson ev;
  ev["grad_x"] = r.trace.solver_evaluations.grad_x;
  ev["grad_y"] = r.trace.solver_evaluations.grad_y;
  ev["prox_x"] = r.trace.solver_evaluations.prox_x;
  ev["prox_h"] = r.trace.solver_evaluations.prox_h;
  ev["inner_oracle"] = r.trace.diagnostic_evaluations;
  j["evaluations"] = std::move(ev);
  j["warnings"] = r.warnings;
  j["pass"] = r.certificates_pass();
  ojson certs = ojson::array();
  for (const auto& c : r.certificates) certs.push_back(report_object(c, false));
  j["certificates"] = std::move(certs);
  ojson rate;
  rate["available"] = r.rate.constants.has_value();
  rate["reason"] = r.rate.reason;
  if (r.rate.constants) {
    rate["c1"] = num(r.rate.constants->c1);
    rate["c1_as_printed"] = num(r.rate.constants->c1_as_printed);
    rate["c2"] = num(r.rate.constants->c2);
    rate["c3"] = num(r.rate.constants->c3);
    rate["c"] = num(r.rate.constants->c);
  }
  j["rate"] = std::move(rate);
  ojson st = ojson::array();
  for (const auto& s : r.stationarity) {
    ojson sj;
    sj["epsilon"] = num(s.epsilon);
    sj["first_hit"] = s.first_hit ? ojson(*s.first_hit) : ojson(nullptr);
    sj["predicted_n"] = s.predicted_n ? ojson(*s.predicted_n) : ojson(nullptr);
    sj["min_grad_norm"] = s.running_min.empty() ? ojson(nullptr) : num(s.running_min.back());
    sj["rate_pass"] = s.rate_pass;
    sj["first_hit_within_prediction"] = s.first_hit_within_prediction;
    st.push_back(std::move(sj));
  }
  j["stationarity"] = std::move(st);
  return j.dump(2) + "\n";
}

void write_margins_csv(const std::vector<CertificateReport>& reps, std::ostream& out) {
  out << "certificate,check,index,margin\n";
  for (const auto& rep : reps)
    for (const auto& c : rep.checks)
      for (std::size_t i = 0; i < c.margins.size(); ++i)
        out << rep.name << ',' << c.name << ',' << i << ',' << format_double(c.margins[i]) << '\n';
}

std::string summary_line(const RunResult& r) {
  std::ostringstream s;
  s << run_tag(r) << " iters=" << (r.trace.records.empty() ? 0 : r.trace.records.back().k);
  if (!r.trace.records.empty()) {
    const auto& last = r.trace.records.back();
    s << " phi=" << format_double(last.phi) << " grad_norm=" << format_double(last.grad_norm);
  }
  if (!r.certificates.empty()) s << " certificates=" << (r.certificates_pass() ? "pass" : "FAIL");
  if (!r.warnings.empty()) s << " warnings=" << r.warnings.size();
  return s.str();
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MINMAXKIT_THREADS")) {
    try {
      const long long cap = parse_int(env);
      if (cap > 0) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
    } catch (const Error&) {
    }
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.schemes.empty()) {
    err << "usage: run needs at least one scheme (run.schemes = gdrga,pdrga,ppga)\n";
    return 1;
  }
  if (cfg.seeds.empty()) {
    err << "usage: run needs at least one seed (run.seeds)\n";
    return 1;
  }
  apply_thread_cap();
  struct Job {
    Scheme scheme;
    std::uint64_t seed;
    std::optional<RunResult> result;
    std::string error;
  };
  std::vector<Job> jobs;
  for (auto seed : cfg.seeds)
    for (auto s : cfg.schemes) jobs.push_back({s, seed, std::nullopt, {}});

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        jobs[i].result = execute_run(cfg, jobs[i].scheme, jobs[i].seed);
      } catch (const std::exception& e) {
        jobs[i].error = e.what();
      }
    }
  };
  const std::size_t nw = worker_count(jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < nw; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = 0;
  try {
    fs::create_directories(cfg.output_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  for (const auto& j : jobs) {
    if (!j.result) {
      err << "error: " << scheme_name(j.scheme) << " seed " << j.seed << ": " << j.error << "\n";
      code = 1;
      continue;
    }
    const RunResult& r = *j.result;
    const fs::path base = fs::path(cfg.output_dir);
    try {
      if (cfg.wants("trace")) {
        std::ostringstream csv;
        write_trace_csv(r.trace, csv);
        write_file(base / ("trace_" + run_tag(r) + ".csv"), csv.str());
      }
      write_file(base / ("run_" + run_tag(r) + ".json"), run_json(r));
      if (cfg.wants("margins")) {
        std::ostringstream csv;
        write_margins_csv(r.certificates, csv);
        write_file(base / ("margins_" + run_tag(r) + ".csv"), csv.str());
      }
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      code = 1;
      continue;
    }
    for (const auto& w : r.warnings) err << run_tag(r) << ": " << w << "\n";
    out << summary_line(r) << "\n";
    if (!r.certificates_pass() && code == 0) code = 2;
  }
  return code;
}

int cmd_restore(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!is_imaging(cfg.problem)) {
    err << "usage: restore needs problem = imaging_deblur or imaging_superres\n";
    return 1;
  }
  if (cfg.schemes.empty() || cfg.seeds.empty()) {
    err << "usage: restore needs a scheme and a seed\n";
    return 1;
  }
  apply_thread_cap();
  int code = 0;
  try {
    fs::create_directories(cfg.output_dir);
    for (auto seed : cfg.seeds) {
      const ProblemInstance inst = make_problem(cfg, seed);
      const RunResult r = execute_run(cfg, inst, cfg.schemes.front(), seed);
      const RestoreSetup& st = *inst.setup;
      Image recon{st.truth.shape, r.trace.records.back().x};
      const std::string tag = run_tag(r);
      const fs::path base(cfg.output_dir);
      write_pgm(st.truth, (base / ("truth_" + tag + ".pgm")).string());
      write_pgm(Image{st.observation_shape, st.problem.b},
                (base / ("observation_" + tag + ".pgm")).string());
      write_pgm(recon, (base / ("reconstruction_" + tag + ".pgm")).string());

      const double p_obs = psnr(st.truth, st.observation);
      const double p_rec = psnr(st.truth, recon);
      ojson j;
      j["psnr_observation"] = num(p_obs);
      j["psnr_reconstruction"] = num(p_rec);
      const bool identical = std::isinf(p_obs) && std::isinf(p_rec);
      j["psnr_gain"] = identical ? ojson(0.0) : num(p_rec - p_obs);
      j["identical_images"] = identical;
      j["grad_norm_initial"] = num(r.trace.records.front().grad_norm);
      j["grad_norm_final"] = num(r.trace.records.back().grad_norm);
      j["lambda"] = num(st.problem.lambda);
      j["lambda_cap"] = num(lambda_cap(st.problem.sigma, st.problem.a_norm));
      j["operator_norm"] = num(st.problem.a_norm);
      write_file(base / ("psnr_" + tag + ".json"), j.dump(2) + "\n");

      std::ostringstream csv;
      csv << "k,grad_norm\n";
      for (const auto& rec : r.trace.records) csv << rec.k << ',' << format_double(rec.grad_norm) << '\n';
      write_file(base / ("grad_norm_" + tag + ".csv"), csv.str());
      write_file(base / ("run_" + tag + ".json"), run_json(r));

      out << tag << " psnr_observation=" << format_double(p_obs)
          << " psnr_reconstruction=" << format_double(p_rec)
          << " gain=" << format_double(identical ? 0.0 : p_rec - p_obs) << "\n";
      if (!r.certificates_pass() && code == 0) code = 2;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return code;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const std::uint64_t seed = cfg.seeds.empty() ? 0 : cfg.seeds.front();
    const ProblemInstance inst = make_problem(cfg, seed);
    const auto& p = inst.problem;
    std::mt19937_64 rng(seed);
    std::vector<std::pair<Vec, Vec>> samples;
    for (int i = 0; i < 64; ++i)
      samples.emplace_back(random_vec(p.dim_x, cfg.init_scale, rng),
                           random_vec(p.dim_y, cfg.init_scale, rng));
    const ValidationReport rep = validate_problem(p, samples, cfg.validate_trials, seed);
    const auto& c = p.constants;
    ojson j;
    j["problem"] = p.id;
    j["ok"] = rep.ok();
    j["pairs_evaluated"] = rep.pairs_evaluated;
    ojson checks = ojson::array();
    for (const auto& ch : rep.checks) {
      ojson cj;
      cj["name"] = ch.name;
      cj["declared"] = num(ch.declared);
      cj["max_observed"] = num(ch.max_observed);
      cj["max_ratio"] = num(ch.max_ratio);
      cj["violated"] = ch.violated;
      checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    j["l_yy_inflated"] = c.l_yy_inflated;
    j["kappa_y"] = num(c.kappa_y());
    j["beta"] = num(c.beta());
    j["l_phi"] = num(c.l_phi());
    const StepSizeBounds b = compute_bounds(c, 1.0);
    j["eta_x_max_gdrga"] = num(b.eta_x_max_gdrga);
    j["eta_x_max_pdrga"] = num(b.eta_x_max_pdrga);
    j["eta_y_max"] = num(b.eta_y_max);
    fs::create_directories(cfg.output_dir);
    write_file(fs::path(cfg.output_dir) / ("validate_" + p.id + ".json"), j.dump(2) + "\n");
    for (const auto& ch : rep.checks)
      out << p.id << " " << ch.name << " declared=" << format_double(ch.declared)
          << " max_ratio=" << format_double(ch.max_ratio) << (ch.violated ? " VIOLATED" : "")
          << "\n";
    return rep.ok() ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_certify(const RunConfig& cfg, const std::string& trace_path, Scheme scheme,
                std::uint64_t seed, std::ostream& out, std::ostream& err) {
  try {
    apply_thread_cap();
    const ProblemInstance inst = make_problem(cfg, seed);
    const auto& p = inst.problem;
    std::ifstream in(trace_path);
    require(in.good(), ErrorCode::kIo, "cannot read " + trace_path);
    IterateTrace t;
    t.scheme = scheme;
    t.cfg = resolve_steps(cfg, scheme, p);
    t.problem_id = p.id;
    t.inner_tol = cfg.inner_tol;
    t.has_oracle = true;
    t.records = read_trace_csv(in, p.dim_x, p.dim_y);
    require(!t.records.empty(), ErrorCode::kTraceIncomplete, trace_path + " has no records");
    // y* only; the stored phi, grad_norm and delta stay under test
    InnerOracle oracle(p, cfg.inner_tol);
    for (auto& r : t.records) {
      OracleResult o = oracle(r.x);
      t.y_error_bound = std::max(t.y_error_bound, o.y_error_bound);
      r.y_star = std::move(o.y_star);
    }
    RunResult r;
    r.scheme = scheme;
    r.seed = seed;
    r.problem_id = p.id;
    r.trace = std::move(t);
    r.certificates = certify_trace(r.trace, p);
    fs::create_directories(cfg.output_dir);
    write_file(fs::path(cfg.output_dir) / ("certify_" + run_tag(r) + ".json"), run_json(r));
    for (const auto& c : r.certificates)
      for (const auto& ch : c.checks)
        out << c.name << "/" << ch.name << " "
            << (ch.skipped ? "SKIPPED" : ch.pass() ? "pass" : "FAIL") << "\n";
    return r.certificates_pass() ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_tables(const std::vector<double>& kappas,
               const std::vector<std::pair<std::string, SmoothnessConstants>>& constants,
               const std::string& out_dir, std::ostream& out, std::ostream& err) {
  try {
    std::ostringstream t1;
    t1 << "kappa_y,bound_lin,bound_bot,bound_ours\n";
    for (double k : kappas) {
      const auto row = table_jointly_lipschitz(k);
      t1 << format_double(row.kappa_y) << ',' << format_double(row.bound_lin) << ','
         << format_double(row.bound_bot) << ',' << format_double(row.bound_ours) << '\n';
    }
    std::ostringstream t2;
    t2 << "constants,bound_cohen,bound_ours,dominance\n";
    for (const auto& [name, c] : constants) {
      const auto row = table_blockwise(c);
      const char* dom = !row.dominance_decidable ? "undecidable" : row.ours_dominates ? "ours" : "prior";
      t2 << name << ',' << format_double(row.bound_cohen) << ',' << format_double(row.bound_ours)
         << ',' << dom << '\n';
    }
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      write_file(fs::path(out_dir) / "table_jointly_lipschitz.csv", t1.str());
      write_file(fs::path(out_dir) / "table_blockwise.csv", t2.str());
    }
    out << t1.str() << "\n" << t2.str();
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace minmax

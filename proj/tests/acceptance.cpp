// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "grid_oracle.hpp"
#include "minmaxkit/app.hpp"
#include "minmaxkit/diagnostics.hpp"
#include "minmaxkit/oracle.hpp"
#include "minmaxkit/problems.hpp"
#include "minmaxkit/stepsize.hpp"

using namespace minmax;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects failure reasons for one criterion.
struct Verdict {
  std::vector<std::string> failures;
  std::vector<std::string> info;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& s) { info.push_back(s); }
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

RunConfig toy_figure_config() {
  RunConfig c;
  c.max_iter = 10000;
  c.eta_x_gdrga = {false, 0.29};
  c.eta_x_pdrga = {false, 0.29};
  c.eta_x_ppga = {false, 0.06};
  c.eta_y = {false, 1.0};
  c.diagnostics = {"trace"};
  return c;
}

struct ToyRuns {
  IterateTrace gd, pd, pp;
  double seconds = 0.0;
};

const ToyRuns& toy_runs() {
  static const ToyRuns runs = [] {
    ToyRuns r;
    const auto p = make_toy_problem();
    const auto t0 = Clock::now();
    const SolverState init{{-5.0}, {5.0}, 0};
    const StopRule stop{10000, {}};
    r.gd = run_solver(p, Scheme::kGdRga, StepSizeConfig::make(0.29, 1.0, p.constants), init, stop);
    r.pd = run_solver(p, Scheme::kPdRga, StepSizeConfig::make(0.29, 1.0, p.constants), init, stop);
    r.pp = run_solver(p, Scheme::kPpga, StepSizeConfig::make(0.06, 1.0, p.constants), init, stop);
    r.seconds = seconds_since(t0);
    return r;
  }();
  return runs;
}

void criterion1(Verdict& v) {
  const auto& r = toy_runs();
  for (const auto* t : {&r.gd, &r.pd, &r.pp}) {
    const double x = t->records.back().x[0];
    v.note(std::string(scheme_name(t->scheme)) + " x_N = " + fmt(x));
    v.expect(std::abs(x + 2.0 / 3.0) < 1e-6,
             std::string(scheme_name(t->scheme)) + " ends at " + fmt(x));
  }
  v.note("runtime " + fmt(r.seconds) + " s");
  v.expect(r.seconds < 1.0, "runtime " + fmt(r.seconds) + " s");
}

void criterion2(Verdict& v) {
  const auto& r = toy_runs();
  const auto gd = stationarity_report(r.gd, 1.0).running_min;
  const auto pd = stationarity_report(r.pd, 1.0).running_min;
  const auto pp = stationarity_report(r.pp, 1.0).running_min;
  std::int64_t bad_pd = 0, bad_pp = 0;
  for (std::size_t k = 50; k < gd.size(); ++k) {
    if (gd[k] > pd[k]) ++bad_pd;
    if (gd[k] > pp[k]) ++bad_pp;
  }
  v.note("running min at k = 50: gdrga " + fmt(gd[50]) + ", pdrga " + fmt(pd[50]) + ", ppga " +
         fmt(pp[50]));
  v.expect(bad_pd == 0, std::to_string(bad_pd) + " iterations with gdrga > pdrga");
  v.expect(bad_pp == 0, std::to_string(bad_pp) + " iterations with gdrga > ppga");
}

void criterion3(Verdict& v) {
  const auto c = make_toy_problem().constants;
  v.expect(bounds_gdrga(c, 1.0) == 0.5, "bounds_gdrga = " + fmt(bounds_gdrga(c, 1.0)));
  const double pd_ref = 1.0 / (std::sqrt(2.0) * (std::sqrt(2.0) + 1.0));
  v.expect(std::abs(bounds_pdrga(c, 1.0) - pd_ref) < 1e-12, "bounds_pdrga = " + fmt(bounds_pdrga(c, 1.0)));
  const auto row = table_jointly_lipschitz(1.0);
  v.expect(row.bound_lin == 1.0 / 64.0 && row.bound_bot == 1.0 / 12.0 && row.bound_ours == 0.5,
           "jointly Lipschitz row at kappa 1");
  v.expect(table_blockwise(c).bound_cohen == 0.1, "blockwise prior bound = " +
                                                      fmt(table_blockwise(c).bound_cohen));
}

// Corrupts one stored entry; the field rotates with `which`.
void corrupt(IterateTrace& t, int which) {
  auto& r = t.records[t.records.size() / 2];
  switch (which % 5) {
    case 0: r.x[0] += 1e-3; break;
    case 1: r.y[0] -= 1e-3; break;
    case 2: r.phi += 1e-3; break;
    case 3: r.grad_norm += 1e-3; break;
    default: r.delta += 1e-3; break;
  }
}

bool all_pass(const std::vector<CertificateReport>& reps) {
  for (const auto& r : reps)
    if (!r.pass()) return false;
  return true;
}

void criterion4(Verdict& v) {
  const auto t0 = Clock::now();
  struct Case {
    RunConfig cfg;
    Scheme scheme;
    std::uint64_t seed;
  };
  std::vector<Case> cases;
  RunConfig toy;
  toy.max_iter = 400;
  toy.init = InitMode::kRandom;
  toy.eta_x_gdrga = {false, 0.29};
  toy.eta_x_pdrga = {false, 0.29};
  RunConfig quad;
  quad.problem = ProblemKind::kQuadratic;
  quad.quad_dim = 3;
  quad.max_iter = 400;
  quad.init = InitMode::kRandom;
  // in range for the delta recursion, and small enough that 1 - 2 L_phi eta > 0;
  // the auto step (0.99 of the bound) diverges here because eta L_phi > 2
  quad.eta_x = {false, 0.19};
  RunConfig img;
  img.problem = ProblemKind::kImagingDeblur;
  img.max_iter = 120;
  for (auto* c : {&toy, &quad, &img}) c->diagnostics = {"certificates"};
  for (std::uint64_t s = 0; s < 4; ++s)
    for (Scheme sc : {Scheme::kGdRga, Scheme::kPdRga}) {
      cases.push_back({toy, sc, s});
      cases.push_back({quad, sc, s});
    }
  for (std::uint64_t s = 0; s < 2; ++s)
    for (Scheme sc : {Scheme::kGdRga, Scheme::kPdRga}) cases.push_back({img, sc, s});

  int idx = 0, detected = 0;
  for (const auto& c : cases) {
    const ProblemInstance inst = make_problem(c.cfg, c.seed);
    const RunResult r = execute_run(c.cfg, inst, c.scheme, c.seed);
    const std::string tag = r.problem_id + "/" + std::string(scheme_name(c.scheme)) + "/s" +
                            std::to_string(c.seed);
    for (const auto& w : r.warnings) v.note(tag + ": " + w);
    for (const auto& rep : r.certificates)
      for (const auto& ch : rep.checks)
        v.expect(ch.pass(), tag + " " + rep.name + "/" + ch.name + " min margin " +
                                fmt(ch.min_margin()) + " slack " + fmt(ch.slack));
    if (c.scheme == Scheme::kPdRga) {
      const auto* gap = r.certificates.back().find("ystar_gap_pdrga");
      v.expect(gap && !gap->skipped, tag + " ystar gap check did not run");
    }
    IterateTrace bad = r.trace;
    corrupt(bad, idx++);
    const bool caught = !all_pass(certify_trace(bad, inst.problem));
    detected += caught;
    v.expect(caught, tag + " corruption " + std::to_string((idx - 1) % 5) + " went undetected");
  }
  const double secs = seconds_since(t0);
  v.note(std::to_string(cases.size()) + " runs, " + std::to_string(detected) +
         " corruptions detected, " + fmt(secs) + " s");
  v.expect(cases.size() == 20, "expected 20 runs");
  v.expect(secs < 30.0, "runtime " + fmt(secs) + " s");
}

void criterion5(Verdict& v) {
  const auto p = make_toy_problem();
  const auto t = run_solver(p, Scheme::kGdRga, StepSizeConfig::make(0.1, 1.0, p.constants),
                            {{-5.0}, {5.0}, 0}, StopRule{1000, {}});
  const auto rc = rate_constants(t, p);
  if (!rc.constants) {
    v.expect(false, "rate constants unavailable: " + rc.reason);
    return;
  }
  v.note("eta_x = 0.1: C1 = " + fmt(rc.constants->c1) + ", C = " + fmt(rc.constants->c));
  for (double eps : {1e-1, 1e-2}) {
    const auto rep = stationarity_report(t, eps, rc.constants);
    v.expect(rep.rate_pass, "running min exceeds sqrt(C/N) at eps " + fmt(eps));
    v.expect(rep.first_hit.has_value(), "no eps-stationary iterate for eps " + fmt(eps));
    if (rep.first_hit)
      v.note("eps " + fmt(eps) + ": first hit " + std::to_string(*rep.first_hit) + ", bound " +
             std::to_string(*rep.predicted_n));
    v.expect(rep.first_hit_within_prediction, "first hit beyond ceil(C/eps^2) at eps " + fmt(eps));
  }
  const auto figure = rate_constants(toy_runs().gd, p);
  if (!figure.constants) v.note("eta_x = 0.29: " + figure.reason);
}

void criterion6(Verdict& v) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const std::vector<MinMaxProblem> problems = {make_toy_problem(), make_quadratic_problem(-1, 1, 1, 3),
                                               make_quadratic_problem(0.5, 2, 1.5, 2)};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto& p = problems[i % problems.size()];
    Vec x(p.dim_x);
    for (auto& e : x) e = u(rng);
    const Vec g = solve_inner(p, x).grad_phi;
    const Vec fd = grad_phi_fd(p, x, 1e-5);
    const double rel = distance(g, fd) / std::max({norm(g), norm(fd), 1e-12});
    worst = std::max(worst, rel);
  }
  v.note("worst FD relative error " + fmt(worst));
  v.expect(worst <= 1e-5, "FD relative error " + fmt(worst));

  std::int64_t violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto& p = problems[i % problems.size()];
    Vec x1(p.dim_x), x2(p.dim_x);
    for (auto& e : x1) e = u(rng);
    for (auto& e : x2) e = u(rng);
    const auto a = solve_inner(p, x1), b = solve_inner(p, x2);
    const double lhs = distance(a.y_star, b.y_star);
    const double rhs = p.constants.l_yx / p.constants.mu * distance(x1, x2);
    if (lhs > rhs + 1e-11 * (1.0 + rhs) + a.y_error_bound + b.y_error_bound) ++violations;
  }
  v.expect(violations == 0, std::to_string(violations) + " Lipschitz violations");
}

void criterion7(Verdict& v) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    ProxSpec g = ProxSpec::zero();
    switch (i % 6) {
      case 0: g = ProxSpec::soft_threshold(0.05 + 2.0 * u(rng)); break;
      case 1: g = ProxSpec::firm_threshold_mcp(0.05 + u(rng), 1.1 + 3.0 * u(rng)); break;
      case 2: {
        const double lo = -2.0 * u(rng);
        g = ProxSpec::box(lo, lo + 0.1 + 2.0 * u(rng));
        break;
      }
      case 3: g = ProxSpec::quadratic(0.1 + 3.0 * u(rng)); break;
      case 4: g = ProxSpec::toy_piecewise(); break;
      default: break;
    }
    const double cap = g.weak_convexity() > 0.0 ? 0.9 / g.weak_convexity() : 2.0;
    const double tau = 0.01 + (cap - 0.01) * u(rng);
    const double anchor = -3.0 + 6.0 * u(rng);
    const double err = std::abs(g.scalar_prox(tau, anchor) - grid_prox(g, tau, anchor));
    worst = std::max(worst, err);
    if (err > 5e-4) v.expect(false, g.to_string() + " tau " + fmt(tau) + " anchor " + fmt(anchor));
  }
  v.note("worst grid deviation " + fmt(worst));
  double jump = 0.0;
  for (double tau : {0.01, 0.1, 0.2, 0.3, 0.4, 0.49}) {
    const double b = 0.5 - tau;
    for (double s : {-1.0, 1.0})
      jump = std::max(jump, std::abs(toy_prox_piecewise(tau, s * std::nextafter(b, 0.0)) -
                                     toy_prox_piecewise(tau, s * std::nextafter(b, 1.0))));
  }
  v.expect(jump <= 1e-9, "toy prox jump " + fmt(jump));
}

double svd_norm(const LinearOperator& a) {
  const auto m = materialize(a);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> map(
      m.data(), static_cast<Eigen::Index>(a.dim_out), static_cast<Eigen::Index>(a.dim_in));
  const Eigen::MatrixXd dense = map;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(dense).singularValues()(0);
}

void criterion8(Verdict& v) {
  const auto t0 = Clock::now();
  RunConfig cfg;
  cfg.problem = ProblemKind::kImagingDeblur;
  cfg.max_iter = 500;
  cfg.diagnostics = {"certificates"};
  const ProblemInstance inst = make_problem(cfg, 0);
  const RunResult r = execute_run(cfg, inst, Scheme::kPdRga, 0);
  const auto& st = *inst.setup;
  const double p_obs = psnr(st.truth, st.observation);
  const double p_rec = psnr(st.truth, Image{st.truth.shape, r.trace.records.back().x});
  const double g0 = r.trace.records.front().grad_norm, gn = r.trace.records.back().grad_norm;
  v.note("PSNR " + fmt(p_obs) + " -> " + fmt(p_rec) + " dB, gradient ratio " + fmt(gn / g0));
  v.expect(p_rec > p_obs, "PSNR did not improve");
  v.expect(gn <= 0.1 * g0, "gradient ratio " + fmt(gn / g0));
  v.expect(r.certificates_pass(), "certificates fail on the deblurring run");

  const Shape s{16, 16};
  const std::vector<LinearOperator> ops = {
      make_blur_operator(Kernel2D::gaussian(7, 1.0), s),
      make_blur_operator(Kernel2D::uniform(3), {8, 8}),
      make_downsampling_operator(2, s, Kernel2D::triangle4()),
      make_downsampling_operator(2, s, Kernel2D::gaussian(5, 1.0)),
      st.problem.a,
  };
  for (const auto& op : ops) {
    const double m = adjoint_mismatch(op, 3);
    v.expect(m <= 1e-10, op.name + " adjoint mismatch " + fmt(m));
  }
  for (std::size_t i = 0; i < 4; ++i) {
    LinearOperator op = ops[i];
    op.spectral_norm_hint.reset();
    const double pi = power_iteration_norm(op), ref = svd_norm(op);
    v.expect(std::abs(pi - ref) <= 1e-6, op.name + " power iteration " + fmt(pi) + " vs SVD " + fmt(ref));
  }
  const double secs = seconds_since(t0);
  v.note("runtime " + fmt(secs) + " s");
  v.expect(secs < 60.0, "runtime " + fmt(secs) + " s");
}

// Every regular file in a directory, keyed by name.
std::vector<std::pair<std::string, std::string>> snapshot(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream f(e.path(), std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    out.emplace_back(e.path().filename().string(), s.str());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void criterion9(Verdict& v) {
  const fs::path root = fs::temp_directory_path() / "minmaxkit_acceptance_det";
  std::vector<std::vector<std::pair<std::string, std::string>>> snaps;
  for (int pass = 0; pass < 2; ++pass) {
    const fs::path dir = root / std::to_string(pass);
    fs::remove_all(dir);
    std::ostringstream out, err;
    RunConfig toy = toy_figure_config();
    toy.max_iter = 300;
    toy.seeds = {0, 5};
    toy.init = InitMode::kRandom;
    toy.diagnostics = {"trace", "certificates", "stationarity", "margins"};
    toy.output_dir = dir.string();
    v.expect(cmd_run(toy, out, err) == 0, "toy run failed: " + err.str());
    RunConfig quad = toy;
    quad.problem = ProblemKind::kQuadratic;
    quad.quad_dim = 2;
    quad.eta_x_gdrga = quad.eta_x_pdrga = quad.eta_x_ppga = {};
    quad.eta_y = {true, 0.0};
    v.expect(cmd_run(quad, out, err) == 0, "quadratic run failed: " + err.str());
    RunConfig img;
    img.problem = ProblemKind::kImagingSuperRes;
    img.image_size = 32;
    img.kernel = "triangle4";
    img.max_iter = 40;
    img.schemes = {Scheme::kPdRga};
    img.output_dir = dir.string();
    v.expect(cmd_restore(img, out, err) == 0, "restore failed: " + err.str());
    v.expect(cmd_validate(quad, out, err) == 0, "validate failed: " + err.str());
    v.expect(cmd_tables({1, 2, 10}, {{"toy", make_toy_problem().constants}}, dir.string(), out, err) == 0,
             "tables failed");
    snaps.push_back(snapshot(dir));
  }
  std::size_t csv_json = 0;
  for (const auto& [name, _] : snaps[0])
    if (name.ends_with(".csv") || name.ends_with(".json")) ++csv_json;
  v.note(std::to_string(csv_json) + " CSV/JSON artifacts compared");
  v.expect(snaps[0].size() == snaps[1].size(), "different file sets");
  for (std::size_t i = 0; i < std::min(snaps[0].size(), snaps[1].size()); ++i)
    v.expect(snaps[0][i] == snaps[1][i], snaps[0][i].first + " differs");
  fs::remove_all(root);
}

}  // namespace

int main() {
  const std::vector<std::function<void(Verdict&)>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto t0 = Clock::now();
    try {
      criteria[i](v);
    } catch (const std::exception& e) {
      v.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = v.failures.empty();
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << fmt(seconds_since(t0))
              << " s)\n";
    for (const auto& s : v.info) std::cout << "    " << s << "\n";
    for (const auto& s : v.failures) std::cout << "    failure: " << s << "\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}

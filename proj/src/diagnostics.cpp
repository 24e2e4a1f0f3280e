#include "minmaxkit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minmaxkit/oracle.hpp"
#include "minmaxkit/stepsize.hpp"
#include "minmaxkit/text.hpp"

namespace minmax {

namespace {

constexpr double kRoundingRel = 1e-11;
// per accumulated term of a running sum
constexpr double kSumRounding = 1e-14;
constexpr double kReplayRel = 1e-10;
constexpr double kConsistencyRel = 1e-9;

void require_oracle(const IterateTrace& t) {
  require(t.has_oracle, ErrorCode::kTraceIncomplete, "trace has no oracle quantities");
  require(!t.records.empty(), ErrorCode::kTraceIncomplete, "trace is empty");
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    require(t.records[i].k == static_cast<std::int64_t>(i), ErrorCode::kTraceIncomplete,
            "trace records are not contiguous at position " + std::to_string(i));
    require(!t.records[i].y_star.empty(), ErrorCode::kTraceIncomplete,
            "record " + std::to_string(i) + " has no y*");
  }
}

void require_scheme(const IterateTrace& t, Scheme s) {
  require(t.scheme == s, ErrorCode::kInvalidArgument,
          "certificate expects a " + std::string(scheme_name(s)) + " trace, got " +
              std::string(scheme_name(t.scheme)));
}

// Bound on the change of |a|^2 when a moves by at most d.
double sq_err(double squared, double d) { return 2.0 * std::sqrt(std::max(squared, 0.0)) * d + d * d; }

// Perturbation bounds of the stored oracle quantities, from the inner
// solver's error bound e on y*.
struct OracleErr {
  double e = 0.0;
  double phi = 0.0;
  double l_xy = 0.0;

  double delta(double v) const { return sq_err(v, e); }
  double grad_sq(double grad_norm) const { return sq_err(grad_norm * grad_norm, l_xy * e); }
  // |y*_a - y*_b|^2 with both endpoints uncertain
  double pair(double v) const { return sq_err(v, 2.0 * e); }
};

OracleErr oracle_err(const IterateTrace& t, const MinMaxProblem& p) {
  OracleErr o;
  o.e = t.y_error_bound;
  // a supergradient of the inner objective at the returned point has norm at
  // most 2 * residual <= 2 * tol
  o.phi = o.e > 0.0 ? 2.0 * t.inner_tol * o.e : 0.0;
  o.l_xy = p.constants.l_xy;
  return o;
}

CheckResult skipped(std::string name, std::string note) {
  CheckResult r;
  r.name = std::move(name);
  r.skipped = true;
  r.note = std::move(note);
  return r;
}

double g2(const TraceRecord& r) { return r.grad_norm * r.grad_norm; }

// Replay and oracle recomputation, shared by every certificate of a trace.
using Integrity = std::vector<CheckResult>;

Integrity integrity(const IterateTrace& t, const MinMaxProblem& p) {
  return {check_trajectory_replay(t, p), check_oracle_consistency(t, p)};
}

CertificateReport with_integrity(std::string name, const Integrity& in) {
  CertificateReport rep;
  rep.name = std::move(name);
  rep.checks = in;
  return rep;
}

}  // namespace

bool CheckResult::pass() const {
  if (skipped) return true;
  return std::all_of(margins.begin(), margins.end(),
                     [&](double m) { return std::isfinite(m) && m >= -slack; });
}

double CheckResult::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : margins) m = std::isnan(v) ? -std::numeric_limits<double>::infinity() : std::min(m, v);
  return m;
}

bool CertificateReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass(); });
}

const CheckResult* CertificateReport::find(const std::string& check_name) const {
  for (const auto& c : checks)
    if (c.name == check_name) return &c;
  return nullptr;
}

CheckResult check_trajectory_replay(const IterateTrace& t, const MinMaxProblem& p) {
  CheckResult r;
  r.name = "trajectory_replay";
  for (std::size_t k = 0; k + 1 < t.records.size(); ++k) {
    const auto& cur = t.records[k];
    const auto& nxt = t.records[k + 1];
    double margin;
    try {
      const SolverState s = step(t.scheme, p, SolverState{cur.x, cur.y, cur.k}, t.cfg);
      const double tol = kReplayRel * (1.0 + norm(nxt.x) + norm(nxt.y));
      const double d = std::sqrt(squared_distance(s.x, nxt.x) + squared_distance(s.y, nxt.y));
      margin = (nxt.k == cur.k + 1) ? tol - d : -1.0;
    } catch (const Error&) {
      margin = -std::numeric_limits<double>::infinity();
    }
    r.margins.push_back(margin);
  }
  return r;
}

CheckResult check_oracle_consistency(const IterateTrace& t, const MinMaxProblem& p) {
  require_oracle(t);
  CheckResult r;
  r.name = "oracle_consistency";
  const OracleErr err = oracle_err(t, p);
  const double tol = t.inner_tol > 0.0 ? t.inner_tol : kDefaultInnerTolerance;
  for (const auto& rec : t.records) {
    const OracleResult o = solve_inner(p, rec.x, tol);
    const double e = std::max(err.e, o.y_error_bound);
    auto room = [](double allowed, double diff) { return std::isfinite(diff) ? allowed - diff : -INFINITY; };
    double m = room(kConsistencyRel * (1.0 + norm(o.y_star)) + 2.0 * e, distance(o.y_star, rec.y_star));
    m = std::min(m, room(kConsistencyRel * (1.0 + std::abs(o.phi)) + 2.0 * (err.phi + 2.0 * tol * e),
                         std::abs(o.phi - rec.phi)));
    const double gn = norm(o.grad_phi);
    m = std::min(m, room(kConsistencyRel * (1.0 + gn) + 2.0 * err.l_xy * e,
                         std::abs(gn - rec.grad_norm)));
    const double delta = squared_distance(o.y_star, rec.y);
    m = std::min(m, room(kConsistencyRel * (1.0 + delta) + sq_err(delta, 2.0 * e),
                         std::abs(delta - rec.delta)));
    r.margins.push_back(m);
  }
  return r;
}

namespace {

CertificateReport check_descent_inequality_gdrga_impl(const IterateTrace& t, const MinMaxProblem& p,
                                 const Integrity& in) {
  require_oracle(t);
  require_scheme(t, Scheme::kGdRga);
  auto rep = with_integrity("descent_gdrga", in);
  const auto& c = p.constants;
  const double eta = t.cfg.eta_x;
  const double a = 0.5 * eta * (1.0 - 2.0 * c.l_phi() * eta);
  const double b = 0.5 * eta * (1.0 + 2.0 * c.l_phi() * eta) * c.l_xy * c.l_xy;
  const OracleErr err = oracle_err(t, p);

  CheckResult r;
  r.name = "descent_gdrga";
  const double phi0 = t.records[0].phi;
  double sum_g = 0.0, sum_d = 0.0, sum_g_err = 0.0, sum_d_err = 0.0;
  for (std::size_t n = 0; n < t.records.size(); ++n) {
    const double phi_n = t.records[n].phi;
    r.margins.push_back(phi0 - a * sum_g + b * sum_d - phi_n);
    const double scale = std::abs(phi0) + std::abs(phi_n) + std::abs(a) * sum_g + b * sum_d + 1.0;
    r.slack = std::max(r.slack, kSumRounding * scale * (1.0 + n) + 2.0 * err.phi +
                                    std::abs(a) * sum_g_err + b * sum_d_err);
    sum_g += g2(t.records[n]);
    sum_d += t.records[n].delta;
    sum_g_err += err.grad_sq(t.records[n].grad_norm);
    sum_d_err += err.delta(t.records[n].delta);
  }
  rep.checks.push_back(std::move(r));
  return rep;
}

CertificateReport check_descent_inequality_pdrga_impl(const IterateTrace& t, const MinMaxProblem& p,
                                 const Integrity& in) {
  require_oracle(t);
  require_scheme(t, Scheme::kPdRga);
  auto rep = with_integrity("descent_pdrga", in);
  const auto& c = p.constants;
  const double eta = t.cfg.eta_x;
  const double a = 0.5 * eta * (1.0 - 2.0 * c.rho * eta);
  const double b = 0.5 * eta * (1.0 + 2.0 * c.rho * eta) * c.l_xy * c.l_xy;
  const OracleErr err = oracle_err(t, p);

  CheckResult r;
  r.name = "descent_pdrga";
  const double phi0 = t.records[0].phi;
  double sum_g = 0.0, sum_q = 0.0, sum_g_err = 0.0, sum_q_err = 0.0;
  for (std::size_t n = 0; n < t.records.size(); ++n) {
    const double phi_n = t.records[n].phi;
    r.margins.push_back(phi0 - a * sum_g + b * sum_q - phi_n);
    const double scale = std::abs(phi0) + std::abs(phi_n) + std::abs(a) * sum_g + b * sum_q + 1.0;
    r.slack = std::max(r.slack, kSumRounding * scale * (1.0 + n) + 2.0 * err.phi +
                                    std::abs(a) * sum_g_err + b * sum_q_err);
    if (n + 1 < t.records.size()) {
      const auto& next = t.records[n + 1];
      const double q = squared_distance(next.y_star, t.records[n].y);
      sum_g += g2(next);
      sum_q += q;
      sum_g_err += err.grad_sq(next.grad_norm);
      sum_q_err += err.delta(q);
    }
  }
  rep.checks.push_back(std::move(r));
  return rep;
}

CertificateReport check_delta_recursion_impl(const IterateTrace& t, const MinMaxProblem& p,
                                 const Integrity& in) {
  require_oracle(t);
  require(t.scheme != Scheme::kPpga, ErrorCode::kInvalidArgument,
          "delta recursion applies to GD-RGA and PD-RGA traces");
  auto rep = with_integrity("delta_recursion", in);
  const auto& c = p.constants;
  const double tau = t.cfg.tau;
  const double kappa = c.kappa_y();
  const double eta = t.cfg.eta_x;
  const double l2 = c.l_xy * c.l_xy;
  const OracleErr err = oracle_err(t, p);
  const auto& rec = t.records;
  const std::size_t n = rec.size();

  {
    CheckResult r;
    r.name = "delta_one_step";
    const double contraction = 1.0 - tau / (2.0 * kappa);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double drift = squared_distance(rec[k + 1].y_star, rec[k].y_star);
      const double rhs = contraction * rec[k].delta + (kappa / tau) * drift;
      r.margins.push_back(rhs - rec[k + 1].delta);
      r.slack = std::max(r.slack, kRoundingRel * (1.0 + rhs + rec[k + 1].delta) +
                                      contraction * err.delta(rec[k].delta) +
                                      (kappa / tau) * err.pair(drift) + err.delta(rec[k + 1].delta));
    }
    rep.checks.push_back(std::move(r));
  }

  // delta_k <= gamma^k delta_0 + coef * sum_j gamma^{k-1-j} G_j with G read at
  // j (GD-RGA) or j + 1 (PD-RGA)
  auto geometric = [&](const std::string& name, double gamma, double coef, bool shifted) {
    CheckResult r;
    r.name = name;
    double s = 0.0, s_err = 0.0, gk = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double rhs = gk * rec[0].delta + coef * s;
      r.margins.push_back(rhs - rec[k].delta);
      r.slack = std::max(r.slack, kSumRounding * (1.0 + rhs + rec[k].delta) * (1.0 + k) +
                                      gk * err.delta(rec[0].delta) + coef * s_err +
                                      err.delta(rec[k].delta));
      const std::size_t j = shifted ? k + 1 : k;
      if (j < n) {
        s = gamma * s + g2(rec[j]);
        s_err = gamma * s_err + err.grad_sq(rec[j].grad_norm);
      }
      gk *= gamma;
    }
    return r;
  };

  if (t.scheme == Scheme::kGdRga) {
    const double bound = bounds_gdrga(c, tau);
    if (eta < bound) {
      const double gamma = gamma_gdrga(c, tau, eta).value;
      rep.checks.push_back(geometric("delta_geometric_gdrga", gamma,
                                     (gamma - 1.0 + tau / (2.0 * kappa)) / l2, false));
    } else {
      rep.checks.push_back(skipped("delta_geometric_gdrga",
                                   "eta_x = " + format_double(eta) + " is not below " +
                                       format_double(bound)));
    }
    return rep;
  }

  const double bound = bounds_pdrga(c, tau);
  if (!(eta < bound)) {
    const std::string note = "eta_x = " + format_double(eta) + " is not below " + format_double(bound);
    rep.checks.push_back(skipped("delta_geometric_pdrga", note));
    rep.checks.push_back(skipped("ystar_gap_corollary_pdrga", note));
    return rep;
  }
  const double theta = theta_star(tau, kappa).pdrga_theta;
  const double gamma = gamma_pdrga(c, tau, eta).value;
  const double coef = (gamma - 1.0 + tau / (2.0 * kappa)) / ((1.0 + theta) * l2);
  rep.checks.push_back(geometric("delta_geometric_pdrga", gamma, coef, true));

  // |y*_{k+1} - y_k|^2 <= A gamma^k + B G_{k+1} + B' sum_{j<k} gamma^{k-1-j} G_{j+1}
  const double beta = c.beta();
  const double d_theta = beta * beta - 2.0 * eta * eta * (1.0 + 1.0 / theta);
  const double first = (1.0 + theta) * beta * beta / d_theta;
  const double second = 2.0 * eta * eta * (1.0 + 1.0 / theta) / (l2 * d_theta);
  CheckResult r;
  r.name = "ystar_gap_corollary_pdrga";
  double s = 0.0, s_err = 0.0, gk = 1.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double q = squared_distance(rec[k + 1].y_star, rec[k].y);
    const double rhs =
        first * (gk * rec[0].delta + coef * s) + second * g2(rec[k + 1]);
    r.margins.push_back(rhs - q);
    r.slack = std::max(r.slack, kSumRounding * (1.0 + rhs + q) * (1.0 + k) +
                                    first * (gk * err.delta(rec[0].delta) + coef * s_err) +
                                    second * err.grad_sq(rec[k + 1].grad_norm) + err.delta(q));
    s = gamma * s + g2(rec[k + 1]);
    s_err = gamma * s_err + err.grad_sq(rec[k + 1].grad_norm);
    gk *= gamma;
  }
  rep.checks.push_back(std::move(r));
  return rep;
}

CertificateReport check_ystar_gap_pdrga_impl(const IterateTrace& t, const MinMaxProblem& p,
                                             double theta, const Integrity* in) {
  require_oracle(t);
  require_scheme(t, Scheme::kPdRga);
  require(theta > 0.0, ErrorCode::kInvalidArgument, "theta must be positive");
  const auto& c = p.constants;
  const double eta = t.cfg.eta_x;
  const double beta = c.beta();
  const double d = beta * beta - 2.0 * eta * eta * (1.0 + 1.0 / theta);
  require(d > 0.0, ErrorCode::kOutOfRangeStepSize,
          "beta^2 - 2 eta_x^2 (1 + 1/theta) = " + format_double(d) + " <= 0");
  auto rep = with_integrity("ystar_gap_pdrga", in ? *in : integrity(t, p));
  const double l2 = c.l_xy * c.l_xy;
  const double a = (1.0 + theta) * beta * beta / d;
  const double b = 2.0 * eta * eta * (1.0 + 1.0 / theta) / (l2 * d);
  const OracleErr err = oracle_err(t, p);
  CheckResult r;
  r.name = "ystar_gap_pdrga";
  const auto& rec = t.records;
  for (std::size_t k = 0; k + 1 < rec.size(); ++k) {
    const double q = squared_distance(rec[k + 1].y_star, rec[k].y);
    const double rhs = a * rec[k].delta + b * g2(rec[k + 1]);
    r.margins.push_back(rhs - q);
    r.slack = std::max(r.slack, kRoundingRel * (1.0 + rhs + q) + a * err.delta(rec[k].delta) +
                                    b * err.grad_sq(rec[k + 1].grad_norm) + err.delta(q));
  }
  rep.checks.push_back(std::move(r));
  return rep;
}

}  // namespace

CertificateReport check_descent_inequality_gdrga(const IterateTrace& t, const MinMaxProblem& p) {
  require_oracle(t);
  require_scheme(t, Scheme::kGdRga);
  return check_descent_inequality_gdrga_impl(t, p, integrity(t, p));
}

CertificateReport check_descent_inequality_pdrga(const IterateTrace& t, const MinMaxProblem& p) {
  require_oracle(t);
  require_scheme(t, Scheme::kPdRga);
  return check_descent_inequality_pdrga_impl(t, p, integrity(t, p));
}

CertificateReport check_delta_recursion(const IterateTrace& t, const MinMaxProblem& p) {
  require_oracle(t);
  require(t.scheme != Scheme::kPpga, ErrorCode::kInvalidArgument,
          "delta recursion applies to GD-RGA and PD-RGA traces");
  return check_delta_recursion_impl(t, p, integrity(t, p));
}

CertificateReport check_ystar_gap_pdrga(const IterateTrace& t, const MinMaxProblem& p, double theta) {
  return check_ystar_gap_pdrga_impl(t, p, theta, nullptr);
}

RateConstantsResult rate_constants(const IterateTrace& t, const MinMaxProblem& p) {
  require_oracle(t);
  RateConstantsResult out;
  if (t.scheme == Scheme::kPpga) {
    out.reason = "no rate constants for the simultaneous scheme";
    return out;
  }
  if (!p.phi_lower_bound) {
    out.reason = "phi has no known lower bound";
    return out;
  }
  const auto& c = p.constants;
  const double tau = t.cfg.tau;
  const double kappa = c.kappa_y();
  const double eta = t.cfg.eta_x;
  const double beta = c.beta();
  const double l2 = c.l_xy * c.l_xy;
  const double delta0 = t.records[0].delta;

  RateConstants rc;
  rc.c3 = t.records[0].phi - *p.phi_lower_bound;
  if (t.scheme == Scheme::kGdRga) {
    if (!(eta < bounds_gdrga(c, tau))) {
      out.reason = "eta_x outside the GD-RGA range";
      return out;
    }
    const double gamma = gamma_gdrga(c, tau, eta).value;
    const double lp = c.l_phi();
    const double corr = (1.0 + 2.0 * lp * eta) * tau / (2.0 * kappa * (1.0 - gamma));
    rc.c1 = 0.5 * eta * (2.0 - corr);
    rc.c1_as_printed = 0.5 * eta * (2.0 + corr);
    rc.c2 = eta * (1.0 + 2.0 * lp * eta) * l2 * delta0 / (2.0 * (1.0 - gamma));
  } else {
    if (!(eta < bounds_pdrga(c, tau))) {
      out.reason = "eta_x outside the PD-RGA range";
      return out;
    }
    const double gamma = gamma_pdrga(c, tau, eta).value;
    const double r2 = std::sqrt(2.0);
    const double d = beta * beta * tau - 2.0 * (r2 * kappa + tau) * eta * eta;
    const double corr =
        (1.0 + 2.0 * c.rho * eta) * tau * tau * beta * beta / (2.0 * kappa * (1.0 - gamma) * d);
    rc.c1 = 0.5 * eta * (2.0 - corr);
    rc.c1_as_printed = 0.5 * eta * (2.0 + corr);
    rc.c2 = 0.5 * eta * (1.0 + 2.0 * c.rho * eta) * (r2 * kappa + tau) * tau * beta * beta * l2 *
            delta0 / (r2 * kappa * d * (1.0 - gamma));
    rc.shifted_index = true;
  }
  if (!(rc.c1 > 0.0)) {
    out.reason = "C1 = " + format_double(rc.c1) + " is not positive at eta_x = " + format_double(eta);
    return out;
  }
  rc.c = (rc.c3 + rc.c2) / rc.c1;
  out.constants = rc;
  return out;
}

StationarityReport stationarity_report(const IterateTrace& t, double epsilon,
                                       const std::optional<RateConstants>& constants) {
  require_oracle(t);
  require(epsilon > 0.0, ErrorCode::kInvalidArgument, "epsilon must be positive");
  StationarityReport rep;
  rep.epsilon = epsilon;
  rep.constants = constants;
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : t.records) {
    m = std::min(m, r.grad_norm);
    rep.running_min.push_back(m);
    if (!rep.first_hit && r.grad_norm < epsilon) rep.first_hit = r.k;
  }
  if (!constants) return rep;

  rep.predicted_n = static_cast<std::int64_t>(std::ceil(constants->c / (epsilon * epsilon)));
  const std::size_t n = t.records.size();
  // shifted: min over 1 <= k <= N; otherwise min over k <= N - 1
  double shifted_min = std::numeric_limits<double>::infinity();
  for (std::size_t big_n = 1; big_n < n; ++big_n) {
    double observed;
    if (constants->shifted_index) {
      shifted_min = std::min(shifted_min, t.records[big_n].grad_norm);
      observed = shifted_min;
    } else {
      observed = rep.running_min[big_n - 1];
    }
    const double bound = std::sqrt(constants->c / static_cast<double>(big_n));
    const double margin = bound - observed;
    rep.rate_margins.push_back(margin);
    if (margin < -kRoundingRel * (1.0 + bound)) rep.rate_pass = false;
  }
  if (rep.first_hit) rep.first_hit_within_prediction = *rep.first_hit <= *rep.predicted_n;
  return rep;
}

double rate_fit_slope(const std::vector<double>& running_min, std::int64_t from, std::int64_t to) {
  require(from >= 1 && to > from, ErrorCode::kInvalidArgument, "need 1 <= from < to");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::int64_t count = 0;
  for (std::int64_t i = from; i <= to && i < static_cast<std::int64_t>(running_min.size()); ++i) {
    if (!(running_min[i] > 0.0)) continue;
    const double lx = std::log(static_cast<double>(i));
    const double ly = std::log(running_min[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  require(count >= 2, ErrorCode::kInvalidArgument, "fewer than two positive points to fit");
  const double c = static_cast<double>(count);
  return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

std::vector<CertificateReport> certify_trace(const IterateTrace& t, const MinMaxProblem& p) {
  require_oracle(t);
  const Integrity in = integrity(t, p);
  std::vector<CertificateReport> out;
  switch (t.scheme) {
    case Scheme::kGdRga:
      out.push_back(check_descent_inequality_gdrga_impl(t, p, in));
      out.push_back(check_delta_recursion_impl(t, p, in));
      break;
    case Scheme::kPdRga: {
      out.push_back(check_descent_inequality_pdrga_impl(t, p, in));
      out.push_back(check_delta_recursion_impl(t, p, in));
      const double theta = theta_star(t.cfg.tau, p.constants.kappa_y()).pdrga_theta;
      try {
        out.push_back(check_ystar_gap_pdrga_impl(t, p, theta, &in));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kOutOfRangeStepSize) throw;
        CertificateReport rep;
        rep.name = "ystar_gap_pdrga";
        rep.checks.push_back(skipped("ystar_gap_pdrga", e.what()));
        out.push_back(std::move(rep));
      }
      break;
    }
    case Scheme::kPpga:
      out.push_back(with_integrity("trajectory", in));
      break;
  }
  return out;
}

}  // namespace minmax

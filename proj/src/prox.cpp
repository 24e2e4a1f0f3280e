#include "minmaxkit/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minmaxkit/error.hpp"
#include "minmaxkit/text.hpp"

namespace minmax {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double shrink(double v, double t) { return sign(v) * std::max(std::abs(v) - t, 0.0); }

}  // namespace

double toy_g(double z) {
  const double a = std::abs(z);
  if (a <= 0.5) return 0.5 - z * z;
  return (a - 1.0) * (a - 1.0);
}

double toy_g_prime(double z) {
  const double a = std::abs(z);
  if (a <= 0.5) return -2.0 * z;
  return 2.0 * (a - 1.0) * sign(z);
}

double toy_prox_piecewise(double tau, double anchor) {
  require(tau > 0.0 && tau < 0.5, ErrorCode::kIllPosedProx,
          "toy prox needs 0 < tau < 0.5, got " + format_double(tau));
  if (std::abs(anchor) <= 0.5 - tau) return anchor / (1.0 - 2.0 * tau);
  if (anchor >= 0.5 - tau) return (anchor + 2.0 * tau) / (1.0 + 2.0 * tau);
  return (anchor - 2.0 * tau) / (1.0 + 2.0 * tau);
}

ProxSpec ProxSpec::soft_threshold(double alpha) {
  require(alpha >= 0.0 && std::isfinite(alpha), ErrorCode::kInvalidArgument,
          "soft threshold needs alpha >= 0");
  return ProxSpec(Kind::kSoftThreshold, alpha, 0.0);
}

ProxSpec ProxSpec::firm_threshold_mcp(double alpha, double gamma) {
  require(alpha >= 0.0 && gamma > 0.0 && std::isfinite(alpha) && std::isfinite(gamma),
          ErrorCode::kInvalidArgument, "MCP needs alpha >= 0 and gamma > 0");
  return ProxSpec(Kind::kFirmThresholdMcp, alpha, gamma);
}

ProxSpec ProxSpec::box(double lo, double hi) {
  require(lo <= hi, ErrorCode::kInvalidArgument, "box needs lo <= hi");
  return ProxSpec(Kind::kBoxProjection, lo, hi);
}

ProxSpec ProxSpec::quadratic(double c) {
  require(c >= 0.0 && std::isfinite(c), ErrorCode::kInvalidArgument, "quadratic needs c >= 0");
  return ProxSpec(Kind::kQuadratic, c, 0.0);
}

double ProxSpec::weak_convexity() const {
  switch (kind_) {
    case Kind::kFirmThresholdMcp: return 1.0 / p2_;
    case Kind::kToyPiecewise: return 2.0;
    default: return 0.0;
  }
}

double ProxSpec::strong_convexity() const { return kind_ == Kind::kQuadratic ? p1_ : 0.0; }

double ProxSpec::gradient_lipschitz() const {
  switch (kind_) {
    case Kind::kQuadratic: return p1_;
    case Kind::kToyPiecewise: return 2.0;
    default: return 0.0;
  }
}

bool ProxSpec::smooth() const {
  switch (kind_) {
    case Kind::kZero:
    case Kind::kQuadratic:
    case Kind::kToyPiecewise: return true;
    case Kind::kSoftThreshold:
    case Kind::kFirmThresholdMcp: return p1_ == 0.0;
    case Kind::kBoxProjection: return false;
  }
  return false;
}

double ProxSpec::scalar_value(double z) const {
  switch (kind_) {
    case Kind::kZero: return 0.0;
    case Kind::kSoftThreshold: return p1_ * std::abs(z);
    case Kind::kFirmThresholdMcp: {
      const double a = std::abs(z);
      if (a <= p2_ * p1_) return p1_ * a - z * z / (2.0 * p2_);
      return 0.5 * p2_ * p1_ * p1_;
    }
    case Kind::kBoxProjection:
      return (z >= p1_ && z <= p2_) ? 0.0 : std::numeric_limits<double>::infinity();
    case Kind::kQuadratic: return 0.5 * p1_ * z * z;
    case Kind::kToyPiecewise: return toy_g(z);
  }
  return 0.0;
}

double ProxSpec::value(VecView z) const {
  double s = 0.0;
  for (double v : z) s += scalar_value(v);
  return s;
}

void ProxSpec::check_step(double tau) const {
  require(tau > 0.0 && std::isfinite(tau), ErrorCode::kIllPosedProx,
          "prox step must be positive, got " + format_double(tau));
  require(tau * weak_convexity() < 1.0, ErrorCode::kIllPosedProx,
          to_string() + " is not single-valued at step " + format_double(tau) +
              " (tau * weak_convexity >= 1)");
}

double ProxSpec::scalar_prox(double tau, double v) const {
  switch (kind_) {
    case Kind::kZero: return v;
    case Kind::kSoftThreshold: return shrink(v, tau * p1_);
    case Kind::kFirmThresholdMcp: {
      const double a = std::abs(v);
      if (a <= tau * p1_) return 0.0;
      if (a <= p2_ * p1_) return sign(v) * (a - tau * p1_) / (1.0 - tau / p2_);
      return v;
    }
    case Kind::kBoxProjection: return std::clamp(v, p1_, p2_);
    case Kind::kQuadratic: return v / (1.0 + tau * p1_);
    case Kind::kToyPiecewise: return toy_prox_piecewise(tau, v);
  }
  return v;
}

Vec ProxSpec::prox(double tau, VecView anchor) const {
  check_step(tau);
  Vec out(anchor.size());
  const auto n = static_cast<std::ptrdiff_t>(anchor.size());
#pragma omp parallel for schedule(static) if (n > 16384)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = scalar_prox(tau, anchor[i]);
  return out;
}

double ProxSpec::scalar_min_norm_shift(double z, double v) const {
  switch (kind_) {
    case Kind::kZero: return v;
    case Kind::kSoftThreshold:
      if (z != 0.0) return v + p1_ * sign(z);
      return shrink(v, p1_);
    case Kind::kFirmThresholdMcp: {
      if (z == 0.0) return shrink(v, p1_);
      const double a = std::abs(z);
      return v + sign(z) * std::max(p1_ - a / p2_, 0.0);
    }
    case Kind::kBoxProjection:
      if (z <= p1_ && z >= p2_) return 0.0;  // degenerate box: normal cone is R
      if (z <= p1_) return v >= 0.0 ? 0.0 : v;
      if (z >= p2_) return v <= 0.0 ? 0.0 : v;
      return v;
    case Kind::kQuadratic: return v + p1_ * z;
    case Kind::kToyPiecewise: return v + toy_g_prime(z);
  }
  return v;
}

Vec ProxSpec::min_norm_shift(VecView z, VecView v) const {
  require(z.size() == v.size(), ErrorCode::kDimensionMismatch, "min_norm_shift sizes differ");
  Vec out(z.size());
  const auto n = static_cast<std::ptrdiff_t>(z.size());
#pragma omp parallel for schedule(static) if (n > 16384)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = scalar_min_norm_shift(z[i], v[i]);
  return out;
}

std::string ProxSpec::to_string() const {
  switch (kind_) {
    case Kind::kZero: return "zero";
    case Kind::kSoftThreshold: return "soft_threshold(" + format_double(p1_) + ")";
    case Kind::kFirmThresholdMcp:
      return "mcp(" + format_double(p1_) + "," + format_double(p2_) + ")";
    case Kind::kBoxProjection:
      return "box(" + format_double(p1_) + "," + format_double(p2_) + ")";
    case Kind::kQuadratic: return "quadratic(" + format_double(p1_) + ")";
    case Kind::kToyPiecewise: return "toy";
  }
  return "zero";
}

ProxSpec ProxSpec::parse(const std::string& text) {
  const std::string_view t = trim(text);
  const auto open = t.find('(');
  const std::string name(trim(t.substr(0, open)));
  std::vector<double> args;
  if (open != std::string_view::npos) {
    const auto close = t.rfind(')');
    if (close == std::string_view::npos || close < open)
      throw Error(ErrorCode::kConfigParse, "unbalanced parentheses in '" + text + "'");
    for (const auto& a : split(t.substr(open + 1, close - open - 1), ','))
      args.push_back(parse_double(a));
  }
  auto want = [&](std::size_t n) {
    if (args.size() != n)
      throw Error(ErrorCode::kConfigParse, "'" + name + "' takes " + std::to_string(n) + " argument(s)");
  };
  if (name == "zero") { want(0); return zero(); }
  if (name == "toy") { want(0); return toy_piecewise(); }
  if (name == "soft_threshold") { want(1); return soft_threshold(args[0]); }
  if (name == "mcp") { want(2); return firm_threshold_mcp(args[0], args[1]); }
  if (name == "box") { want(2); return box(args[0], args[1]); }
  if (name == "quadratic") { want(1); return quadratic(args[0]); }
  throw Error(ErrorCode::kConfigParse, "unknown regularizer '" + name + "'");
}

Vec prox_apply(const ProxSpec& spec, double tau, VecView anchor) {
  return spec.prox(tau, anchor);
}

}  // namespace minmax

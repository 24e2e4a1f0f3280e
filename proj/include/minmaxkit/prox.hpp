#pragma once

#include <string>

#include "minmaxkit/vec.hpp"

namespace minmax {

/// Closed-form proximal operators of separable regularizers.
///
/// Every kind acts component-wise, so the vector operations apply the scalar
/// formula to each entry. `prox` is the unique minimizer of
/// value(z) + |z - anchor|^2 / (2 tau), which requires tau * weak_convexity() < 1.
class ProxSpec {
 public:
  enum class Kind {
    kZero,
    kSoftThreshold,     // alpha |z|
    kFirmThresholdMcp,  // minimax concave penalty (alpha, gamma)
    kBoxProjection,     // indicator of [lo, hi]
    kQuadratic,         // (c/2) z^2
    kToyPiecewise,      // 0.5 - z^2 on |z| <= 0.5, (|z| - 1)^2 elsewhere
  };

  static ProxSpec zero() { return ProxSpec(Kind::kZero, 0.0, 0.0); }
  static ProxSpec soft_threshold(double alpha);
  static ProxSpec firm_threshold_mcp(double alpha, double gamma);
  static ProxSpec box(double lo, double hi);
  static ProxSpec quadratic(double c);
  static ProxSpec toy_piecewise() { return ProxSpec(Kind::kToyPiecewise, 0.0, 0.0); }

  Kind kind() const { return kind_; }
  double param1() const { return p1_; }
  double param2() const { return p2_; }

  double weak_convexity() const;
  double strong_convexity() const;
  /// Lipschitz constant of the derivative, or 0 when the function is nonsmooth.
  double gradient_lipschitz() const;
  bool smooth() const;

  double scalar_value(double z) const;
  double value(VecView z) const;

  double scalar_prox(double tau, double anchor) const;
  Vec prox(double tau, VecView anchor) const;

  /// Element of v + dg(z) with the smallest magnitude. For smooth kinds this is
  /// v + g'(z).
  double scalar_min_norm_shift(double z, double v) const;
  Vec min_norm_shift(VecView z, VecView v) const;

  /// Throws IllPosedProx unless tau > 0 and tau * weak_convexity() < 1.
  void check_step(double tau) const;

  /// Compact textual form, e.g. "soft_threshold(0.5)". Parsed by parse().
  std::string to_string() const;
  static ProxSpec parse(const std::string& text);

  friend bool operator==(const ProxSpec&, const ProxSpec&) = default;

 private:
  ProxSpec(Kind kind, double p1, double p2) : kind_(kind), p1_(p1), p2_(p2) {}

  Kind kind_;
  double p1_;
  double p2_;
};

/// Regularizers are only ever touched through value and prox.
using ProxFriendlyFunction = ProxSpec;

/// Proximal map of the piecewise toy function g with step tau < 0.5.
double toy_prox_piecewise(double tau, double anchor);

/// Toy function g and its derivative (g is C^1).
double toy_g(double z);
double toy_g_prime(double z);

/// prox_apply(spec, tau, anchor): checks dimensions and step validity.
Vec prox_apply(const ProxSpec& spec, double tau, VecView anchor);

}  // namespace minmax

#pragma once

#include <optional>
#include <vector>

#include "minmaxkit/problem.hpp"

namespace minmax {

/// g(x) + x y - y^2 / 2 with the piecewise weakly convex g. Stationary points
/// of phi sit at -2/3, 0 and 2/3; phi(+-2/3) = 1/3 is its minimum.
MinMaxProblem make_toy_problem();

/// Separable -a x^2 + b x y - c y^2 in `dim` coordinates (c > 0, b != 0).
/// Negative a gives a convex coupling in x.
MinMaxProblem make_quadratic_problem(double a, double b, double c, std::size_t dim = 1);

/// x y with h = 0. The declared constants (all 1) are nominal: the coupling is
/// not strongly concave, so this instance is only meant for single-step tests.
MinMaxProblem make_bilinear_problem();

/// Dense row-major matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  Vec multiply(VecView v) const;
  Vec multiply_transposed(VecView v) const;
};

/// 0.5 x'Px + x'By - 0.5 y'Qy - h(y) with user-declared constants. Has no
/// closed-form prox in x or inner maximizer, so PD-RGA is unavailable and the
/// inner oracle iterates.
MinMaxProblem make_dense_quadratic_problem(DenseMatrix p, DenseMatrix b, DenseMatrix q,
                                           ProxSpec h, SmoothnessConstants constants,
                                           ConcavitySource source,
                                           std::optional<double> phi_lower_bound = std::nullopt);

}  // namespace minmax

#include "minmaxkit/problems.hpp"

#include <cmath>
#include <memory>

#include "minmaxkit/error.hpp"
#include "minmaxkit/text.hpp"

namespace minmax {

MinMaxProblem make_toy_problem() {
  MinMaxProblem p;
  p.id = "toy";
  p.dim_x = 1;
  p.dim_y = 1;
  p.grad_x = [](VecView x, VecView y) { return Vec{toy_g_prime(x[0]) + y[0]}; };
  p.grad_y = [](VecView x, VecView y) { return Vec{x[0] - y[0]}; };
  p.coupling = [](VecView x, VecView y) { return toy_g(x[0]) + x[0] * y[0] - 0.5 * y[0] * y[0]; };
  p.h = ProxSpec::zero();
  // prox of eta * (g(.) + <., y>) at x is prox of eta * g at x - eta * y.
  p.prox_x = [](double eta, VecView x, VecView y) {
    return Vec{toy_prox_piecewise(eta, x[0] - eta * y[0])};
  };
  p.y_star_closed_form = [](VecView x) { return Vec{x[0]}; };
  p.constants = SmoothnessConstants::make(2.0, 1.0, 1.0, 1.0, 1.0, 2.0);
  p.concavity_source = ConcavitySource::kCouplingStronglyConcave;
  p.phi_lower_bound = 1.0 / 3.0;
  p.validate();
  return p;
}

MinMaxProblem make_quadratic_problem(double a, double b, double c, std::size_t dim) {
  require(c > 0.0 && b != 0.0 && std::isfinite(a) && std::isfinite(b) && std::isfinite(c),
          ErrorCode::kInvalidArgument, "quadratic problem needs c > 0 and b != 0");
  MinMaxProblem p;
  p.id = "quadratic(" + format_double(a) + "," + format_double(b) + "," + format_double(c) + ")";
  p.dim_x = dim;
  p.dim_y = dim;
  p.grad_x = [a, b](VecView x, VecView y) {
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = -2.0 * a * x[i] + b * y[i];
    return g;
  };
  p.grad_y = [b, c](VecView x, VecView y) {
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = b * x[i] - 2.0 * c * y[i];
    return g;
  };
  p.coupling = [a, b, c](VecView x, VecView y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      s += -a * x[i] * x[i] + b * x[i] * y[i] - c * y[i] * y[i];
    return s;
  };
  p.prox_x = [a, b](double eta, VecView x, VecView y) {
    const double denom = 1.0 - 2.0 * a * eta;
    require(denom > 0.0, ErrorCode::kIllPosedProx, "quadratic prox needs 1 - 2 a eta > 0");
    Vec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - eta * b * y[i]) / denom;
    return z;
  };
  p.y_star_closed_form = [b, c](VecView x) { return scaled(b / (2.0 * c), x); };
  p.constants = SmoothnessConstants::make(2.0 * std::abs(a), std::abs(b), std::abs(b), 2.0 * c,
                                          2.0 * c, std::max(0.0, 2.0 * a));
  p.concavity_source = ConcavitySource::kCouplingStronglyConcave;
  // phi(x) = (b^2 / (4c) - a) |x|^2
  if (b * b / (4.0 * c) - a >= 0.0) p.phi_lower_bound = 0.0;
  p.validate();
  return p;
}

MinMaxProblem make_bilinear_problem() {
  MinMaxProblem p;
  p.id = "bilinear";
  p.dim_x = 1;
  p.dim_y = 1;
  p.grad_x = [](VecView, VecView y) { return Vec{y[0]}; };
  p.grad_y = [](VecView x, VecView) { return Vec{x[0]}; };
  p.coupling = [](VecView x, VecView y) { return x[0] * y[0]; };
  p.prox_x = [](double eta, VecView x, VecView y) { return Vec{x[0] - eta * y[0]}; };
  p.constants = SmoothnessConstants::make(0.0, 1.0, 1.0, 1.0, 1.0, 0.0);
  p.validate();
  return p;
}

Vec DenseMatrix::multiply(VecView v) const {
  require(v.size() == cols, ErrorCode::kDimensionMismatch, "matrix-vector size mismatch");
  Vec out(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += data[i * cols + j] * v[j];
    out[i] = s;
  }
  return out;
}

Vec DenseMatrix::multiply_transposed(VecView v) const {
  require(v.size() == rows, ErrorCode::kDimensionMismatch, "matrix-vector size mismatch");
  Vec out(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out[j] += data[i * cols + j] * v[i];
  return out;
}

MinMaxProblem make_dense_quadratic_problem(DenseMatrix pm, DenseMatrix bm, DenseMatrix qm,
                                           ProxSpec h, SmoothnessConstants constants,
                                           ConcavitySource source,
                                           std::optional<double> phi_lower_bound) {
  const std::size_t d = pm.rows;
  const std::size_t n = qm.rows;
  require(pm.cols == d && qm.cols == n && bm.rows == d && bm.cols == n &&
              pm.data.size() == d * d && qm.data.size() == n * n && bm.data.size() == d * n,
          ErrorCode::kDimensionMismatch, "dense quadratic: P is d x d, B is d x n, Q is n x n");
  auto P = std::make_shared<const DenseMatrix>(std::move(pm));
  auto B = std::make_shared<const DenseMatrix>(std::move(bm));
  auto Q = std::make_shared<const DenseMatrix>(std::move(qm));
  MinMaxProblem p;
  p.id = "dense_quadratic";
  p.dim_x = d;
  p.dim_y = n;
  p.grad_x = [P, B](VecView x, VecView y) {
    Vec g = P->multiply(x);
    const Vec by = B->multiply(y);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += by[i];
    return g;
  };
  p.grad_y = [B, Q](VecView x, VecView y) {
    Vec g = B->multiply_transposed(x);
    const Vec qy = Q->multiply(y);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= qy[i];
    return g;
  };
  p.coupling = [P, B, Q](VecView x, VecView y) {
    return 0.5 * dot(x, P->multiply(x)) + dot(x, B->multiply(y)) - 0.5 * dot(y, Q->multiply(y));
  };
  p.h = h;
  p.constants = constants;
  p.concavity_source = source;
  p.phi_lower_bound = phi_lower_bound;
  p.validate();
  return p;
}

}  // namespace minmax

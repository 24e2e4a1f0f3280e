#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "minmaxkit/vec.hpp"

namespace minmax {

struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t size() const { return rows * cols; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Small row-major filter anchored at (rows / 2, cols / 2).
struct Kernel2D {
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::vector<double> w{1.0};

  static Kernel2D delta();
  static Kernel2D uniform(std::size_t n);
  /// Normalized isotropic Gaussian on an n x n support.
  static Kernel2D gaussian(std::size_t n, double sigma);
  /// Outer product of `taps` with itself, normalized to unit sum.
  static Kernel2D separable(const std::vector<double>& taps);
  /// Separable [1, 3, 3, 1] / 8 triangle.
  static Kernel2D triangle4();

  /// k[a, b] == k[rows-1-a, cols-1-b]
  bool centro_symmetric() const;
  double sum() const;
};

/// Matrix-free operator R^dim_in -> R^dim_out. Immutable; the callables must
/// be safe to call concurrently.
struct LinearOperator {
  std::string name;
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
  std::function<Vec(VecView)> forward;
  std::function<Vec(VecView)> adjoint;
  std::optional<double> spectral_norm_hint;

  /// Dimension-checked forward / adjoint.
  Vec apply(VecView x) const;
  Vec apply_adjoint(VecView y) const;
};

LinearOperator identity_operator(std::size_t n);
LinearOperator diagonal_operator(Vec diag);
/// outer after inner
LinearOperator compose(const LinearOperator& outer, const LinearOperator& inner);

/// max |DFT(kernel)| over the image grid: the spectral norm of the circular blur.
double blur_spectral_norm(const Kernel2D& kernel, Shape image);

/// Circular convolution with `kernel`; the adjoint is circular correlation.
/// The spectral norm hint comes from blur_spectral_norm.
/// Throws ShapeMismatch when the kernel does not fit inside the image.
LinearOperator make_blur_operator(const Kernel2D& kernel, Shape image, bool parallel = true);

/// Keep every s-th pixel of the image blurred by `antialias`. Maps
/// rows x cols to (rows / s) x (cols / s).
LinearOperator make_downsampling_operator(std::size_t s, Shape image, const Kernel2D& antialias,
                                          bool parallel = true);

/// Spectral norm from power iteration on A^T A with a seeded Gaussian start.
/// Stops once |A^T A v - r v| <= tol r for the Rayleigh quotient r.
double power_iteration_norm(const LinearOperator& a, double tol = 1e-9,
                            std::int64_t max_iter = 100000, std::uint64_t seed = 0);

/// |<A x, y> - <x, A^T y>| / (|A x| |y| + |x| |A^T y|) on seeded random x, y.
double adjoint_mismatch(const LinearOperator& a, std::uint64_t seed = 0);

/// Row-major dim_out x dim_in matrix of A, column by column.
std::vector<double> materialize(const LinearOperator& a);

}  // namespace minmax

#pragma once

#include <cstdint>
#include <optional>

#include "minmaxkit/image.hpp"
#include "minmaxkit/linops.hpp"
#include "minmaxkit/problem.hpp"
#include "minmaxkit/prox.hpp"

namespace minmax {

/// Dualized restoration problem
///   min_x max_y <A x - b, y> - (sigma^2 / (2 lambda)) |y|^2 + g(x),
/// equivalent to min_x lambda / (2 sigma^2) |A x - b|^2 + g(x).
struct ImagingProblem {
  LinearOperator a;
  Vec b;
  double sigma = 0.03;
  double lambda = 0.00026;
  ProxSpec g = ProxSpec::soft_threshold(0.01);
  /// |A|; computed by power iteration when <= 0.
  double a_norm = 0.0;
  /// Reject lambda above lambda_cap().
  bool enforce_lambda_cap = true;
};

/// sigma^2 / ((2 + sqrt2) |A|)
double lambda_cap(double sigma, double a_norm);

/// Coupling <A x - b, y> - (mu / 2) |y|^2 + g(x) with mu = sigma^2 / lambda,
/// h = 0, y*(x) = (A x - b) / mu and prox in x equal to
/// prox_{eta g}(x - eta A^T y). The partial gradient in x is the
/// smallest-norm element of A^T y + dg(x). Constants: l_xy = l_yx = |A|,
/// l_yy = mu, l_xx = Lipschitz constant of g' (0 when g is nonsmooth).
/// Throws ConstraintViolated when lambda exceeds its cap and the cap is enforced.
MinMaxProblem build_imaging_minmax(const ImagingProblem& ip);

/// Black background with a few bright rectangles and discs.
Image synthetic_image(std::size_t n = 64);

/// Seeded standard normal samples.
Vec gaussian_noise(std::size_t n, std::uint64_t seed);

struct RestoreSetup {
  Image truth;
  /// Observation mapped to the truth's grid (pixel replication after
  /// downsampling) for PSNR comparison.
  Image observation;
  Shape observation_shape;
  ImagingProblem problem;
};

struct DeblurOptions {
  std::size_t n = 64;
  Kernel2D kernel = Kernel2D::gaussian(7, 1.0);
  double sigma = 0.03;
  /// Standard deviation of the added noise; sigma when unset.
  std::optional<double> noise_level;
  /// <= 0 selects the cap.
  double lambda = 0.0;
  ProxSpec g = ProxSpec::soft_threshold(0.01);
  std::uint64_t seed = 0;
  bool enforce_lambda_cap = true;
};

/// b = A x_true + noise_level * noise with a circular blur A.
RestoreSetup make_deblur_setup(const DeblurOptions& opt);

struct SuperResOptions {
  std::size_t n = 64;
  std::size_t factor = 2;
  Kernel2D kernel = Kernel2D::triangle4();
  double sigma = 0.03;
  std::optional<double> noise_level;
  double lambda = 0.0;
  ProxSpec g = ProxSpec::soft_threshold(0.01);
  std::uint64_t seed = 0;
  bool enforce_lambda_cap = true;
};

/// b = S H x_true + noise_level * noise.
RestoreSetup make_superres_setup(const SuperResOptions& opt);

}  // namespace minmax

#include "minmaxkit/linops.hpp"

#include <cmath>
#include <random>

#include "minmaxkit/error.hpp"
#include "minmaxkit/kernels.hpp"
#include "minmaxkit/text.hpp"

namespace minmax {

namespace {

Vec gaussian_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vec v(n);
  for (auto& e : v) e = dist(rng);
  return v;
}

}  // namespace

Kernel2D Kernel2D::delta() { return Kernel2D{}; }

Kernel2D Kernel2D::uniform(std::size_t n) {
  require(n > 0, ErrorCode::kInvalidArgument, "kernel size must be positive");
  return Kernel2D{n, n, std::vector<double>(n * n, 1.0 / static_cast<double>(n * n))};
}

Kernel2D Kernel2D::gaussian(std::size_t n, double sigma) {
  require(n > 0 && sigma > 0.0, ErrorCode::kInvalidArgument, "bad Gaussian kernel parameters");
  std::vector<double> taps(n);
  const double c = (static_cast<double>(n) - 1.0) / 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(i) - c;
    taps[i] = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  return separable(taps);
}

Kernel2D Kernel2D::separable(const std::vector<double>& taps) {
  require(!taps.empty(), ErrorCode::kInvalidArgument, "empty kernel taps");
  const std::size_t n = taps.size();
  Kernel2D k{n, n, std::vector<double>(n * n)};
  double s = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) s += k.w[a * n + b] = taps[a] * taps[b];
  require(s != 0.0, ErrorCode::kInvalidArgument, "kernel taps sum to zero");
  for (auto& v : k.w) v /= s;
  return k;
}

Kernel2D Kernel2D::triangle4() { return separable({1.0, 3.0, 3.0, 1.0}); }

bool Kernel2D::centro_symmetric() const {
  for (std::size_t a = 0; a < rows; ++a)
    for (std::size_t b = 0; b < cols; ++b)
      if (w[a * cols + b] != w[(rows - 1 - a) * cols + (cols - 1 - b)]) return false;
  return true;
}

double Kernel2D::sum() const {
  double s = 0.0;
  for (double v : w) s += v;
  return s;
}

Vec LinearOperator::apply(VecView x) const {
  require(x.size() == dim_in, ErrorCode::kDimensionMismatch,
          name + ": input has " + std::to_string(x.size()) + " entries, expected " +
              std::to_string(dim_in));
  return forward(x);
}

Vec LinearOperator::apply_adjoint(VecView y) const {
  require(y.size() == dim_out, ErrorCode::kDimensionMismatch,
          name + ": adjoint input has " + std::to_string(y.size()) + " entries, expected " +
              std::to_string(dim_out));
  return adjoint(y);
}

LinearOperator identity_operator(std::size_t n) {
  LinearOperator op;
  op.name = "identity";
  op.dim_in = op.dim_out = n;
  op.forward = [](VecView x) { return Vec(x.begin(), x.end()); };
  op.adjoint = op.forward;
  op.spectral_norm_hint = n > 0 ? 1.0 : 0.0;
  return op;
}

LinearOperator diagonal_operator(Vec diag) {
  LinearOperator op;
  op.name = "diagonal";
  op.dim_in = op.dim_out = diag.size();
  double m = 0.0;
  for (double d : diag) m = std::max(m, std::abs(d));
  op.spectral_norm_hint = m;
  op.forward = [d = std::move(diag)](VecView x) {
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = d[i] * x[i];
    return out;
  };
  op.adjoint = op.forward;
  return op;
}

LinearOperator compose(const LinearOperator& outer, const LinearOperator& inner) {
  require(outer.dim_in == inner.dim_out, ErrorCode::kShapeMismatch,
          "cannot compose " + outer.name + " after " + inner.name);
  LinearOperator op;
  op.name = outer.name + "*" + inner.name;
  op.dim_in = inner.dim_in;
  op.dim_out = outer.dim_out;
  op.forward = [outer, inner](VecView x) { return outer.forward(inner.forward(x)); };
  op.adjoint = [outer, inner](VecView y) { return inner.adjoint(outer.adjoint(y)); };
  return op;
}

double blur_spectral_norm(const Kernel2D& kernel, Shape image) {
  // circulant: singular values are the moduli of the kernel's DFT on the grid
  const double two_pi = 2.0 * std::acos(-1.0);
  double best = 0.0;
  for (std::size_t u = 0; u < image.rows; ++u)
    for (std::size_t v = 0; v < image.cols; ++v) {
      double re = 0.0, im = 0.0;
      for (std::size_t a = 0; a < kernel.rows; ++a)
        for (std::size_t b = 0; b < kernel.cols; ++b) {
          const double ang = two_pi * (static_cast<double>((u * a) % image.rows) / image.rows +
                                       static_cast<double>((v * b) % image.cols) / image.cols);
          re += kernel.w[a * kernel.cols + b] * std::cos(ang);
          im -= kernel.w[a * kernel.cols + b] * std::sin(ang);
        }
      best = std::max(best, std::hypot(re, im));
    }
  return best;
}

LinearOperator make_blur_operator(const Kernel2D& kernel, Shape image, bool parallel) {
  require(kernel.w.size() == kernel.rows * kernel.cols, ErrorCode::kShapeMismatch,
          "kernel data does not match its shape");
  require(kernel.rows > 0 && kernel.cols > 0 && kernel.rows <= image.rows &&
              kernel.cols <= image.cols,
          ErrorCode::kShapeMismatch,
          "kernel " + std::to_string(kernel.rows) + "x" + std::to_string(kernel.cols) +
              " does not fit image " + std::to_string(image.rows) + "x" +
              std::to_string(image.cols));
  LinearOperator op;
  op.name = "blur";
  op.dim_in = op.dim_out = image.size();
  op.spectral_norm_hint = blur_spectral_norm(kernel, image);
  auto conv = parallel ? kernels::parallel::convolve : kernels::serial::convolve;
  auto corr = parallel ? kernels::parallel::correlate : kernels::serial::correlate;
  op.forward = [kernel, image, conv](VecView x) {
    Vec out(image.size());
    conv(x.data(), image.rows, image.cols, kernel.w.data(), kernel.rows, kernel.cols, out.data());
    return out;
  };
  op.adjoint = [kernel, image, corr](VecView y) {
    Vec out(image.size());
    corr(y.data(), image.rows, image.cols, kernel.w.data(), kernel.rows, kernel.cols, out.data());
    return out;
  };
  return op;
}

LinearOperator make_downsampling_operator(std::size_t s, Shape image, const Kernel2D& antialias,
                                          bool parallel) {
  require(s > 0 && image.rows % s == 0 && image.cols % s == 0, ErrorCode::kShapeMismatch,
          "image " + std::to_string(image.rows) + "x" + std::to_string(image.cols) +
              " is not divisible by factor " + std::to_string(s));
  const LinearOperator blur = make_blur_operator(antialias, image, parallel);
  const Shape coarse{image.rows / s, image.cols / s};
  LinearOperator sample;
  sample.name = "downsample" + std::to_string(s);
  sample.dim_in = image.size();
  sample.dim_out = coarse.size();
  auto down = parallel ? kernels::parallel::downsample : kernels::serial::downsample;
  auto up = parallel ? kernels::parallel::upsample_zero : kernels::serial::upsample_zero;
  sample.forward = [=](VecView x) {
    Vec out(coarse.size());
    down(x.data(), image.rows, image.cols, s, out.data());
    return out;
  };
  sample.adjoint = [=](VecView y) {
    Vec out(image.size());
    up(y.data(), coarse.rows, coarse.cols, s, out.data());
    return out;
  };
  return compose(sample, blur);
}

double power_iteration_norm(const LinearOperator& a, double tol, std::int64_t max_iter,
                            std::uint64_t seed) {
  require(tol > 0.0 && max_iter > 0, ErrorCode::kInvalidArgument, "bad power iteration settings");
  if (a.dim_in == 0 || a.dim_out == 0) return 0.0;
  std::mt19937_64 rng(seed);
  Vec v = gaussian_vector(a.dim_in, rng);
  v = scaled(1.0 / norm(v), v);
  for (std::int64_t it = 0; it < max_iter; ++it) {
    const Vec av = a.apply(v);
    const Vec w = a.apply_adjoint(av);
    const double r = squared_norm(av);
    const double wn = norm(w);
    if (wn == 0.0) return 0.0;
    const double residual = distance(w, scaled(r, v));
    if (residual <= tol * r) {
      if (a.spectral_norm_hint) {
        const double est = std::sqrt(r);
        require(std::abs(est - *a.spectral_norm_hint) <= 1e-6 * std::max(1.0, est),
                ErrorCode::kConstraintViolated,
                a.name + ": estimated norm " + format_double(est) + " disagrees with hint " +
                    format_double(*a.spectral_norm_hint));
      }
      return std::sqrt(r);
    }
    v = scaled(1.0 / wn, w);
  }
  throw Error(ErrorCode::kMaxIterExceeded,
              a.name + ": power iteration did not converge in " + std::to_string(max_iter) +
                  " iterations");
}

double adjoint_mismatch(const LinearOperator& a, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Vec x = gaussian_vector(a.dim_in, rng);
  const Vec y = gaussian_vector(a.dim_out, rng);
  const Vec ax = a.apply(x);
  const Vec aty = a.apply_adjoint(y);
  const double scale = norm(ax) * norm(y) + norm(x) * norm(aty);
  const double diff = std::abs(dot(ax, y) - dot(x, aty));
  return scale > 0.0 ? diff / scale : diff;
}

std::vector<double> materialize(const LinearOperator& a) {
  std::vector<double> m(a.dim_out * a.dim_in);
  Vec e(a.dim_in, 0.0);
  for (std::size_t j = 0; j < a.dim_in; ++j) {
    e[j] = 1.0;
    const Vec col = a.apply(e);
    e[j] = 0.0;
    for (std::size_t i = 0; i < a.dim_out; ++i) m[i * a.dim_in + j] = col[i];
  }
  return m;
}

}  // namespace minmax

#include "minmaxkit/imaging.hpp"

#include <cmath>
#include <random>

#include "minmaxkit/error.hpp"
#include "minmaxkit/text.hpp"

namespace minmax {

double lambda_cap(double sigma, double a_norm) {
  require(sigma > 0.0 && a_norm > 0.0, ErrorCode::kInvalidArgument,
          "lambda cap needs positive sigma and operator norm");
  return sigma * sigma / ((2.0 + std::sqrt(2.0)) * a_norm);
}

MinMaxProblem build_imaging_minmax(const ImagingProblem& ip) {
  require(ip.sigma > 0.0 && ip.lambda > 0.0, ErrorCode::kInvalidArgument,
          "sigma and lambda must be positive");
  require(ip.b.size() == ip.a.dim_out, ErrorCode::kDimensionMismatch,
          "observation has " + std::to_string(ip.b.size()) + " entries, operator range " +
              std::to_string(ip.a.dim_out));
  const double a_norm = ip.a_norm > 0.0 ? ip.a_norm : power_iteration_norm(ip.a);
  require(a_norm > 0.0, ErrorCode::kInvalidArgument, "operator norm is zero");
  if (ip.enforce_lambda_cap) {
    const double cap = lambda_cap(ip.sigma, a_norm);
    require(ip.lambda <= cap * (1.0 + 1e-12), ErrorCode::kConstraintViolated,
            "lambda = " + format_double(ip.lambda) + " exceeds sigma^2 / ((2 + sqrt2) |A|) = " +
                format_double(cap));
  }
  const double mu = ip.sigma * ip.sigma / ip.lambda;

  MinMaxProblem p;
  p.id = "imaging_" + ip.a.name;
  p.dim_x = ip.a.dim_in;
  p.dim_y = ip.a.dim_out;
  const LinearOperator a = ip.a;
  const Vec b = ip.b;
  const ProxSpec g = ip.g;
  p.grad_x = [a, g](VecView x, VecView y) { return g.min_norm_shift(x, a.apply_adjoint(y)); };
  p.grad_y = [a, b, mu](VecView x, VecView y) {
    Vec r = sub(a.apply(x), b);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= mu * y[i];
    return r;
  };
  p.coupling = [a, b, g, mu](VecView x, VecView y) {
    const Vec r = sub(a.apply(x), b);
    return dot(r, y) - 0.5 * mu * squared_norm(y) + g.value(x);
  };
  p.h = ProxSpec::zero();
  p.prox_x = [a, g](double eta, VecView x, VecView y) {
    return g.prox(eta, axpy(x, -eta, a.apply_adjoint(y)));
  };
  p.y_star_closed_form = [a, b, mu](VecView x) { return scaled(1.0 / mu, sub(a.apply(x), b)); };
  p.constants = SmoothnessConstants::make(g.gradient_lipschitz(), a_norm, a_norm, mu, mu,
                                          g.weak_convexity());
  p.concavity_source = ConcavitySource::kCouplingStronglyConcave;
  if (g.kind() != ProxSpec::Kind::kToyPiecewise) p.phi_lower_bound = 0.0;
  p.validate();
  return p;
}

Image synthetic_image(std::size_t n) {
  Image img;
  img.shape = {n, n};
  img.pixels.assign(n * n, 0.0);
  const double s = static_cast<double>(n) / 64.0;
  auto rect = [&](double r0, double c0, double r1, double c1, double v) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i >= r0 * s && i < r1 * s && j >= c0 * s && j < c1 * s) img.pixels[i * n + j] = v;
  };
  auto disc = [&](double rc, double cc, double rad, double v) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double di = static_cast<double>(i) + 0.5 - rc * s;
        const double dj = static_cast<double>(j) + 0.5 - cc * s;
        if (di * di + dj * dj <= rad * rad * s * s) img.pixels[i * n + j] = v;
      }
  };
  rect(8, 8, 24, 30, 0.8);
  rect(40, 36, 56, 44, 0.6);
  disc(44, 18, 9, 1.0);
  disc(18, 46, 7, 0.7);
  return img;
}

Vec gaussian_noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Vec v(n);
  for (auto& e : v) e = dist(rng);
  return v;
}

namespace {

RestoreSetup finish_setup(Image truth, LinearOperator a, Shape obs_shape, std::size_t factor,
                          double sigma, double noise_level, double lambda, ProxSpec g, std::uint64_t seed,
                          bool enforce) {
  RestoreSetup st;
  const double a_norm = a.spectral_norm_hint ? *a.spectral_norm_hint : power_iteration_norm(a);
  Vec b = a.apply(truth.pixels);
  const Vec noise = gaussian_noise(b.size(), seed);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] += noise_level * noise[i];

  st.observation_shape = obs_shape;
  st.observation = upsample_nearest(Image{obs_shape, b}, factor);
  st.truth = std::move(truth);
  st.problem.a = std::move(a);
  st.problem.b = std::move(b);
  st.problem.sigma = sigma;
  st.problem.a_norm = a_norm;
  st.problem.lambda = lambda > 0.0 ? lambda : lambda_cap(sigma, a_norm);
  st.problem.g = g;
  st.problem.enforce_lambda_cap = enforce;
  return st;
}

}  // namespace

RestoreSetup make_deblur_setup(const DeblurOptions& opt) {
  Image truth = synthetic_image(opt.n);
  LinearOperator a = make_blur_operator(opt.kernel, truth.shape);
  const Shape shape = truth.shape;
  return finish_setup(std::move(truth), std::move(a), shape, 1, opt.sigma,
                      opt.noise_level.value_or(opt.sigma), opt.lambda, opt.g,
                      opt.seed, opt.enforce_lambda_cap);
}

RestoreSetup make_superres_setup(const SuperResOptions& opt) {
  Image truth = synthetic_image(opt.n);
  LinearOperator a = make_downsampling_operator(opt.factor, truth.shape, opt.kernel);
  const Shape coarse{opt.n / opt.factor, opt.n / opt.factor};
  return finish_setup(std::move(truth), std::move(a), coarse, opt.factor, opt.sigma,
                      opt.noise_level.value_or(opt.sigma), opt.lambda,
                      opt.g, opt.seed, opt.enforce_lambda_cap);
}

}  // namespace minmax

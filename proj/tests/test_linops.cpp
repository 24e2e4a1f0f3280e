#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <random>

#include "minmaxkit/error.hpp"
#include "minmaxkit/image.hpp"
#include "minmaxkit/kernels.hpp"
#include "minmaxkit/linops.hpp"

using namespace minmax;

namespace {

double svd_norm(const LinearOperator& a) {
  const auto m = materialize(a);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> mat(
      m.data(), a.dim_out, a.dim_in);
  Eigen::MatrixXd dense = mat;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(dense).singularValues()(0);
}

Vec random_vec(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  Vec v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("minmaxkit_linops_" + name);
}

}  // namespace

TEST(Kernel, Constructors) {
  EXPECT_DOUBLE_EQ(Kernel2D::gaussian(7, 1.0).sum(), 1.0);
  EXPECT_TRUE(Kernel2D::gaussian(7, 1.0).centro_symmetric());
  const auto t = Kernel2D::triangle4();
  EXPECT_EQ(t.rows, 4u);
  EXPECT_NEAR(t.sum(), 1.0, 1e-15);
  EXPECT_NEAR(t.w[0], 1.0 / 64.0, 1e-15);
  EXPECT_EQ(Kernel2D::uniform(3).w.size(), 9u);
}

TEST(Adjoint, AllOperators) {
  const Shape s{12, 10};
  const auto g = Kernel2D::gaussian(5, 1.2);
  const std::vector<LinearOperator> ops = {
      make_blur_operator(g, s),
      make_blur_operator(Kernel2D::triangle4(), s),
      make_blur_operator(Kernel2D::separable({1, 2, 4}), s),
      make_downsampling_operator(2, s, Kernel2D::triangle4()),
      make_downsampling_operator(3, {12, 9}, Kernel2D::uniform(3)),
      diagonal_operator({3, 1, 0.5}),
  };
  for (const auto& op : ops)
    for (std::uint64_t seed = 0; seed < 3; ++seed) EXPECT_LE(adjoint_mismatch(op, seed), 1e-10) << op.name;
}

TEST(Norm, AgainstSvd) {
  const auto u = make_blur_operator(Kernel2D::uniform(3), {8, 8});
  EXPECT_NEAR(svd_norm(u), 1.0, 1e-12);
  EXPECT_NEAR(power_iteration_norm(u), 1.0, 1e-6);
  const auto sr = make_downsampling_operator(2, {16, 16}, Kernel2D::gaussian(5, 1.0));
  const double ref = svd_norm(sr);
  EXPECT_NEAR(power_iteration_norm(sr), ref, 1e-6);
  const auto tri = make_downsampling_operator(2, {16, 16}, Kernel2D::triangle4());
  EXPECT_NEAR(power_iteration_norm(tri), svd_norm(tri), 1e-6);
  EXPECT_NEAR(power_iteration_norm(identity_operator(5)), 1.0, 1e-9);
  EXPECT_NEAR(power_iteration_norm(diagonal_operator({3, 1, 0.5})), 3.0, 1e-9);
}

TEST(Norm, DftHintMatchesSvd) {
  for (const auto& k : {Kernel2D::gaussian(5, 1.0), Kernel2D::triangle4(), Kernel2D::separable({1, 2, 1})}) {
    const Shape s{8, 6};
    EXPECT_NEAR(blur_spectral_norm(k, s), svd_norm(make_blur_operator(k, s)), 1e-10);
  }
}

TEST(Norm, WrongHintRejected) {
  auto op = identity_operator(4);
  op.spectral_norm_hint = 2.0;
  try {
    power_iteration_norm(op);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConstraintViolated);
  }
}

TEST(Kernels, SerialMatchesParallelBitwise) {
  const std::size_t r = 32, c = 28;
  const Vec img = random_vec(r * c, 4);
  const auto k = Kernel2D::gaussian(7, 1.5);
  Vec a(r * c), b(r * c);
  kernels::serial::convolve(img.data(), r, c, k.w.data(), k.rows, k.cols, a.data());
  kernels::parallel::convolve(img.data(), r, c, k.w.data(), k.rows, k.cols, b.data());
  EXPECT_EQ(a, b);
  kernels::serial::correlate(img.data(), r, c, k.w.data(), k.rows, k.cols, a.data());
  kernels::parallel::correlate(img.data(), r, c, k.w.data(), k.rows, k.cols, b.data());
  EXPECT_EQ(a, b);
  Vec d1(16 * 14), d2(16 * 14);
  kernels::serial::downsample(img.data(), r, c, 2, d1.data());
  kernels::parallel::downsample(img.data(), r, c, 2, d2.data());
  EXPECT_EQ(d1, d2);
}

TEST(Kernels, DeltaIsIdentity) {
  const Vec img = random_vec(20, 1);
  const auto op = make_blur_operator(Kernel2D::delta(), {4, 5});
  EXPECT_EQ(op.apply(img), img);
}

TEST(Kernels, ShiftDirection) {
  // a one-hot kernel right of the anchor shifts the image left under convolution
  Kernel2D k{1, 3, {0, 0, 1}};
  const Vec img{1, 2, 3, 4};
  Vec out(4);
  kernels::serial::convolve(img.data(), 1, 4, k.w.data(), 1, 3, out.data());
  EXPECT_EQ(out, (Vec{4, 1, 2, 3}));
  kernels::serial::correlate(img.data(), 1, 4, k.w.data(), 1, 3, out.data());
  EXPECT_EQ(out, (Vec{2, 3, 4, 1}));
}

TEST(Operators, DimensionChecks) {
  const auto op = make_blur_operator(Kernel2D::uniform(3), {4, 4});
  EXPECT_THROW(op.apply(Vec(15)), Error);
  EXPECT_THROW(make_downsampling_operator(3, {4, 4}, Kernel2D::delta()), Error);
  EXPECT_THROW(make_blur_operator(Kernel2D::uniform(5), {3, 3}), Error);
}

TEST(Image, Psnr) {
  Image a{{4, 4}, Vec(16, 0.5)};
  Image b = a;
  EXPECT_TRUE(std::isinf(psnr(a, b)));
  for (auto& v : b.pixels) v += 0.1;
  EXPECT_NEAR(psnr(a, b), 20.0, 1e-12);
  EXPECT_THROW(psnr(a, Image{{2, 8}, Vec(16, 0.5)}), Error);
}

TEST(Image, PgmRoundTrip) {
  Image img{{3, 5}, {}};
  for (int i = 0; i < 15; ++i) img.pixels.push_back(i * 17 / 255.0);
  const auto path = temp_file("rt.pgm").string();
  write_pgm(img, path);
  const Image back = read_pgm(path);
  EXPECT_EQ(back.shape, img.shape);
  for (std::size_t i = 0; i < 15; ++i) EXPECT_NEAR(back.pixels[i], img.pixels[i], 1e-15);
  std::filesystem::remove(path);
}

TEST(Image, CsvRoundTrip) {
  Image img{{2, 3}, {0.1, -0.25, 1e-17, 3.5, 0.0, 1.0 / 3.0}};
  const auto path = temp_file("rt.csv").string();
  write_image_csv(img, path);
  const Image back = read_image_csv(path);
  EXPECT_EQ(back.shape, img.shape);
  EXPECT_EQ(back.pixels, img.pixels);
  std::filesystem::remove(path);
}

TEST(Image, NearestUpsample) {
  const Image up = upsample_nearest(Image{{1, 2}, {1, 2}}, 2);
  EXPECT_EQ(up.shape, (Shape{2, 4}));
  EXPECT_EQ(up.pixels, (Vec{1, 1, 2, 2, 1, 1, 2, 2}));
}

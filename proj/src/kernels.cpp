#include "minmaxkit/kernels.hpp"

#include <cstdint>
#include <vector>

namespace minmax::kernels {

namespace {

// Wrapped column index of (j + sign (b - cb)) for every j, b; shared by all rows.
std::vector<std::size_t> column_table(std::size_t cols, std::size_t kcols, int sign) {
  const auto c = static_cast<std::int64_t>(cols);
  const auto cb = static_cast<std::int64_t>(kcols / 2);
  std::vector<std::size_t> t(cols * kcols);
  for (std::int64_t j = 0; j < c; ++j)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(kcols); ++b) {
      std::int64_t jj = (j + sign * (b - cb)) % c;
      if (jj < 0) jj += c;
      t[j * kcols + b] = static_cast<std::size_t>(jj);
    }
  return t;
}

// sign = -1 for convolution, +1 for correlation
inline void filter_row(const double* img, std::size_t rows, std::size_t cols, const double* k,
                       std::size_t krows, std::size_t kcols, const std::size_t* jt,
                       std::size_t i, int sign, double* out) {
  const auto r = static_cast<std::int64_t>(rows);
  const auto ca = static_cast<std::int64_t>(krows / 2);
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0.0;
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(krows); ++a) {
      std::int64_t ii = (static_cast<std::int64_t>(i) + sign * (a - ca)) % r;
      if (ii < 0) ii += r;
      const double* row = img + ii * static_cast<std::int64_t>(cols);
      const double* krow = k + a * static_cast<std::int64_t>(kcols);
      const std::size_t* jrow = jt + j * kcols;
      for (std::size_t b = 0; b < kcols; ++b) s += krow[b] * row[jrow[b]];
    }
    out[i * cols + j] = s;
  }
}

}  // namespace

namespace serial {

void convolve(const double* img, std::size_t rows, std::size_t cols, const double* k,
              std::size_t krows, std::size_t kcols, double* out) {
  const auto jt = column_table(cols, kcols, -1);
  for (std::size_t i = 0; i < rows; ++i) filter_row(img, rows, cols, k, krows, kcols, jt.data(), i, -1, out);
}

void correlate(const double* img, std::size_t rows, std::size_t cols, const double* k,
               std::size_t krows, std::size_t kcols, double* out) {
  const auto jt = column_table(cols, kcols, 1);
  for (std::size_t i = 0; i < rows; ++i) filter_row(img, rows, cols, k, krows, kcols, jt.data(), i, 1, out);
}

void downsample(const double* img, std::size_t rows, std::size_t cols, std::size_t s, double* out) {
  const std::size_t oc = cols / s;
  for (std::size_t i = 0; i < rows / s; ++i)
    for (std::size_t j = 0; j < oc; ++j) out[i * oc + j] = img[(i * s) * cols + j * s];
}

void upsample_zero(const double* img, std::size_t rows, std::size_t cols, std::size_t s,
                   double* out) {
  const std::size_t fc = cols * s;
  for (std::size_t i = 0; i < rows * s; ++i)
    for (std::size_t j = 0; j < fc; ++j)
      out[i * fc + j] = (i % s == 0 && j % s == 0) ? img[(i / s) * cols + j / s] : 0.0;
}

}  // namespace serial

namespace parallel {

void convolve(const double* img, std::size_t rows, std::size_t cols, const double* k,
              std::size_t krows, std::size_t kcols, double* out) {
  const auto jt = column_table(cols, kcols, -1);
  const auto n = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    filter_row(img, rows, cols, k, krows, kcols, jt.data(), static_cast<std::size_t>(i), -1, out);
}

void correlate(const double* img, std::size_t rows, std::size_t cols, const double* k,
               std::size_t krows, std::size_t kcols, double* out) {
  const auto jt = column_table(cols, kcols, 1);
  const auto n = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    filter_row(img, rows, cols, k, krows, kcols, jt.data(), static_cast<std::size_t>(i), 1, out);
}

void downsample(const double* img, std::size_t rows, std::size_t cols, std::size_t s, double* out) {
  const std::size_t oc = cols / s;
  const auto n = static_cast<std::int64_t>(rows / s);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < oc; ++j) out[i * oc + j] = img[(i * s) * cols + j * s];
}

void upsample_zero(const double* img, std::size_t rows, std::size_t cols, std::size_t s,
                   double* out) {
  const std::size_t fc = cols * s;
  const auto n = static_cast<std::int64_t>(rows * s);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < fc; ++j)
      out[i * fc + j] = (i % s == 0 && j % s == 0) ? img[(i / s) * cols + j / s] : 0.0;
}

}  // namespace parallel

}  // namespace minmax::kernels

#pragma once

#include <cstddef>

namespace minmax::kernels {

// Row-major images with circular boundary. The kernel anchor sits at
// (krows / 2, kcols / 2). Every output pixel is computed by the same
// arithmetic in both namespaces, so the results agree bit for bit.

namespace serial {
/// out[i, j] = sum k[a, b] img[i - a + ca, j - b + cb]
void convolve(const double* img, std::size_t rows, std::size_t cols, const double* k,
              std::size_t krows, std::size_t kcols, double* out);
/// out[i, j] = sum k[a, b] img[i + a - ca, j + b - cb]; adjoint of convolve.
void correlate(const double* img, std::size_t rows, std::size_t cols, const double* k,
               std::size_t krows, std::size_t kcols, double* out);
/// Keeps pixels (s i, s j); out is (rows / s) x (cols / s).
void downsample(const double* img, std::size_t rows, std::size_t cols, std::size_t s, double* out);
/// Zero insertion; `rows`, `cols` are the coarse shape, out is (s rows) x (s cols).
void upsample_zero(const double* img, std::size_t rows, std::size_t cols, std::size_t s,
                   double* out);
}  // namespace serial

namespace parallel {
void convolve(const double* img, std::size_t rows, std::size_t cols, const double* k,
              std::size_t krows, std::size_t kcols, double* out);
void correlate(const double* img, std::size_t rows, std::size_t cols, const double* k,
               std::size_t krows, std::size_t kcols, double* out);
void downsample(const double* img, std::size_t rows, std::size_t cols, std::size_t s, double* out);
void upsample_zero(const double* img, std::size_t rows, std::size_t cols, std::size_t s,
                   double* out);
}  // namespace parallel

}  // namespace minmax::kernels

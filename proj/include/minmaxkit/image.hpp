#pragma once

#include <string>

#include "minmaxkit/linops.hpp"
#include "minmaxkit/vec.hpp"

namespace minmax {

/// Grayscale image, row-major, nominal values in [0, 1].
struct Image {
  Shape shape;
  Vec pixels;
};

/// Binary 8-bit PGM (maxval 255); value = byte / 255.
Image read_pgm(const std::string& path);
/// Clamps to [0, 1] and rounds to the nearest byte.
void write_pgm(const Image& img, const std::string& path);

/// One image row per line, comma-separated, shortest round-trip decimals.
Image read_image_csv(const std::string& path);
void write_image_csv(const Image& img, const std::string& path);

/// 10 log10(peak^2 / MSE); +inf for identical images.
double psnr(const Image& reference, const Image& candidate, double peak = 1.0);

/// Pixel replication by an integer factor.
Image upsample_nearest(const Image& img, std::size_t s);

}  // namespace minmax

#include "minmaxkit/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "minmaxkit/error.hpp"
#include "minmaxkit/text.hpp"

namespace minmax {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  for (;;) {
    const int c = in.get();
    require(c != EOF, ErrorCode::kIo, "truncated PGM header");
    if (c == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
}

}  // namespace

Image read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::kIo, "cannot open " + path);
  require(pgm_token(in) == "P5", ErrorCode::kIo, path + ": not a binary PGM");
  Image img;
  img.shape.cols = static_cast<std::size_t>(parse_int(pgm_token(in)));
  img.shape.rows = static_cast<std::size_t>(parse_int(pgm_token(in)));
  require(parse_int(pgm_token(in)) == 255, ErrorCode::kIo, path + ": only maxval 255 is supported");
  std::vector<unsigned char> bytes(img.shape.size());
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(in.gcount() == static_cast<std::streamsize>(bytes.size()), ErrorCode::kIo,
          path + ": truncated pixel data");
  img.pixels.resize(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) img.pixels[i] = bytes[i] / 255.0;
  return img;
}

void write_pgm(const Image& img, const std::string& path) {
  require(img.pixels.size() == img.shape.size(), ErrorCode::kShapeMismatch, "image buffer size");
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::kIo, "cannot write " + path);
  out << "P5\n" << img.shape.cols << ' ' << img.shape.rows << "\n255\n";
  std::vector<unsigned char> bytes(img.pixels.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const double v = std::isnan(img.pixels[i]) ? 0.0 : std::clamp(img.pixels[i], 0.0, 1.0);
    bytes[i] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(out.good(), ErrorCode::kIo, "write failed: " + path);
}

Image read_image_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIo, "cannot open " + path);
  Image img;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (img.shape.rows == 0) img.shape.cols = cells.size();
    require(cells.size() == img.shape.cols, ErrorCode::kShapeMismatch,
            path + ": ragged row " + std::to_string(img.shape.rows + 1));
    for (const auto& c : cells) img.pixels.push_back(parse_double(trim(c)));
    ++img.shape.rows;
  }
  return img;
}

void write_image_csv(const Image& img, const std::string& path) {
  require(img.pixels.size() == img.shape.size(), ErrorCode::kShapeMismatch, "image buffer size");
  std::ofstream out(path);
  require(out.good(), ErrorCode::kIo, "cannot write " + path);
  for (std::size_t i = 0; i < img.shape.rows; ++i) {
    for (std::size_t j = 0; j < img.shape.cols; ++j) {
      if (j) out << ',';
      out << format_double(img.pixels[i * img.shape.cols + j]);
    }
    out << '\n';
  }
}

double psnr(const Image& reference, const Image& candidate, double peak) {
  require(reference.shape == candidate.shape &&
              reference.pixels.size() == candidate.pixels.size(),
          ErrorCode::kShapeMismatch, "PSNR needs images of equal shape");
  require(!reference.pixels.empty(), ErrorCode::kShapeMismatch, "PSNR of empty images");
  const double mse =
      squared_distance(reference.pixels, candidate.pixels) / static_cast<double>(reference.pixels.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

Image upsample_nearest(const Image& img, std::size_t s) {
  Image out;
  out.shape = {img.shape.rows * s, img.shape.cols * s};
  out.pixels.resize(out.shape.size());
  for (std::size_t i = 0; i < out.shape.rows; ++i)
    for (std::size_t j = 0; j < out.shape.cols; ++j)
      out.pixels[i * out.shape.cols + j] = img.pixels[(i / s) * img.shape.cols + j / s];
  return out;
}

}  // namespace minmax

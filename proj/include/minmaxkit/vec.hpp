#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace minmax {

/// Dense vector of 64-bit floats. All problem variables use this type.
using Vec = std::vector<double>;
using VecView = std::span<const double>;

// Reductions are serial on purpose: results must be bit-identical across
// thread counts.
inline double dot(VecView a, VecView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double squared_norm(VecView a) { return dot(a, a); }

inline double norm(VecView a) { return std::sqrt(squared_norm(a)); }

inline double squared_distance(VecView a, VecView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double distance(VecView a, VecView b) { return std::sqrt(squared_distance(a, b)); }

/// a + alpha * b
inline Vec axpy(VecView a, double alpha, VecView b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + alpha * b[i];
  return out;
}

inline Vec sub(VecView a, VecView b) { return axpy(a, -1.0, b); }

inline Vec scaled(double alpha, VecView a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = alpha * a[i];
  return out;
}

inline bool all_finite(VecView a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace minmax

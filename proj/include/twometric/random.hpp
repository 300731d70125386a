#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Core>

namespace twometric {

/// All sampling in the library draws from this engine. The helpers below only
/// consume raw 64-bit words, so a given seed yields the same points on every
/// standard library implementation (the std distributions are not portable).
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

/// Uniform on S^2 via Archimedes' hat-box projection.
inline Eigen::Vector3d uniform_sphere(Rng& rng) {
  const double z = uniform(rng, -1.0, 1.0);
  const double t = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(t), s * std::sin(t), z};
}

/// Uniform in the closed ball of the given radius in R^dim (rejection from the cube).
inline Eigen::VectorXd uniform_ball(Rng& rng, int dim, double radius) {
  Eigen::VectorXd p(dim);
  for (;;) {
    for (int i = 0; i < dim; ++i) p[i] = uniform(rng, -radius, radius);
    if (p.norm() <= radius) return p;
  }
}

}  // namespace twometric

#pragma once

#include <array>
#include <cstdint>
#include <span>

#include <Eigen/Core>

#include "twometric/metric_space.hpp"

namespace twometric {

// ---------------------------------------------------------------------------
// Determinant metric on S^2
// ---------------------------------------------------------------------------

/// Unit vector in R^3; renormalized on construction.
class SpherePoint {
 public:
  explicit SpherePoint(const Eigen::Vector3d& v);
  SpherePoint(double x1, double x2, double x3) : SpherePoint(Eigen::Vector3d(x1, x2, x3)) {}
  const Eigen::Vector3d& vec() const { return v_; }

 private:
  Eigen::Vector3d v_;
};

/// |det[x y z]|. Arguments are evaluated in an order fixed by their antipodal
/// representatives, so the value is exactly invariant under permutations and
/// under negating any argument.
double det_metric(const Eigen::Vector3d& x, const Eigen::Vector3d& y, const Eigen::Vector3d& z);
inline double det_metric(const SpherePoint& x, const SpherePoint& y, const SpherePoint& z) {
  return det_metric(x.vec(), y.vec(), z.vec());
}

/// Flips sign so the first coordinate with |.| > 1e-12 is positive.
Eigen::Vector3d antipodal_canonical(const Eigen::Vector3d& x);

struct CramerResult {
  double alpha = 0, beta = 0, gamma = 0;  // a = alpha x + beta y + gamma z
  double residual = 0;                    // worst deviation of the three ratio identities
  double l1() const;
};

/// Solves a in the basis (x, y, z) and compares |alpha| etc. with the
/// determinant ratios d(a,y,z)/d(x,y,z), d(x,a,z)/d(x,y,z), d(x,y,a)/d(x,y,z).
/// Throws std::domain_error when the basis is singular.
CramerResult cramer_check(const SpherePoint& x, const SpherePoint& y, const SpherePoint& z,
                          const SpherePoint& a);

/// S^2 with the determinant metric. phi(x, y) = |x cross y| is attained at the
/// normalized cross product, which the space exposes as its sup witness.
TwoMetricSpace det_sphere_space();

/// Deterministic, nearly uniform points on S^2 (Fibonacci lattice).
std::vector<Point> fibonacci_sphere(std::size_t count);

// ---------------------------------------------------------------------------
// Euclidean area metric on a ball
// ---------------------------------------------------------------------------

struct BallConfig {
  int dim = 3;
  double diameter = 1.0;  // centered at the origin
  double radius() const { return 0.5 * diameter; }
};

/// Area of the triangle (1/2)|(y - x) ^ (z - x)| in any dimension.
double area_metric(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& z);

bool ball_contains(const BallConfig& ball, const Eigen::VectorXd& p, double slack = 1e-12);

/// Ball of the given diameter with the area metric. The sup witness is the
/// boundary point farthest from the line through the two arguments.
TwoMetricSpace ball_space(const BallConfig& ball = {});

// ---------------------------------------------------------------------------
// South-pole patch of S^2 pulled back to the plane
// ---------------------------------------------------------------------------

struct PatchConfig {
  double r = 0.2;  // radius of V in the plane; must be < 1/4
};

/// Inverse of the vertical projection onto the lower hemisphere.
Eigen::Vector3d patch_lift(const Eigen::Vector2d& x);

/// Euclidean area of the lifted triangle. Throws std::invalid_argument for a
/// point outside the patch.
double patch_metric(const PatchConfig& patch, const Eigen::Vector2d& x, const Eigen::Vector2d& y,
                    const Eigen::Vector2d& z);

/// Flat triangle area in the plane.
double flat_area(const Eigen::Vector2d& x, const Eigen::Vector2d& y, const Eigen::Vector2d& z);

/// |x - y| |x - z| |y - z|
double rho(const Eigen::Vector2d& x, const Eigen::Vector2d& y, const Eigen::Vector2d& z);

TwoMetricSpace patch_space(const PatchConfig& patch = {});

struct ConvexityBoundReport {
  double r = 0;
  std::size_t samples = 0;   // triples drawn
  std::size_t skipped = 0;   // triples with a repeated point
  std::uint64_t seed = 0;
  double upper_ratio = 0;    // max h / (alpha2 + rho)
  double lower_ratio = 0;    // max (alpha2 + rho) / h
  double C = 1;              // max(upper_ratio, lower_ratio, 1)
};

using PlaneTriple = std::array<Eigen::Vector2d, 3>;

/// Empirical constant of the two-sided bound (alpha2 + rho)/C <= h <= C (alpha2 + rho).
ConvexityBoundReport convexity_bound(const PatchConfig& patch, std::span<const PlaneTriple> triples);
ConvexityBoundReport convexity_bound(const PatchConfig& patch, std::size_t samples, std::uint64_t seed);

Eigen::Vector2d uniform_disc(Rng& rng, double radius);

}  // namespace twometric

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "twometric/finite_space.hpp"
#include "twometric/lines.hpp"
#include "twometric/metric_space.hpp"
#include "twometric/spaces.hpp"

namespace twometric {

/// A self-map F with d(Fx, Fy, Fz) <= k d(x, y, z) on its domain.
struct DDecreasingMap {
  std::function<Point(const Point&)> apply;
  double claimed_k = 1.0;
  bool certified = false;  // claimed_k < 1 follows from the construction's hypotheses
  std::function<bool(const Point&)> in_domain;
  std::string description;

  Point operator()(const Point& x) const { return apply(x); }
};

struct SphereContractionParams {
  double k = 0.1;      // vertical squeeze
  double e = 0.5;      // domain U = {|(x1, x2)| >= e}
  double theta = 0.0;  // rotation about the vertical axis
};

/// F = Rz(theta) o G with G(x) = (x1, x2, k x3)/|(x1, x2, k x3)|, restricted
/// to U. Claimed factor k/e^3; not certified when k >= e^3.
DDecreasingMap make_sphere_map(const SphereContractionParams& params);

/// F(x) = M (k x) on the ball, claimed factor k^2 for the area metric.
/// Throws std::invalid_argument unless M is orthogonal and 0 < k < 1.
DDecreasingMap make_linear_map(const Eigen::MatrixXd& M, double k, const BallConfig& ball);

/// Map on a finite space given by its image table. The claimed factor is the
/// exact maximal ratio; certified when it is below 1.
DDecreasingMap make_table_map(const FiniteTwoMetricSpace& space, std::vector<std::size_t> images,
                              std::string description = "table map");

Eigen::Matrix3d rotation_z(double theta);

/// Largest d(Fx,Fy,Fz)/d(x,y,z) over sampled domain triples with d > 0.
/// Exhaustive on finite spaces. Empty when every sampled triple is degenerate.
std::optional<double> measured_contraction_factor(const DDecreasingMap& map, const TwoMetricSpace& space,
                                                  std::size_t samples, std::uint64_t seed);

struct OrbitTrace {
  Point x0;
  std::vector<Point> points;    // x_0 .. x_{len-1}, x_{i+1} = F(x_i)
  std::vector<double> phi_step; // phi(x_i, F(x_i))
  std::size_t requested = 0;
  double kappa = 1.0;                // decay rate used for the check
  std::size_t decay_triples = 0;
  double max_decay_excess = 0.0;     // max of d(x_i,x_j,x_k) - kappa^min(i,j,k)
  bool decay_ok = true;              // excess <= 1e-9; only meaningful when certified
  bool truncated = false;
  std::string diagnostic;
};

/// Iterates n points starting at x0 (which must lie in the domain). An iterate
/// leaving the domain ends the trace with a diagnostic; nothing is projected.
OrbitTrace orbit(const DDecreasingMap& map, const TwoMetricSpace& space, const Point& x0, std::size_t n,
                 const WitnessSet& W, std::uint64_t seed = 0);

struct OutcomeThresholds {
  Thresholds classify;
  double eps_fix = 1e-8;
  double eps_col = 1e-6;
  std::size_t line_samples = 64;
  std::uint64_t seed = 0;
};

enum class OutcomeKind { FixedPoint, FixedLine, Indeterminate };

struct Outcome {
  OutcomeKind kind = OutcomeKind::Indeterminate;
  std::optional<Point> point;
  double residual = 0;                // phi(y, F(y)) for the reported point
  std::optional<Line> line;
  std::vector<Point> line_members;    // sampled members used for the checks
  double invariance_defect = 0;       // max d(F(m), g1, g2)
  bool unique = false;                // images span exactly this line
  double min_member_residual = 0;     // min phi(m, F(m)) over sampled members
  Classification classification;
  std::string evidence;
};

/// Orbit plus classification. FixedPoint needs phi(y, F(y)) <= eps_fix at the
/// Cauchy limit or at a sampled line member; FixedLine needs invariance and
/// uniqueness of the orbit line; anything else is Indeterminate.
Outcome detect_outcome(const DDecreasingMap& map, const TwoMetricSpace& space, const Point& x0,
                       std::size_t n, const WitnessSet& W, const OutcomeThresholds& thresholds = {});

/// Points on the lower half of a sphere of radius 1/2 with the area metric,
/// plus the map exchanging points 0 and 1 and sending the rest to point 0.
struct SwapExample {
  FiniteTwoMetricSpace space;
  DDecreasingMap map;
};
SwapExample convex_swap_example(std::size_t n, std::uint64_t seed);

const char* to_string(OutcomeKind kind);

}  // namespace twometric

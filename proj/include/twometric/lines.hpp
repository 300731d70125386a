#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "twometric/finite_space.hpp"
#include "twometric/metric_space.hpp"

namespace twometric {

/// Two generators plus the membership predicate a -> d(a, g1, g2) <= eps_col.
/// On finite spaces the maximal member set is materialized as indices.
struct Line {
  Point g1, g2;
  double eps_col = 0.0;
  std::optional<std::vector<std::size_t>> members;

  double defect(const TwoMetricSpace& space, const Point& a) const { return space.d(a, g1, g2); }
  bool contains(const TwoMetricSpace& space, const Point& a) const { return defect(space, a) <= eps_col; }
};

class LineUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

bool is_colinear(const TwoMetricSpace& space, const Point& x, const Point& y, const Point& z,
                 double eps_col);

enum class ProbeResult { Held, Violated, Inconclusive, Vacuous };

struct TransitivityProbe {
  ProbeResult result = ProbeResult::Inconclusive;
  double phi_yz = 0;      // witness-set estimate of phi(y, z)
  double tolerance = 0;   // 2 eps_col / phi(y, z)
  double defect_xyw = 0;  // d(x, y, w)
  double defect_xzw = 0;  // d(x, z, w)
};

/// Colinear (x,y,z) and (y,z,w) with y, z apart imply colinear (x,y,w) and
/// (x,z,w). Inconclusive when phi(y,z) < delta, vacuous when a premise fails.
TransitivityProbe transitivity_probe(const TwoMetricSpace& space, const Point& x, const Point& y,
                                     const Point& z, const Point& w, double eps_col,
                                     const WitnessSet& W, double delta);

/// Throws LineUndefined when phi(x, y) <= delta.
Line line_through(const TwoMetricSpace& space, const Point& x, const Point& y, const WitnessSet& W,
                  double eps_col, double delta);

/// Materializes {a : d(a, i, j) <= eps_col} and checks that every internal
/// triple is colinear (throws std::runtime_error otherwise).
Line line_through(const FiniteTwoMetricSpace& space, std::size_t i, std::size_t j,
                  double eps_col = 0.0, double delta = 0.0);

/// All maximal colinear subsets, sorted by member list.
std::vector<Line> enumerate_lines(const FiniteTwoMetricSpace& space, double eps_col = 0.0);

struct LimEstimate {
  Point y;
  std::size_t tail_start = 0;
  double residual = 0;  // max over tail_start <= i < j of d(y, x_i, x_j)
};

LimEstimate lim_residual(const TwoMetricSpace& space, const Point& y, std::span<const Point> seq,
                         std::size_t tail_start);

struct Thresholds {
  double eps_lim = 1e-6;
  double eps_cauchy = 1e-8;
  double eps_tri = 1e-8;
  double delta = 1e-6;
  double tail_fraction = 0.5;  // tail = last half
  std::size_t min_length = 50;
};

/// Tolerance for d(y, y', y'') among three LIM passers of a non-Cauchy tail
/// with anti-Cauchy gap eps0: 6 eps_lim (1 + 1/eps0).
double lim_colinearity_bound(double eps_lim, double eps0);

/// Residual bound for a point colinear (within eps_col) with two passers y, y'
/// with d(y, y', z) = eps1 for some z: eps_lim + 2 (eps_col + D) / eps1,
/// where D = 2 eps_lim (1 + 1/eps0).
double lim_extension_threshold(double eps_lim, double eps0, double eps1, double eps_col);

enum class ClassTag { NoPoint, UniquePoint, CauchySequence, LineCase };

struct Classification {
  ClassTag tag = ClassTag::NoPoint;
  std::optional<Point> point;  // UniquePoint passer or Cauchy limit estimate
  std::optional<Line> line;
  double cauchy_modulus = 0;     // max phi over tail pairs
  double tri_cauchy_modulus = 0; // max d over tail triples
  std::size_t tail_start = 0;
  std::size_t candidates = 0;
  Thresholds thresholds;
  std::vector<Point> passers;
  std::vector<double> passer_residuals;
  double membership_tolerance = 0;  // used to verify passers lie on the line
  bool low_confidence = false;
};

/// Classifies a finite sequence: Cauchy if the tail Cauchy modulus is within
/// eps_cauchy; otherwise the LIM set over W and the tail points decides
/// between a line, a unique point, or no point.
Classification classify(const TwoMetricSpace& space, std::span<const Point> seq, const WitnessSet& W,
                        const Thresholds& thresholds = {});

const char* to_string(ClassTag tag);
const char* to_string(ProbeResult r);

}  // namespace twometric

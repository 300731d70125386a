#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "twometric/random.hpp"

namespace twometric {

/// A point of any supported domain. Continuous spaces store coordinates;
/// finite spaces store a single coordinate holding the point index.
using Point = Eigen::VectorXd;

struct DomainInfo {
  std::string name;
  int dimension = 0;                       // coordinates per point
  std::optional<std::size_t> cardinality;  // set for finite spaces
};

/// A ternary function d on a point domain plus a seeded sampler.
///
/// The optional hooks let concrete spaces expose structure the generic
/// machinery can use:
///  - canonicalizer: representative of a point's equivalence class
///    (antipodal identification on the sphere);
///  - sup witness: a point z maximizing d(x, y, z), when one is known in
///    closed form; eval_phi adds it to every witness set;
///  - grid: deterministic witness points of a requested size;
///  - line sampler: random members of the line through two points;
///  - points: full enumeration (finite spaces).
class TwoMetricSpace {
 public:
  using Metric = std::function<double(const Point&, const Point&, const Point&)>;
  using Sampler = std::function<Point(Rng&)>;
  using Canonicalizer = std::function<Point(const Point&)>;
  using SupWitness = std::function<std::optional<Point>(const Point&, const Point&)>;
  using Grid = std::function<std::vector<Point>(std::size_t)>;
  using LineSampler = std::function<Point(const Point&, const Point&, Rng&)>;

  TwoMetricSpace(DomainInfo domain, Metric metric, Sampler sampler);

  TwoMetricSpace& with_canonicalizer(Canonicalizer c);
  TwoMetricSpace& with_sup_witness(SupWitness s);
  TwoMetricSpace& with_grid(Grid g);
  TwoMetricSpace& with_line_sampler(LineSampler s);
  TwoMetricSpace& with_points(std::vector<Point> pts);

  double d(const Point& x, const Point& y, const Point& z) const { return metric_(x, y, z); }
  Point sample(Rng& rng) const { return sampler_(rng); }
  Point canonical(const Point& x) const { return canon_ ? canon_(x) : x; }

  const DomainInfo& domain() const { return domain_; }
  bool is_finite() const { return domain_.cardinality.has_value(); }

  std::optional<Point> sup_witness(const Point& x, const Point& y) const;
  bool has_grid() const { return static_cast<bool>(grid_); }
  std::vector<Point> grid(std::size_t count) const;
  bool has_line_sampler() const { return static_cast<bool>(line_sampler_); }
  Point sample_on_line(const Point& g1, const Point& g2, Rng& rng) const;
  const std::vector<Point>& points() const { return points_; }

 private:
  DomainInfo domain_;
  Metric metric_;
  Sampler sampler_;
  Canonicalizer canon_;
  SupWitness sup_;
  Grid grid_;
  LineSampler line_sampler_;
  std::vector<Point> points_;
};

enum class WitnessKind { Grid, Sample };

/// Finite stand-in for the supremum in the associated distance.
struct WitnessSet {
  std::vector<Point> points;
  WitnessKind kind = WitnessKind::Sample;
  std::size_t count = 0;
  std::uint64_t seed = 0;

  /// Deterministic in (kind, count, seed). Finite spaces always yield all
  /// points regardless of count.
  static WitnessSet make(const TwoMetricSpace& space, WitnessKind kind, std::size_t count,
                         std::uint64_t seed = 0);
};

/// phi(x, y) approximated as the max of d(x, y, w) over W and the space's
/// closed-form maximizer when it has one. The pair is evaluated in a fixed
/// order so the result is exactly symmetric.
/// Throws std::invalid_argument on an empty witness set.
double eval_phi(const TwoMetricSpace& space, const Point& x, const Point& y, const WitnessSet& W);

/// Same as eval_phi but additionally treats `extra` as witnesses.
double eval_phi_with(const TwoMetricSpace& space, const Point& x, const Point& y,
                     const WitnessSet& W, std::initializer_list<const Point*> extra);

/// Empirical witness truncation error: the largest increase of phi over the
/// sampled pairs when the witness set is doubled (same kind, seed + 1 for the
/// extra half). Zero on finite spaces.
double witness_error_estimate(const TwoMetricSpace& space, const WitnessSet& W, std::size_t pairs,
                              std::uint64_t seed);

/// Strict lexicographic order on coordinates; used to fix evaluation order.
bool lex_less(const Point& a, const Point& b);

}  // namespace twometric

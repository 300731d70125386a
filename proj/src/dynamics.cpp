#include "twometric/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace twometric {

const char* to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::FixedPoint: return "FixedPoint";
    case OutcomeKind::FixedLine: return "FixedLine";
    case OutcomeKind::Indeterminate: return "Indeterminate";
  }
  return "?";
}

Eigen::Matrix3d rotation_z(double theta) {
  Eigen::Matrix3d R;
  const double c = std::cos(theta), s = std::sin(theta);
  R << c, -s, 0, s, c, 0, 0, 0, 1;
  return R;
}

DDecreasingMap make_sphere_map(const SphereContractionParams& p) {
  if (!(p.k > 0.0 && p.k < 1.0)) throw std::invalid_argument("sphere map: k must lie in (0, 1)");
  if (!(p.e > 0.0 && p.e < 1.0)) throw std::invalid_argument("sphere map: e must lie in (0, 1)");
  const Eigen::Matrix3d R = rotation_z(p.theta);
  const double k = p.k, e = p.e;

  DDecreasingMap map;
  map.apply = [R, k](const Point& x) -> Point {
    Eigen::Vector3d g(x[0], x[1], k * x[2]);
    return Point(R * (g / g.norm()));
  };
  map.in_domain = [e](const Point& x) { return std::hypot(x[0], x[1]) >= e; };
  map.claimed_k = k / (e * e * e);
  map.certified = map.claimed_k < 1.0;
  map.description = "sphere map k=" + std::to_string(k) + " e=" + std::to_string(e) +
                    " theta=" + std::to_string(p.theta);
  return map;
}

DDecreasingMap make_linear_map(const Eigen::MatrixXd& M, double k, const BallConfig& ball) {
  if (M.rows() != ball.dim || M.cols() != ball.dim)
    throw std::invalid_argument("linear map: matrix size does not match the ball dimension");
  const double orth = (M.transpose() * M - Eigen::MatrixXd::Identity(ball.dim, ball.dim)).norm();
  if (orth > 1e-12) throw std::invalid_argument("linear map: M is not orthogonal");
  if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("linear map: k must lie in (0, 1)");

  DDecreasingMap map;
  map.apply = [M, k](const Point& x) -> Point { return M * (k * x); };
  map.in_domain = [ball](const Point& x) { return ball_contains(ball, x); };
  map.claimed_k = k * k;
  map.certified = true;
  map.description = "linear map k=" + std::to_string(k);
  return map;
}

DDecreasingMap make_table_map(const FiniteTwoMetricSpace& space, std::vector<std::size_t> images,
                              std::string description) {
  if (images.size() != space.size()) throw std::invalid_argument("table map: one image per point required");
  for (std::size_t v : images)
    if (v >= space.size()) throw std::invalid_argument("table map: image index out of range");
  const SurjectivityCheck check = surjective_contraction_check(space, images);
  auto table = std::make_shared<const std::vector<std::size_t>>(std::move(images));
  const std::size_t n = space.size();

  DDecreasingMap map;
  map.apply = [table](const Point& x) { return index_point((*table)[point_index(x)]); };
  map.in_domain = [n](const Point& x) { return x.size() == 1 && point_index(x) < n; };
  map.claimed_k = check.measured_k.value_or(0.0);
  map.certified = map.claimed_k < 1.0;
  map.description = std::move(description);
  return map;
}

namespace {

Point sample_in_domain(const DDecreasingMap& map, const TwoMetricSpace& space, Rng& rng) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Point p = space.sample(rng);
    if (map.in_domain(p)) return p;
  }
  throw std::runtime_error("could not sample a point in the map's domain");
}

double ratio_or_nan(const DDecreasingMap& map, const TwoMetricSpace& space, const Point& x, const Point& y,
                    const Point& z) {
  const double d = space.d(x, y, z);
  if (!(d > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return space.d(map(x), map(y), map(z)) / d;
}

}  // namespace

std::optional<double> measured_contraction_factor(const DDecreasingMap& map, const TwoMetricSpace& space,
                                                  std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("measured_contraction_factor: samples must be >= 1");
  std::optional<double> best;
  auto take = [&](double r) {
    if (!std::isnan(r)) best = std::max(best.value_or(r), r);
  };
  if (space.is_finite()) {
    std::vector<Point> pts;
    for (const auto& p : space.points())
      if (map.in_domain(p)) pts.push_back(p);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        for (std::size_t k = j + 1; k < pts.size(); ++k) take(ratio_or_nan(map, space, pts[i], pts[j], pts[k]));
    return best;
  }
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const Point x = sample_in_domain(map, space, rng);
    const Point y = sample_in_domain(map, space, rng);
    const Point z = sample_in_domain(map, space, rng);
    take(ratio_or_nan(map, space, x, y, z));
  }
  return best;
}

OrbitTrace orbit(const DDecreasingMap& map, const TwoMetricSpace& space, const Point& x0, std::size_t n,
                 const WitnessSet& W, std::uint64_t seed) {
  if (!map.in_domain(x0)) throw std::invalid_argument("orbit: start point outside the map's domain");
  OrbitTrace t;
  t.x0 = x0;
  t.requested = n;
  t.kappa = map.claimed_k;
  if (n == 0) return t;

  t.points.push_back(x0);
  while (t.points.size() < n) {
    Point next = map(t.points.back());
    if (!map.in_domain(next) || !next.allFinite()) {
      t.truncated = true;
      t.diagnostic = "iterate " + std::to_string(t.points.size()) + " left the domain";
      break;
    }
    t.points.push_back(std::move(next));
  }
  for (const auto& p : t.points) t.phi_step.push_back(eval_phi(space, p, map(p), W));

  // Decay check d(x_i, x_j, x_k) <= kappa^min(i, j, k), exhaustive when small.
  const std::size_t m = t.points.size();
  auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
    const double bound = std::pow(t.kappa, static_cast<double>(std::min({i, j, k})));
    t.max_decay_excess =
        std::max(t.max_decay_excess, space.d(t.points[i], t.points[j], t.points[k]) - bound);
    ++t.decay_triples;
  };
  if (m >= 3) {
    const double total = static_cast<double>(m) * (m - 1) * (m - 2) / 6.0;
    if (total <= 2e5) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
          for (std::size_t k = j + 1; k < m; ++k) check(i, j, k);
    } else {
      Rng rng(seed);
      for (int s = 0; s < 200000; ++s) check(uniform_index(rng, m), uniform_index(rng, m), uniform_index(rng, m));
    }
  }
  t.decay_ok = t.max_decay_excess <= 1e-9;
  return t;
}

namespace {

std::vector<Point> sample_line_members(const TwoMetricSpace& space, const Line& line,
                                       const Classification& cls, std::size_t count, std::uint64_t seed) {
  std::vector<Point> out{line.g1, line.g2};
  if (line.members) {
    for (std::size_t i : *line.members) out.push_back(index_point(i));
  } else if (space.has_line_sampler()) {
    Rng rng(seed);
    for (std::size_t s = 0; s < count; ++s) out.push_back(space.sample_on_line(line.g1, line.g2, rng));
  } else {
    for (const auto& p : cls.passers) out.push_back(p);
  }
  return out;
}

}  // namespace

Outcome detect_outcome(const DDecreasingMap& map, const TwoMetricSpace& space, const Point& x0, std::size_t n,
                       const WitnessSet& W, const OutcomeThresholds& th) {
  Outcome out;
  const OrbitTrace trace = orbit(map, space, x0, n, W, th.seed);
  if (trace.points.size() < std::max<std::size_t>(th.classify.min_length, 3)) {
    out.evidence = "orbit too short to classify: " + trace.diagnostic;
    return out;
  }
  out.classification = classify(space, trace.points, W, th.classify);
  const Classification& cls = out.classification;

  if (cls.tag == ClassTag::CauchySequence) {
    const Point& y = *cls.point;
    out.point = y;
    out.residual = eval_phi(space, y, map(y), W);
    if (out.residual <= th.eps_fix) {
      out.kind = OutcomeKind::FixedPoint;
      out.evidence = "Cauchy orbit; limit estimate is fixed";
    } else {
      out.evidence = "Cauchy orbit but phi(y, F(y)) exceeds eps_fix";
    }
    return out;
  }
  if (cls.tag != ClassTag::LineCase) {
    out.evidence = std::string("classification ") + to_string(cls.tag) + " gives neither a point nor a line";
    return out;
  }

  Line line = *cls.line;
  line.eps_col = th.eps_col;
  out.line_members = sample_line_members(space, line, cls, th.line_samples, th.seed);
  std::vector<Point> images;
  out.min_member_residual = std::numeric_limits<double>::infinity();
  std::size_t argmin = 0;
  for (std::size_t i = 0; i < out.line_members.size(); ++i) {
    const Point& m = out.line_members[i];
    Point fm = map(m);
    out.invariance_defect = std::max(out.invariance_defect, line.defect(space, fm));
    const double r = eval_phi(space, m, fm, W);
    if (r < out.min_member_residual) {
      out.min_member_residual = r;
      argmin = i;
    }
    images.push_back(std::move(fm));
  }

  // Two images far apart must span the same line.
  double best = -1.0;
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      const double p = eval_phi(space, images[i], images[j], W);
      if (p > best) {
        best = p;
        bi = i;
        bj = j;
      }
    }
  if (best > th.classify.delta) {
    const Line image_line{images[bi], images[bj], th.eps_col, std::nullopt};
    out.unique = image_line.contains(space, line.g1) && image_line.contains(space, line.g2);
  }
  out.line = line;

  const bool invariant = out.invariance_defect <= th.eps_col;
  if (out.min_member_residual <= th.eps_fix) {
    out.kind = OutcomeKind::FixedPoint;
    out.point = out.line_members[argmin];
    out.residual = out.min_member_residual;
    out.evidence = "a sampled member of the orbit line is fixed; line attached";
  } else if (invariant && out.unique) {
    out.kind = OutcomeKind::FixedLine;
    out.evidence = "orbit line is invariant and its image spans no other line";
  } else {
    out.evidence = invariant ? "image points do not determine the orbit line" : "orbit line is not invariant";
  }
  return out;
}

SwapExample convex_swap_example(std::size_t n, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("swap example needs at least 3 points");
  Rng rng(seed);
  std::vector<Point> pts;
  while (pts.size() < n) {
    Eigen::Vector3d v = uniform_sphere(rng);
    if (v.z() > -0.2) continue;
    pts.emplace_back(Point(0.5 * v));
  }
  const TwoMetricSpace ambient(DomainInfo{"R3", 3, std::nullopt},
                               [](const Point& x, const Point& y, const Point& z) { return area_metric(x, y, z); },
                               [](Rng& r) { return Point(uniform_ball(r, 3, 0.5)); });
  FiniteTwoMetricSpace space = FiniteTwoMetricSpace::tabulate(ambient, pts);
  std::vector<std::size_t> images(n, 0);
  images[0] = 1;
  DDecreasingMap map = make_table_map(space, std::move(images), "swap of points 0 and 1");
  return SwapExample{std::move(space), std::move(map)};
}

}  // namespace twometric

#include "twometric/metric_space.hpp"

#include <algorithm>
#include <stdexcept>

namespace twometric {

TwoMetricSpace::TwoMetricSpace(DomainInfo domain, Metric metric, Sampler sampler)
    : domain_(std::move(domain)), metric_(std::move(metric)), sampler_(std::move(sampler)) {
  if (!metric_ || !sampler_) throw std::invalid_argument("TwoMetricSpace: metric and sampler are required");
}

TwoMetricSpace& TwoMetricSpace::with_canonicalizer(Canonicalizer c) {
  canon_ = std::move(c);
  return *this;
}

TwoMetricSpace& TwoMetricSpace::with_sup_witness(SupWitness s) {
  sup_ = std::move(s);
  return *this;
}

TwoMetricSpace& TwoMetricSpace::with_grid(Grid g) {
  grid_ = std::move(g);
  return *this;
}

TwoMetricSpace& TwoMetricSpace::with_line_sampler(LineSampler s) {
  line_sampler_ = std::move(s);
  return *this;
}

TwoMetricSpace& TwoMetricSpace::with_points(std::vector<Point> pts) {
  points_ = std::move(pts);
  return *this;
}

std::optional<Point> TwoMetricSpace::sup_witness(const Point& x, const Point& y) const {
  if (!sup_) return std::nullopt;
  return sup_(x, y);
}

std::vector<Point> TwoMetricSpace::grid(std::size_t count) const {
  if (!grid_) throw std::logic_error("space '" + domain_.name + "' has no grid generator");
  return grid_(count);
}

Point TwoMetricSpace::sample_on_line(const Point& g1, const Point& g2, Rng& rng) const {
  if (!line_sampler_) throw std::logic_error("space '" + domain_.name + "' has no line sampler");
  return line_sampler_(g1, g2, rng);
}

WitnessSet WitnessSet::make(const TwoMetricSpace& space, WitnessKind kind, std::size_t count,
                            std::uint64_t seed) {
  WitnessSet w;
  w.kind = kind;
  w.count = count;
  w.seed = seed;
  if (space.is_finite()) {
    w.points = space.points();
    w.count = w.points.size();
    return w;
  }
  if (count == 0) throw std::invalid_argument("witness set must be nonempty");
  if (kind == WitnessKind::Grid) {
    w.points = space.grid(count);
  } else {
    Rng rng(seed);
    w.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) w.points.push_back(space.sample(rng));
  }
  return w;
}

bool lex_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

double eval_phi_with(const TwoMetricSpace& space, const Point& x, const Point& y,
                     const WitnessSet& W, std::initializer_list<const Point*> extra) {
  if (W.points.empty()) throw std::invalid_argument("eval_phi: empty witness set");
  const Point& a = lex_less(y, x) ? y : x;
  const Point& b = lex_less(y, x) ? x : y;
  double best = 0.0;
  for (const auto& w : W.points) best = std::max(best, space.d(a, b, w));
  for (const Point* e : extra) best = std::max(best, space.d(a, b, *e));
  if (auto z = space.sup_witness(a, b)) best = std::max(best, space.d(a, b, *z));
  return best;
}

double eval_phi(const TwoMetricSpace& space, const Point& x, const Point& y, const WitnessSet& W) {
  return eval_phi_with(space, x, y, W, {});
}

double witness_error_estimate(const TwoMetricSpace& space, const WitnessSet& W, std::size_t pairs,
                              std::uint64_t seed) {
  if (space.is_finite()) return 0.0;
  WitnessSet doubled = W;
  if (W.kind == WitnessKind::Grid && space.has_grid()) {
    doubled.points = space.grid(2 * W.points.size());
  } else {
    Rng extra(W.seed + 1);
    for (std::size_t i = 0; i < W.points.size(); ++i) doubled.points.push_back(space.sample(extra));
  }
  doubled.count = doubled.points.size();

  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const Point x = space.sample(rng);
    const Point y = space.sample(rng);
    worst = std::max(worst, eval_phi(space, x, y, doubled) - eval_phi(space, x, y, W));
  }
  return worst;
}

}  // namespace twometric

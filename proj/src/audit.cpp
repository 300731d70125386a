#include "twometric/audit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace twometric {

const AxiomRecord& AxiomReport::at(std::string_view axiom) const {
  for (const auto& r : records)
    if (r.axiom == axiom) return r;
  throw std::out_of_range("no audit record for axiom " + std::string(axiom));
}

bool AxiomReport::all_hold(bool include_nondegeneracy) const {
  return std::all_of(records.begin(), records.end(), [&](const AxiomRecord& r) {
    return (!include_nondegeneracy && r.axiom == "N") || r.max_violation <= tolerance;
  });
}

namespace {

using Tuple = std::vector<Point>;

std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > cap / std::max<std::size_t>(base, 1)) return cap + 1;
    out *= base;
  }
  return out;
}

// Draws every tuple up front so evaluation order cannot affect the stream.
std::vector<Tuple> draw_tuples(const TwoMetricSpace& space, std::size_t arity, std::size_t count,
                               Rng& rng, std::size_t exhaustive_limit) {
  std::vector<Tuple> out;
  if (space.is_finite()) {
    const std::size_t n = *space.domain().cardinality;
    const std::size_t total = checked_power(n, arity, exhaustive_limit);
    if (total <= exhaustive_limit) {
      out.reserve(total);
      std::vector<std::size_t> idx(arity, 0);
      for (std::size_t t = 0; t < total; ++t) {
        Tuple tup;
        for (std::size_t a : idx) tup.push_back(space.points()[a]);
        out.push_back(std::move(tup));
        for (std::size_t pos = 0; pos < arity; ++pos) {
          if (++idx[pos] < n) break;
          idx[pos] = 0;
        }
      }
      return out;
    }
  }
  out.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    Tuple tup;
    for (std::size_t a = 0; a < arity; ++a) tup.push_back(space.sample(rng));
    out.push_back(std::move(tup));
  }
  return out;
}

void score(AxiomRecord& rec, double violation, std::initializer_list<const Point*> tuple) {
  ++rec.samples;
  const double v = std::max(0.0, violation);
  if (std::isnan(violation) || v > rec.max_violation) {
    rec.max_violation = std::isnan(violation) ? INFINITY : v;
    rec.witness.clear();
    for (const Point* p : tuple) rec.witness.push_back(*p);
  }
}

bool same_point(const Point& a, const Point& b) { return a.size() == b.size() && a == b; }

}  // namespace

AxiomReport audit(const TwoMetricSpace& space, const AuditConfig& config, const WitnessSet& W) {
  if (config.triples == 0 || config.quadruples == 0 || config.quintuples == 0)
    throw std::invalid_argument("audit: sample counts must be >= 1");
  if (W.points.empty()) throw std::invalid_argument("audit: empty witness set");

  Rng rng(config.seed);
  const auto pairs = draw_tuples(space, 2, config.triples, rng, config.exhaustive_limit);
  const auto triples = draw_tuples(space, 3, config.triples, rng, config.exhaustive_limit);
  const auto quads = draw_tuples(space, 4, config.quadruples, rng, config.exhaustive_limit);
  const auto quints = draw_tuples(space, 5, config.quintuples, rng, config.exhaustive_limit);

  auto record = [](const char* name) {
    AxiomRecord r;
    r.axiom = name;
    return r;
  };
  AxiomRecord sym = record("Sym"), tetr = record("Tetr"), zero = record("Z"), nondeg = record("N"),
              bound = record("B"), pos = record("Pos"), trans = record("Trans"), at = record("AT"),
              cost = record("CostTriangle"), lip = record("DphiLipschitz");

  for (const auto& t : pairs) {
    const Point &a = t[0], &b = t[1];
    const double z = std::max({std::abs(space.d(a, b, b)), std::abs(space.d(b, a, b)),
                               std::abs(space.d(b, b, a))});
    score(zero, z, {&a, &b, &b});
    if (!same_point(a, b)) {
      const double phi = eval_phi(space, a, b, W);
      score(nondeg, phi <= config.tolerance ? 1.0 : 0.0, {&a, &b});
    }
  }

  for (const auto& t : triples) {
    const Point &x = t[0], &y = t[1], &z = t[2];
    const double d = space.d(x, y, z);
    if (!space.is_finite()) {
      const std::array<double, 5> perms{space.d(x, z, y), space.d(y, x, z), space.d(y, z, x),
                                        space.d(z, x, y), space.d(z, y, x)};
      double dev = 0.0;
      for (double p : perms) dev = std::max(dev, std::abs(p - d));
      score(sym, dev, {&x, &y, &z});
    }
    score(bound, d - 1.0, {&x, &y, &z});
    score(pos, -d, {&x, &y, &z});

    const double pxy = eval_phi_with(space, x, y, W, {&x, &y, &z});
    const double pxz = eval_phi_with(space, x, z, W, {&x, &y, &z});
    const double pzy = eval_phi_with(space, z, y, W, {&x, &y, &z});
    score(cost, pxy - pxz - pzy - d, {&x, &y, &z});
    score(at, pxy - pxz - 2.0 * pzy, {&x, &y, &z});
  }
  if (space.is_finite()) {
    sym.exact = true;
    sym.samples = triples.size();
  }

  for (const auto& t : quads) {
    const Point &a = t[0], &b = t[1], &c = t[2], &x = t[3];
    score(tetr, space.d(a, b, c) - space.d(a, b, x) - space.d(b, c, x) - space.d(a, c, x),
          {&a, &b, &c, &x});
    // (a, b, x, y) reading of the same draw for the Lipschitz bound
    const Point& y = c;
    const double phi = eval_phi_with(space, x, y, W, {&a, &b, &x, &y});
    score(lip, std::abs(space.d(a, b, x) - space.d(a, b, y)) - 2.0 * phi, {&a, &b, &x, &y});
  }

  for (const auto& t : quints) {
    const Point &a = t[0], &b = t[1], &c = t[2], &x = t[3], &y = t[4];
    score(trans, space.d(a, b, x) * space.d(c, x, y) - space.d(a, x, y) - space.d(b, x, y),
          {&a, &b, &c, &x, &y});
  }

  AxiomReport report;
  report.seed = config.seed;
  report.tolerance = config.tolerance;
  report.records = {sym, tetr, zero, nondeg, bound, pos, trans, at, cost, lip};
  report.witness_error =
      witness_error_estimate(space, W, config.witness_error_pairs, config.seed ^ 0x9e3779b97f4a7c15ULL);
  return report;
}

}  // namespace twometric

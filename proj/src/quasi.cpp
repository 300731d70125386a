#include "twometric/quasi.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "twometric/spaces.hpp"

namespace twometric {

QuasiSpace interval_space(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("interval_space: need lo < hi");
  QuasiSpace s;
  s.name = "interval";
  s.phi = [](const Point& x, const Point& y) { return std::abs(x[0] - y[0]); };
  s.C = 1.0;
  s.strictly_reflexive = true;
  s.sampler = [lo, hi](Rng& rng) {
    Point p(1);
    p[0] = uniform(rng, lo, hi);
    return p;
  };
  return s;
}

QuasiSpace associated_quasi_space(const FiniteTwoMetricSpace& space) {
  auto table = std::make_shared<const FiniteTwoMetricSpace>(space);
  QuasiSpace s;
  s.name = "finite-associated";
  s.phi = [table](const Point& x, const Point& y) { return table->phi(point_index(x), point_index(y)); };
  s.C = 2.0;
  const std::size_t n = space.size();
  s.sampler = [n](Rng& rng) { return index_point(uniform_index(rng, n)); };
  for (std::size_t i = 0; i < n; ++i) s.points.push_back(index_point(i));
  return s;
}

QuasiSpace associated_quasi_space(const TwoMetricSpace& space, const WitnessSet& W) {
  auto sp = std::make_shared<const TwoMetricSpace>(space);
  auto w = std::make_shared<const WitnessSet>(W);
  QuasiSpace s;
  s.name = space.domain().name + "-associated";
  s.phi = [sp, w](const Point& x, const Point& y) { return eval_phi(*sp, x, y, *w); };
  s.C = 2.0;
  s.sampler = [sp](Rng& rng) { return sp->sample(rng); };
  if (space.is_finite()) s.points = space.points();
  return s;
}

std::size_t minimal_power(double k, double C) {
  if (!(k >= 0.0 && k < 1.0)) throw std::invalid_argument("minimal_power: need 0 <= k < 1");
  if (!(C >= 1.0)) throw std::invalid_argument("minimal_power: need C >= 1");
  std::size_t a = 1;
  double p = k;
  while (!(p * C < 1.0)) {
    p *= k;
    ++a;
  }
  return a;
}

namespace {

constexpr std::size_t kExhaustivePairs = 250000;
constexpr std::size_t kExhaustiveTriples = 250000;

template <class Visit>
void for_each_pair(const QuasiSpace& s, std::size_t samples, std::uint64_t seed, Visit visit) {
  if (!s.points.empty() && s.points.size() * s.points.size() <= kExhaustivePairs) {
    for (const auto& x : s.points)
      for (const auto& y : s.points) visit(x, y);
    return;
  }
  Rng rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const Point x = s.sampler(rng);
    const Point y = s.sampler(rng);
    visit(x, y);
  }
}

template <class Visit>
void for_each_triple(const QuasiSpace& s, std::size_t samples, std::uint64_t seed, Visit visit) {
  const std::size_t n = s.points.size();
  if (n > 0 && n * n * n <= kExhaustiveTriples) {
    for (const auto& x : s.points)
      for (const auto& y : s.points)
        for (const auto& z : s.points) visit(x, y, z);
    return;
  }
  Rng rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const Point x = s.sampler(rng);
    const Point y = s.sampler(rng);
    const Point z = s.sampler(rng);
    visit(x, y, z);
  }
}

std::optional<double> measure_k(const QuasiSpace& s, const SelfMap& F, double k, const BanachOptions& opt) {
  std::optional<double> best;
  for_each_pair(s, opt.contraction_samples, opt.seed, [&](const Point& x, const Point& y) {
    const double before = s.phi(x, y);
    const double after = s.phi(F(x), F(y));
    if (before > 0.0) {
      const double r = after / before;
      best = std::max(best.value_or(r), r);
      if (after > k * before + opt.slack)
        throw ContractionViolation("phi(Fx, Fy) exceeds k phi(x, y)", {x, y}, r);
    } else if (after > opt.slack) {
      throw ContractionViolation("phi(x, y) = 0 but phi(Fx, Fy) > 0", {x, y}, INFINITY);
    }
  });
  return best;
}

void iterate(const QuasiSpace& s, const SelfMap& G, const Point& x0, std::size_t n, const BanachOptions& opt,
             BanachRun& run) {
  run.x0 = x0;
  run.iterates = {x0};
  Point x = x0;
  for (std::size_t step = 0;; ++step) {
    Point gx = G(x);
    run.residual = s.phi(x, gx);
    if (run.residual <= opt.tolerance) {
      run.converged = true;
      break;
    }
    if (step == n) break;
    x = std::move(gx);
    run.iterates.push_back(x);
  }
  run.steps = run.iterates.size() - 1;
  run.fixed_point = run.iterates.back();
}

// bound(n, m) supplied by the caller; excess is measured on every recorded pair.
template <class Bound>
void check_tail(const QuasiSpace& s, BanachRun& run, const BanachOptions& opt, Bound bound) {
  const auto& xs = run.iterates;
  run.worst_tail_excess = -INFINITY;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      run.worst_tail_excess = std::max(run.worst_tail_excess, s.phi(xs[i], xs[j]) - bound(i, j));
  if (xs.size() < 2) run.worst_tail_excess = 0.0;
  run.tail_bound_ok = run.worst_tail_excess <= opt.slack;
}

}  // namespace

BanachRun banach_direct(const QuasiSpace& s, const SelfMap& F, const Point& x0, double k, std::size_t n,
                        const BanachOptions& opt) {
  if (!(s.C >= 1.0)) throw std::invalid_argument("banach_direct: need C >= 1");
  if (!(k >= 0.0)) throw std::invalid_argument("banach_direct: need k >= 0");
  if (!(k * s.C < 1.0)) throw std::invalid_argument("banach_direct: k >= 1/C; use banach_power");

  BanachRun run;
  run.solver = "direct";
  run.k_claimed = k;
  run.C = s.C;
  run.k_measured = measure_k(s, F, k, opt);
  iterate(s, F, x0, n, opt, run);
  run.f_residual = run.residual;

  const double phi01 = run.iterates.size() > 1 ? s.phi(run.iterates[0], run.iterates[1]) : 0.0;
  const double denom = 1.0 - s.C * k;
  run.tail_bound = std::pow(k, static_cast<double>(run.steps)) / denom * phi01;
  check_tail(s, run, opt, [&](std::size_t i, std::size_t) { return std::pow(k, static_cast<double>(i)) / denom * phi01; });
  return run;
}

BanachRun banach_power(const QuasiSpace& s, const SelfMap& F, const Point& x0, double k, std::size_t n,
                       const BanachOptions& opt) {
  const std::size_t a = minimal_power(k, s.C);
  const auto kF = measure_k(s, F, k, opt);
  const SelfMap G = [F, a](const Point& x) {
    Point y = x;
    for (std::size_t i = 0; i < a; ++i) y = F(y);
    return y;
  };
  BanachRun run = banach_direct(s, G, x0, std::pow(k, static_cast<double>(a)), n, opt);
  run.solver = "power";
  run.power = a;
  run.k_claimed = k;
  run.k_measured = kF;
  run.f_residual = s.phi(run.fixed_point, F(run.fixed_point));
  return run;
}

BanachRun banach_multcost(const QuasiSpace& s, const SelfMap& F, const Point& x0, double k, std::size_t n,
                          const BanachOptions& opt) {
  if (!s.psi) throw std::invalid_argument("banach_multcost: space has no cost function");
  if (!(k >= 0.0 && k < 1.0)) throw std::invalid_argument("banach_multcost: need 0 <= k < 1");
  if (!(s.M >= 0.0)) throw std::invalid_argument("banach_multcost: need M >= 0");

  BanachRun run;
  run.solver = "multcost";
  run.k_claimed = k;
  run.C = s.C;
  run.k_measured = measure_k(s, F, k, opt);
  for_each_triple(s, opt.contraction_samples, opt.seed + 1, [&](const Point& x, const Point& y, const Point& z) {
    const double before = s.psi(x, y, z);
    if (!(std::abs(before) <= s.M + opt.slack))
      throw ContractionViolation("|psi| exceeds M on a sampled triple", {x, y, z}, before);
    const double after = s.psi(F(x), F(y), F(z));
    // the hypothesis only constrains triples where both sides are positive
    if (before > 0.0 && after > 0.0 && after > k * before + opt.slack)
      throw ContractionViolation("psi(Fx, Fy, Fz) exceeds k psi(x, y, z)", {x, y, z}, after / before);
  });
  iterate(s, F, x0, n, opt, run);
  run.f_residual = run.residual;

  const double phi01 = run.iterates.size() > 1 ? s.phi(run.iterates[0], run.iterates[1]) : 0.0;
  const double M = s.M;
  auto bound = [&](std::size_t i, std::size_t j) {
    double sum = 0.0, exponent = 0.0;
    for (std::size_t t = 0; t < j - i; ++t) {
      exponent += std::pow(k, static_cast<double>(i + t));
      sum += std::pow(k, static_cast<double>(t)) * std::exp(M * exponent);
    }
    return std::pow(k, static_cast<double>(i)) * phi01 * sum;
  };
  run.tail_bound = 0.0;
  if (run.steps > 0) {
    // limit of bound(steps, m) as m grows, truncated where terms vanish
    double sum = 0.0, exponent = 0.0;
    for (std::size_t t = 0; t < 2000; ++t) {
      exponent += std::pow(k, static_cast<double>(run.steps + t));
      sum += std::pow(k, static_cast<double>(t)) * std::exp(M * exponent);
    }
    run.tail_bound = std::pow(k, static_cast<double>(run.steps)) * phi01 * sum;
  }
  check_tail(s, run, opt, bound);
  return run;
}

bool QuasiAudit::holds(double tol) const {
  return max_negative <= tol && max_reflexive <= tol && max_asymmetry <= tol && max_at <= tol &&
         max_multcost <= tol;
}

QuasiAudit audit_quasi(const QuasiSpace& s, std::size_t samples, std::uint64_t seed) {
  QuasiAudit a;
  for_each_triple(s, samples, seed, [&](const Point& x, const Point& y, const Point& z) {
    ++a.samples;
    const double xy = s.phi(x, y), yx = s.phi(y, x), xz = s.phi(x, z), zy = s.phi(z, y);
    a.max_negative = std::max(a.max_negative, -xy);
    a.max_reflexive = std::max(a.max_reflexive, s.phi(x, x));
    a.max_asymmetry = std::max(a.max_asymmetry, std::abs(xy - yx));
    a.max_at = std::max(a.max_at, xy - xz - s.C * zy);
    if (s.psi) {
      const double p = s.psi(x, y, z);
      a.max_psi = std::max(a.max_psi, std::abs(p));
      a.max_multcost = std::max(a.max_multcost, xy - (xz + zy) * std::exp(p));
    }
  });
  return a;
}

ScalingExample finite_scaling_example(std::size_t directions, std::size_t levels) {
  if (directions < 3 || levels < 1) throw std::invalid_argument("scaling example: need >= 3 directions, >= 1 level");
  std::vector<Point> pts;
  for (std::size_t j = 0; j < levels; ++j)
    for (std::size_t l = 0; l < directions; ++l) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(directions);
      Point p(2);
      p << std::cos(t), std::sin(t);
      pts.push_back(0.5 * std::pow(4.0, -static_cast<double>(j)) * p);
    }
  pts.push_back(Point::Zero(2));
  const TwoMetricSpace ambient(DomainInfo{"R2", 2, std::nullopt},
                               [](const Point& x, const Point& y, const Point& z) { return area_metric(x, y, z); },
                               [](Rng& r) { return Point(uniform_ball(r, 2, 0.5)); });
  ScalingExample ex{FiniteTwoMetricSpace::tabulate(ambient, pts), {}, pts.size() - 1};
  ex.map.resize(pts.size());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) ex.map[i] = i + directions < ex.origin ? i + directions : ex.origin;
  ex.map[ex.origin] = ex.origin;
  return ex;
}

}  // namespace twometric

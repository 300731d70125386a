#include "twometric/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace twometric {

namespace {

constexpr double kCanonEps = 1e-12;

double triple_product(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) + a[1] * (b[2] * c[0] - b[0] * c[2]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

bool lex_less3(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
}

// Sorts three references by a strict weak order given as a key comparator.
template <typename T, typename Less>
void sort3(const T*& a, const T*& b, const T*& c, Less less) {
  if (less(*b, *a)) std::swap(a, b);
  if (less(*c, *b)) std::swap(b, c);
  if (less(*b, *a)) std::swap(a, b);
}

Eigen::Vector3d any_orthogonal(const Eigen::Vector3d& u) {
  const Eigen::Vector3d trial = std::abs(u[0]) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  return (trial - trial.dot(u) * u).normalized();
}

}  // namespace

SpherePoint::SpherePoint(const Eigen::Vector3d& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("SpherePoint: vector must be nonzero and finite");
  v_ = v / n;
}

Eigen::Vector3d antipodal_canonical(const Eigen::Vector3d& x) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(x[i]) > kCanonEps) return x[i] > 0 ? x : Eigen::Vector3d(-x);
  }
  return x;
}

double det_metric(const Eigen::Vector3d& x, const Eigen::Vector3d& y, const Eigen::Vector3d& z) {
  const Eigen::Vector3d cx = antipodal_canonical(x), cy = antipodal_canonical(y),
                        cz = antipodal_canonical(z);
  if (cx == cy || cx == cz || cy == cz) return 0.0;
  struct Keyed {
    const Eigen::Vector3d* key;
    const Eigen::Vector3d* val;
  };
  Keyed kx{&cx, &x}, ky{&cy, &y}, kz{&cz, &z};
  const Keyed *a = &kx, *b = &ky, *c = &kz;
  sort3(a, b, c, [](const Keyed& l, const Keyed& r) { return lex_less3(*l.key, *r.key); });
  return std::abs(triple_product(*a->val, *b->val, *c->val));
}

double CramerResult::l1() const { return std::abs(alpha) + std::abs(beta) + std::abs(gamma); }

CramerResult cramer_check(const SpherePoint& x, const SpherePoint& y, const SpherePoint& z,
                          const SpherePoint& a) {
  const double base = det_metric(x, y, z);
  if (base <= 1e-12) throw std::domain_error("cramer_check: basis triple is singular");
  Eigen::Matrix3d m;
  m.col(0) = x.vec();
  m.col(1) = y.vec();
  m.col(2) = z.vec();
  const Eigen::Vector3d coeff = m.fullPivLu().solve(a.vec());

  CramerResult out{coeff[0], coeff[1], coeff[2], 0.0};
  out.residual = std::max({std::abs(det_metric(a, y, z) / base - std::abs(coeff[0])),
                           std::abs(det_metric(x, a, z) / base - std::abs(coeff[1])),
                           std::abs(det_metric(x, y, a) / base - std::abs(coeff[2]))});
  return out;
}

std::vector<Point> fibonacci_sphere(std::size_t count) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double t = golden * static_cast<double>(i);
    out.push_back(Eigen::Vector3d(s * std::cos(t), s * std::sin(t), z));
  }
  return out;
}

TwoMetricSpace det_sphere_space() {
  TwoMetricSpace space(
      DomainInfo{"det-sphere", 3, std::nullopt},
      [](const Point& x, const Point& y, const Point& z) {
        return det_metric(Eigen::Vector3d(x), Eigen::Vector3d(y), Eigen::Vector3d(z));
      },
      [](Rng& rng) -> Point { return uniform_sphere(rng); });
  space.with_canonicalizer([](const Point& x) -> Point { return antipodal_canonical(Eigen::Vector3d(x)); })
      .with_sup_witness([](const Point& x, const Point& y) -> std::optional<Point> {
        const Eigen::Vector3d c = Eigen::Vector3d(x).cross(Eigen::Vector3d(y));
        const double n = c.norm();
        if (!(n > 0.0)) return std::nullopt;
        return Point(c / n);
      })
      .with_grid(fibonacci_sphere)
      .with_line_sampler([](const Point& g1, const Point& g2, Rng& rng) -> Point {
        const Eigen::Vector3d u = Eigen::Vector3d(g1).normalized();
        Eigen::Vector3d v = Eigen::Vector3d(g2) - Eigen::Vector3d(g2).dot(u) * u;
        if (!(v.norm() > 0.0)) v = any_orthogonal(u);
        v.normalize();
        const double t = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        return Point(std::cos(t) * u + std::sin(t) * v);
      });
  return space;
}

// ---------------------------------------------------------------------------

double area_metric(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
  if (x.size() != y.size() || x.size() != z.size()) throw std::invalid_argument("area_metric: dimension mismatch");
  const Eigen::VectorXd *a = &x, *b = &y, *c = &z;
  sort3(a, b, c, [](const Eigen::VectorXd& l, const Eigen::VectorXd& r) { return lex_less(l, r); });
  const Eigen::VectorXd u = *b - *a;
  const Eigen::VectorXd v = *c - *a;
  double sq = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    for (Eigen::Index j = i + 1; j < u.size(); ++j) {
      const double w = u[i] * v[j] - u[j] * v[i];
      sq += w * w;
    }
  return 0.5 * std::sqrt(sq);
}

bool ball_contains(const BallConfig& ball, const Eigen::VectorXd& p, double slack) {
  return p.size() == ball.dim && p.norm() <= ball.radius() + slack;
}

namespace {

std::vector<Point> ball_grid(const BallConfig& ball, std::size_t count) {
  const double R = ball.radius();
  for (int m = 2;; ++m) {
    std::vector<Point> pts;
    std::vector<int> idx(ball.dim, 0);
    const double step = 2.0 * R / (m - 1);
    for (;;) {
      Eigen::VectorXd p(ball.dim);
      for (int i = 0; i < ball.dim; ++i) p[i] = -R + step * idx[i];
      if (p.norm() <= R) pts.push_back(p);
      int pos = 0;
      while (pos < ball.dim && ++idx[pos] == m) idx[pos++] = 0;
      if (pos == ball.dim) break;
    }
    if (pts.size() >= count) return pts;
  }
}

}  // namespace

TwoMetricSpace ball_space(const BallConfig& ball) {
  if (ball.dim < 2 || !(ball.diameter > 0.0) || ball.diameter > 1.0)
    throw std::invalid_argument("ball_space: need dim >= 2 and 0 < diameter <= 1");
  const double R = ball.radius();
  TwoMetricSpace space(
      DomainInfo{"ball", ball.dim, std::nullopt},
      [](const Point& x, const Point& y, const Point& z) { return area_metric(x, y, z); },
      [ball](Rng& rng) -> Point { return uniform_ball(rng, ball.dim, ball.radius()); });
  space
      .with_sup_witness([R](const Point& x, const Point& y) -> std::optional<Point> {
        const Eigen::VectorXd dir = y - x;
        const double len = dir.norm();
        if (!(len > 0.0)) return std::nullopt;
        const Eigen::VectorXd u = dir / len;
        const Eigen::VectorXd foot = x - x.dot(u) * u;
        const double fn = foot.norm();
        if (fn > 1e-15) return Point(-R * foot / fn);
        Eigen::VectorXd trial = Eigen::VectorXd::Zero(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
          trial.setZero();
          trial[i] = 1.0;
          trial -= trial.dot(u) * u;
          if (trial.norm() > 0.5) break;
        }
        return Point(R * trial.normalized());
      })
      .with_grid([ball](std::size_t count) { return ball_grid(ball, count); })
      .with_line_sampler([R](const Point& g1, const Point& g2, Rng& rng) -> Point {
        const Eigen::VectorXd dir = g2 - g1;
        const double a = dir.squaredNorm();
        if (!(a > 0.0)) return g1;
        const double b = 2.0 * g1.dot(dir);
        const double c = g1.squaredNorm() - R * R;
        const double disc = std::max(0.0, b * b - 4 * a * c);
        const double s0 = (-b - std::sqrt(disc)) / (2 * a), s1 = (-b + std::sqrt(disc)) / (2 * a);
        return Point(g1 + uniform(rng, s0, s1) * dir);
      });
  return space;
}

// ---------------------------------------------------------------------------

Eigen::Vector3d patch_lift(const Eigen::Vector2d& x) {
  const double s = 1.0 - x.squaredNorm();
  if (s < 0.0) throw std::invalid_argument("patch_lift: point outside the unit disc");
  return {x[0], x[1], -std::sqrt(s)};
}

double patch_metric(const PatchConfig& patch, const Eigen::Vector2d& x, const Eigen::Vector2d& y,
                    const Eigen::Vector2d& z) {
  for (const auto* p : {&x, &y, &z})
    if (p->norm() > patch.r + 1e-12) throw std::invalid_argument("patch_metric: point outside the patch");
  const Eigen::Vector2d *a = &x, *b = &y, *c = &z;
  sort3(a, b, c, [](const Eigen::Vector2d& l, const Eigen::Vector2d& r) {
    return std::lexicographical_compare(l.data(), l.data() + 2, r.data(), r.data() + 2);
  });
  const Eigen::Vector3d A = patch_lift(*a), B = patch_lift(*b), C = patch_lift(*c);
  return 0.5 * (B - A).cross(C - A).norm();
}

double flat_area(const Eigen::Vector2d& x, const Eigen::Vector2d& y, const Eigen::Vector2d& z) {
  const Eigen::Vector2d u = y - x, v = z - x;
  return 0.5 * std::abs(u[0] * v[1] - u[1] * v[0]);
}

double rho(const Eigen::Vector2d& x, const Eigen::Vector2d& y, const Eigen::Vector2d& z) {
  return (x - y).norm() * (x - z).norm() * (y - z).norm();
}

Eigen::Vector2d uniform_disc(Rng& rng, double radius) {
  for (;;) {
    const Eigen::Vector2d p(uniform(rng, -radius, radius), uniform(rng, -radius, radius));
    if (p.norm() <= radius) return p;
  }
}

TwoMetricSpace patch_space(const PatchConfig& patch) {
  if (!(patch.r > 0.0) || patch.r >= 0.25) throw std::invalid_argument("patch_space: need 0 < r < 1/4");
  TwoMetricSpace space(
      DomainInfo{"patch", 2, std::nullopt},
      [patch](const Point& x, const Point& y, const Point& z) {
        return patch_metric(patch, Eigen::Vector2d(x), Eigen::Vector2d(y), Eigen::Vector2d(z));
      },
      [patch](Rng& rng) -> Point { return uniform_disc(rng, patch.r); });
  space.with_grid([patch](std::size_t count) {
    std::vector<Point> pts;
    for (int m = 2; pts.size() < count; ++m) {
      pts.clear();
      const double step = 2.0 * patch.r / (m - 1);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const Eigen::Vector2d p(-patch.r + step * i, -patch.r + step * j);
          if (p.norm() <= patch.r) pts.push_back(p);
        }
    }
    return pts;
  });
  return space;
}

ConvexityBoundReport convexity_bound(const PatchConfig& patch, std::span<const PlaneTriple> triples) {
  if (!(patch.r > 0.0) || patch.r >= 0.25) throw std::invalid_argument("convexity_bound: need 0 < r < 1/4");
  ConvexityBoundReport rep;
  rep.r = patch.r;
  rep.samples = triples.size();
  for (const auto& t : triples) {
    if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2]) {
      ++rep.skipped;
      continue;
    }
    const double h = patch_metric(patch, t[0], t[1], t[2]);
    const double flat = flat_area(t[0], t[1], t[2]) + rho(t[0], t[1], t[2]);
    rep.upper_ratio = std::max(rep.upper_ratio, h / flat);
    rep.lower_ratio = std::max(rep.lower_ratio, flat / h);
  }
  rep.C = std::max({rep.upper_ratio, rep.lower_ratio, 1.0});
  return rep;
}

ConvexityBoundReport convexity_bound(const PatchConfig& patch, std::size_t samples, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PlaneTriple> triples;
  triples.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i)
    triples.push_back({uniform_disc(rng, patch.r), uniform_disc(rng, patch.r), uniform_disc(rng, patch.r)});
  auto rep = convexity_bound(patch, std::span<const PlaneTriple>(triples));
  rep.seed = seed;
  return rep;
}

}  // namespace twometric

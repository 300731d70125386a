#include "twometric/finite_space.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace twometric {

Point index_point(std::size_t i) {
  Point p(1);
  p[0] = static_cast<double>(i);
  return p;
}

std::size_t point_index(const Point& p) {
  if (p.size() != 1 || p[0] < 0) throw std::invalid_argument("not a finite-space point");
  return static_cast<std::size_t>(p[0]);
}

FiniteTwoMetricSpace::FiniteTwoMetricSpace(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("finite space needs at least one point");
  table_.assign(n * (n + 1) * (n + 2) / 6, 0.0);
}

std::size_t FiniteTwoMetricSpace::slot(std::size_t i, std::size_t j, std::size_t k) const {
  if (i >= n_ || j >= n_ || k >= n_) throw std::out_of_range("finite space index out of range");
  if (i > j) std::swap(i, j);
  if (j > k) std::swap(j, k);
  if (i > j) std::swap(i, j);
  return k * (k + 1) * (k + 2) / 6 + j * (j + 1) / 2 + i;
}

void FiniteTwoMetricSpace::set(std::size_t i, std::size_t j, std::size_t k, double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("finite space entries must be finite");
  table_[slot(i, j, k)] = value;
}

double FiniteTwoMetricSpace::phi(std::size_t i, std::size_t j) const {
  double best = 0.0;
  for (std::size_t z = 0; z < n_; ++z) best = std::max(best, d(i, j, z));
  return best;
}

TwoMetricSpace FiniteTwoMetricSpace::as_space() const {
  auto table = std::make_shared<const FiniteTwoMetricSpace>(*this);
  const std::size_t n = n_;
  TwoMetricSpace space(
      DomainInfo{"finite", 1, n},
      [table](const Point& x, const Point& y, const Point& z) {
        return table->d(point_index(x), point_index(y), point_index(z));
      },
      [n](Rng& rng) { return index_point(uniform_index(rng, n)); });
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(index_point(i));
  space.with_points(std::move(pts));
  space.with_sup_witness([table](const Point& x, const Point& y) -> std::optional<Point> {
    const std::size_t i = point_index(x), j = point_index(y);
    std::size_t best = 0;
    for (std::size_t z = 1; z < table->size(); ++z)
      if (table->d(i, j, z) > table->d(i, j, best)) best = z;
    return index_point(best);
  });
  return space;
}

FiniteTwoMetricSpace FiniteTwoMetricSpace::tabulate(const TwoMetricSpace& space,
                                                    std::span<const Point> pts, double snap) {
  FiniteTwoMetricSpace out(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k)
    for (std::size_t j = 0; j <= k; ++j)
      for (std::size_t i = 0; i <= j; ++i) {
        const double v = space.d(pts[i], pts[j], pts[k]);
        out.set(i, j, k, std::abs(v) <= snap ? 0.0 : v);
      }
  return out;
}

FiniteTwoMetricSpace demo5_space() {
  FiniteTwoMetricSpace s(5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j)
      for (std::size_t k = j + 1; k < 5; ++k) s.set(i, j, k, (k <= 2) ? 0.0 : 1.0);
  return s;
}

FiniteTwoMetricSpace random_projective_space(std::size_t n, Rng& rng, int bound) {
  using IVec = Eigen::Matrix<long long, 3, 1>;
  const long long span = 2LL * bound + 1;
  if (static_cast<long long>(n) > (span * span * span - 1) / 2)
    throw std::invalid_argument("not enough projective points in the coordinate box");

  std::vector<IVec> vecs;
  while (vecs.size() < n) {
    IVec v;
    for (int c = 0; c < 3; ++c) v[c] = static_cast<long long>(uniform_index(rng, span)) - bound;
    if (v.isZero()) continue;
    const bool parallel = std::any_of(vecs.begin(), vecs.end(), [&](const IVec& u) { return u.cross(v).isZero(); });
    if (!parallel) vecs.push_back(v);
  }

  FiniteTwoMetricSpace out(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < j; ++i) {
        const long long det = vecs[i].dot(vecs[j].cross(vecs[k]));
        if (det == 0) continue;
        const double norms = vecs[i].cast<double>().norm() * vecs[j].cast<double>().norm() *
                             vecs[k].cast<double>().norm();
        out.set(i, j, k, std::min(1.0, std::abs(static_cast<double>(det)) / norms));
      }
  return out;
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

}  // namespace

Quotient quotient_by_zero_phi(const FiniteTwoMetricSpace& space, double tol) {
  const std::size_t n = space.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (space.phi(i, j) <= tol) {
        const std::size_t a = find_root(parent, i), b = find_root(parent, j);
        parent[std::max(a, b)] = std::min(a, b);
      }

  std::vector<std::size_t> class_of(n);
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> class_of_root(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find_root(parent, i);
    if (class_of_root[r] == n) {
      class_of_root[r] = classes.size();
      classes.emplace_back();
    }
    class_of[i] = class_of_root[r];
    classes[class_of[i]].push_back(i);
  }

  FiniteTwoMetricSpace q(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (std::size_t b = 0; b <= c; ++b)
      for (std::size_t a = 0; a <= b; ++a)
        q.set(a, b, c, space.d(classes[a].front(), classes[b].front(), classes[c].front()));
  return Quotient{std::move(q), std::move(class_of), std::move(classes)};
}

SurjectivityCheck surjective_contraction_check(const FiniteTwoMetricSpace& space,
                                               std::span<const std::size_t> map) {
  const std::size_t n = space.size();
  if (map.size() != n) throw std::invalid_argument("map must be defined on every index");
  std::vector<bool> hit(n, false);
  for (std::size_t v : map) {
    if (v >= n) throw std::out_of_range("map image out of range");
    hit[v] = true;
  }

  SurjectivityCheck out;
  out.is_surjective = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j <= k; ++j)
      for (std::size_t i = 0; i <= j; ++i) {
        const double base = space.d(i, j, k);
        const double image = space.d(map[i], map[j], map[k]);
        // a degenerate triple with a nondegenerate image defeats every k
        if (base <= 0.0 && !(image > 0.0)) continue;
        const double ratio = base > 0.0 ? image / base : INFINITY;
        if (!out.measured_k || ratio > *out.measured_k) {
          out.measured_k = ratio;
          out.witness = {i, j, k};
        }
      }
  return out;
}

}  // namespace twometric

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "twometric/metric_space.hpp"

namespace twometric {

Point index_point(std::size_t i);
std::size_t point_index(const Point& p);

/// A 2-metric on {0, ..., n-1} stored as one value per unordered triple with
/// repeats, so permutation symmetry holds by construction. Entries default to
/// 0. Values outside [0, 1] are representable on purpose: the auditor, not
/// the constructor, is responsible for rejecting them.
class FiniteTwoMetricSpace {
 public:
  explicit FiniteTwoMetricSpace(std::size_t n);

  std::size_t size() const { return n_; }
  double d(std::size_t i, std::size_t j, std::size_t k) const { return table_[slot(i, j, k)]; }
  void set(std::size_t i, std::size_t j, std::size_t k, double value);

  /// Exact associated distance: max over all points.
  double phi(std::size_t i, std::size_t j) const;

  /// Adapter onto the generic interface; points are index_point(i).
  TwoMetricSpace as_space() const;

  /// Tabulates `space` on the given points. Values with |d| <= snap become 0.
  static FiniteTwoMetricSpace tabulate(const TwoMetricSpace& space, std::span<const Point> pts,
                                       double snap = 0.0);

 private:
  std::size_t slot(std::size_t i, std::size_t j, std::size_t k) const;

  std::size_t n_;
  std::vector<double> table_;
};

/// Points a, b, c, p, q (indices 0..4): zero on triples with repeats and on
/// {a, b, c}, one on every other triple.
FiniteTwoMetricSpace demo5_space();

/// Determinant metric on n pairwise non-parallel integer vectors with
/// coordinates in [-bound, bound]. Colinearity is decided with exact integer
/// determinants, so the zero pattern is exact. Satisfies all axioms including
/// (N) and (Trans).
FiniteTwoMetricSpace random_projective_space(std::size_t n, Rng& rng, int bound = 2);

struct Quotient {
  FiniteTwoMetricSpace space;
  std::vector<std::size_t> class_of;             // original index -> class
  std::vector<std::vector<std::size_t>> classes; // class -> sorted members
};

/// Merges points at associated distance <= tol. Each class is represented by
/// its smallest member.
Quotient quotient_by_zero_phi(const FiniteTwoMetricSpace& space, double tol = 0.0);

struct SurjectivityCheck {
  bool is_surjective = false;
  std::optional<double> measured_k;  // absent when d vanishes on every triple
  std::array<std::size_t, 3> witness{};
};

/// Largest ratio d(Fx,Fy,Fz)/d(x,y,z) over triples with d > 0; infinite when
/// some triple with d = 0 has an image with d > 0.
SurjectivityCheck surjective_contraction_check(const FiniteTwoMetricSpace& space,
                                               std::span<const std::size_t> map);

}  // namespace twometric

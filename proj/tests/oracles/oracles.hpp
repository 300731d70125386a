#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's metric code; formulas are written out by hand.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <set>
#include <vector>

namespace oracle {

using V3 = std::array<double, 3>;

/// Cofactor expansion along the first row.
inline double det3(const V3& x, const V3& y, const V3& z) {
  return x[0] * (y[1] * z[2] - y[2] * z[1]) - x[1] * (y[0] * z[2] - y[2] * z[0]) +
         x[2] * (y[0] * z[1] - y[1] * z[0]);
}

inline V3 cross(const V3& a, const V3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const V3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

/// Triangle area from side lengths (Kahan's stable Heron).
inline double heron(double a, double b, double c) {
  std::array<double, 3> s{a, b, c};
  std::sort(s.begin(), s.end(), std::greater<>());
  const double x = s[0], y = s[1], z = s[2];
  const double p = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
  return 0.25 * std::sqrt(std::max(0.0, p));
}

template <class P>
double dist(const P& a, const P& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

template <class P>
double area(const P& a, const P& b, const P& c) {
  return heron(dist(a, b), dist(a, c), dist(b, c));
}

/// Table of a finite 2-metric as a plain function of three indices.
using Table = std::function<double(std::size_t, std::size_t, std::size_t)>;

inline double phi(const Table& d, std::size_t n, std::size_t i, std::size_t j) {
  double best = 0;
  for (std::size_t z = 0; z < n; ++z) best = std::max(best, d(i, j, z));
  return best;
}

/// Maximal subsets (size >= 2) all of whose triples have d <= eps, by
/// enumerating all 2^n subsets. Returned sorted.
inline std::vector<std::vector<std::size_t>> maximal_colinear_subsets(const Table& d, std::size_t n,
                                                                       double eps = 0.0) {
  auto colinear = [&](unsigned mask) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k)
          if ((mask >> i & 1u) && (mask >> j & 1u) && (mask >> k & 1u) && d(i, j, k) > eps) return false;
    return true;
  };
  std::vector<unsigned> good;
  for (unsigned mask = 0; mask < (1u << n); ++mask)
    if (__builtin_popcount(mask) >= 2 && colinear(mask)) good.push_back(mask);
  std::vector<std::vector<std::size_t>> out;
  for (unsigned m : good) {
    bool maximal = true;
    for (unsigned o : good)
      if (o != m && (o & m) == m) maximal = false;
    if (!maximal) continue;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (m >> i & 1u) members.push_back(i);
    out.push_back(members);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Smallest a >= 1 with k^a < 1/C, via logarithms.
inline std::size_t minimal_power(double k, double C) {
  if (C == 1.0) return 1;
  double a = std::ceil(std::log(1.0 / C) / std::log(k));
  if (std::pow(k, a) >= 1.0 / C) a += 1;
  while (a > 1 && std::pow(k, a - 1) < 1.0 / C) a -= 1;
  return static_cast<std::size_t>(std::max(1.0, a));
}

}  // namespace oracle

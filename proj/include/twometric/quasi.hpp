#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twometric/finite_space.hpp"
#include "twometric/metric_space.hpp"

namespace twometric {

/// A distance phi with phi(x, y) <= phi(x, z) + C phi(z, y), optionally with a
/// cost psi such that phi(x, y) <= (phi(x, z) + phi(z, y)) exp(psi(x, y, z)).
struct QuasiSpace {
  using Distance = std::function<double(const Point&, const Point&)>;
  using Cost = std::function<double(const Point&, const Point&, const Point&)>;

  std::string name;
  Distance phi;
  double C = 1.0;
  bool strictly_reflexive = false;  // phi(x, y) = 0 only for x = y
  Cost psi;                         // empty unless the multiplicative variant applies
  double M = 0.0;                   // |psi| <= M
  std::function<Point(Rng&)> sampler;
  std::vector<Point> points;        // full enumeration for finite spaces
};

/// [lo, hi] with |x - y|. C = 1.
QuasiSpace interval_space(double lo = 0.0, double hi = 1.0);

/// Associated distance of a finite 2-metric (exact), C = 2.
QuasiSpace associated_quasi_space(const FiniteTwoMetricSpace& space);

/// Associated distance over a witness set, C = 2.
QuasiSpace associated_quasi_space(const TwoMetricSpace& space, const WitnessSet& W);

using SelfMap = std::function<Point(const Point&)>;

class ContractionViolation : public std::runtime_error {
 public:
  ContractionViolation(const std::string& what, std::vector<Point> witness, double ratio)
      : std::runtime_error(what), witness(std::move(witness)), ratio(ratio) {}
  std::vector<Point> witness;
  double ratio;
};

struct BanachOptions {
  double tolerance = 1e-12;          // stop once phi(x_n, F(x_n)) <= tolerance
  std::size_t contraction_samples = 500;
  std::uint64_t seed = 0;
  double slack = 1e-12;              // additive slack for sampled checks
};

struct BanachRun {
  std::string solver;
  Point x0;
  std::vector<Point> iterates;  // x_0 .. x_steps
  Point fixed_point;
  double residual = 0;          // phi(x_n, G(x_n)) for the iterated map G
  std::size_t steps = 0;
  double k_claimed = 0;
  std::optional<double> k_measured;
  double C = 1;
  std::size_t power = 1;        // G = F^power
  double f_residual = 0;        // phi(x_n, F(x_n))
  double tail_bound = 0;        // bound on phi(x_steps, x_m) at the last step
  double worst_tail_excess = 0; // max over recorded n < m of phi(x_n, x_m) - bound(n, m)
  bool tail_bound_ok = true;
  bool converged = false;
};

/// Iterates F from x0 while k < 1/C. The contraction factor is measured on
/// samples (exhaustively on finite spaces) and must not exceed k.
/// Throws std::invalid_argument for k >= 1/C and ContractionViolation when
/// the measurement contradicts k.
BanachRun banach_direct(const QuasiSpace& space, const SelfMap& F, const Point& x0, double k, std::size_t n,
                        const BanachOptions& options = {});

/// Minimal a >= 1 with k^a < 1/C.
std::size_t minimal_power(double k, double C);

/// Runs banach_direct on F^a with a = minimal_power(k, C), then checks that
/// the limit is fixed by F itself.
BanachRun banach_power(const QuasiSpace& space, const SelfMap& F, const Point& x0, double k, std::size_t n,
                       const BanachOptions& options = {});

/// Fixed-point iteration under the multiplicative-cost inequality. Requires
/// psi; checks psi(Fx, Fy, Fz) <= k psi(x, y, z) on sampled triples where both
/// sides are positive and |psi| <= M. Tail pairs are held to
/// k^n phi(x0, x1) sum_j k^j exp(M (k^n + ... + k^(n+j))).
BanachRun banach_multcost(const QuasiSpace& space, const SelfMap& F, const Point& x0, double k, std::size_t n,
                          const BanachOptions& options = {});

struct QuasiAudit {
  std::size_t samples = 0;
  double max_negative = 0;       // max of -phi
  double max_reflexive = 0;      // max phi(x, x)
  double max_asymmetry = 0;      // max |phi(x, y) - phi(y, x)|
  double max_at = 0;             // max phi(x,y) - phi(x,z) - C phi(z,y)
  double max_multcost = 0;       // multiplicative variant, when psi is set
  double max_psi = 0;            // max |psi|
  bool holds(double tol = 1e-12) const;
};

/// Exhaustive on finite spaces, otherwise `samples` random triples.
QuasiAudit audit_quasi(const QuasiSpace& space, std::size_t samples, std::uint64_t seed);

/// Finite subset {4^-j v} of a disc of diameter 1 with the area metric, and
/// the map x -> x / 4 (deepest level to the origin). Points are indices; the
/// origin is the last one.
struct ScalingExample {
  FiniteTwoMetricSpace space;
  std::vector<std::size_t> map;
  std::size_t origin = 0;
};
ScalingExample finite_scaling_example(std::size_t directions = 8, std::size_t levels = 6);

}  // namespace twometric

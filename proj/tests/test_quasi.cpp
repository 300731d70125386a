#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles/oracles.hpp"
#include "twometric/quasi.hpp"

using namespace twometric;

namespace {

Point scalar(double v) { return Point::Constant(1, v); }

SelfMap scale(double f) {
  return [f](const Point& x) { return Point(f * x); };
}

QuasiSpace with_C(QuasiSpace s, double C) {
  s.C = C;
  return s;
}

}  // namespace

TEST(Interval, DirectConvergesWithinThirtySteps) {
  const auto run = banach_direct(interval_space(), scale(1.0 / 3.0), scalar(1.0), 1.0 / 3.0, 200);
  EXPECT_TRUE(run.converged);
  EXPECT_LE(run.steps, 30u);
  // stopping at |x - F x| <= tol leaves |x - x*| <= tol / (1 - k)
  EXPECT_LE(std::abs(run.fixed_point[0]), 1.5e-12);
  EXPECT_TRUE(run.tail_bound_ok);
  ASSERT_TRUE(run.k_measured);
  EXPECT_NEAR(*run.k_measured, 1.0 / 3.0, 1e-12);
}

TEST(Interval, TailBoundHoldsOnEveryPair) {
  const auto run = banach_direct(with_C(interval_space(), 2.0), scale(0.4), scalar(0.9), 0.4, 40);
  ASSERT_TRUE(run.tail_bound_ok);
  const double phi01 = std::abs(run.iterates[0][0] - run.iterates[1][0]);
  for (std::size_t i = 0; i < run.iterates.size(); ++i)
    for (std::size_t j = i + 1; j < run.iterates.size(); ++j)
      EXPECT_LT(std::abs(run.iterates[i][0] - run.iterates[j][0]),
                std::pow(0.4, static_cast<double>(i)) / (1 - 2 * 0.4) * phi01 + 1e-12);
}

TEST(Interval, DirectRefusesKAboveOneOverC) {
  EXPECT_THROW(banach_direct(with_C(interval_space(), 2.0), scale(0.6), scalar(1.0), 0.6, 50),
               std::invalid_argument);
}

TEST(Interval, UnderstatedFactorIsCaught) {
  try {
    banach_direct(interval_space(), scale(0.9), scalar(1.0), 0.4, 50);
    FAIL() << "expected a contraction violation";
  } catch (const ContractionViolation& e) {
    EXPECT_NEAR(e.ratio, 0.9, 1e-12);
    EXPECT_EQ(e.witness.size(), 2u);
  }
}

TEST(Interval, DifferentStartsShareTheFixedPoint) {
  const SelfMap F = [](const Point& x) { return Point(0.5 * x + scalar(0.2)); };
  const auto a = banach_direct(interval_space(), F, scalar(0.0), 0.5, 200);
  const auto b = banach_direct(interval_space(), F, scalar(1.0), 0.5, 200);
  EXPECT_NEAR(a.fixed_point[0], 0.4, 2e-12);
  EXPECT_NEAR(b.fixed_point[0], 0.4, 2e-12);
  EXPECT_LE(std::abs(a.fixed_point[0] - b.fixed_point[0]), 4e-12);
}

TEST(MinimalPower, MatchesOracle) {
  EXPECT_EQ(minimal_power(0.6, 2.0), 2u);
  EXPECT_EQ(minimal_power(0.99, 2.0), 69u);
  EXPECT_EQ(minimal_power(0.3, 1.0), 1u);
  for (double k : {0.1, 0.45, 0.5, 0.7, 0.9, 0.97})
    for (double C : {1.0, 1.5, 2.0, 3.0, 10.0}) EXPECT_EQ(minimal_power(k, C), oracle::minimal_power(k, C)) << k << ' ' << C;
  for (double k : {0.5, 0.9})
    for (double C : {2.0, 4.0}) {
      const auto a = minimal_power(k, C);
      EXPECT_LT(std::pow(k, static_cast<double>(a)), 1.0 / C);
      if (a > 1) EXPECT_GE(std::pow(k, static_cast<double>(a - 1)), 1.0 / C);
    }
}

TEST(Power, SolvesBeyondTheDirectRange) {
  for (double k : {0.6, 0.99}) {
    const auto run = banach_power(with_C(interval_space(), 2.0), scale(k), scalar(1.0), k, 20000);
    EXPECT_EQ(run.power, minimal_power(k, 2.0));
    EXPECT_TRUE(run.converged) << k;
    EXPECT_TRUE(run.tail_bound_ok) << k;
    EXPECT_LE(run.f_residual, 1e-10) << k;
  }
}

TEST(Multcost, ZeroCostMatchesDirect) {
  QuasiSpace s = interval_space();
  s.psi = [](const Point&, const Point&, const Point&) { return 0.0; };
  s.M = 0.0;
  const auto d = banach_direct(s, scale(0.4), scalar(0.8), 0.4, 60);
  const auto m = banach_multcost(s, scale(0.4), scalar(0.8), 0.4, 60);
  ASSERT_EQ(d.iterates.size(), m.iterates.size());
  for (std::size_t i = 0; i < d.iterates.size(); ++i) EXPECT_EQ(d.iterates[i], m.iterates[i]);
  EXPECT_EQ(d.fixed_point, m.fixed_point);
  EXPECT_EQ(d.residual, m.residual);
  EXPECT_EQ(d.steps, m.steps);
}

TEST(Multcost, ShrinkingCostConverges) {
  QuasiSpace s = interval_space();
  s.psi = [](const Point&, const Point&, const Point& z) { return 0.1 * std::abs(z[0]); };
  s.M = 0.1;
  const auto run = banach_multcost(s, scale(0.5), scalar(1.0), 0.5, 200);
  EXPECT_TRUE(run.converged);
  EXPECT_TRUE(run.tail_bound_ok);
  EXPECT_LE(std::abs(run.fixed_point[0]), 2e-12);
}

TEST(Multcost, GrowingCostIsRejected) {
  // psi(F x, F y, F z) = 2 psi(x, y, z) for z >= 1/2
  QuasiSpace s = interval_space();
  s.psi = [](const Point&, const Point&, const Point& z) {
    return 0.05 * std::min(1.0, 0.25 / std::max(std::abs(z[0]), 1e-300));
  };
  s.M = 0.05;
  try {
    banach_multcost(s, scale(0.5), scalar(1.0), 0.5, 100);
    FAIL() << "expected a contraction violation";
  } catch (const ContractionViolation& e) {
    EXPECT_EQ(e.witness.size(), 3u);
    EXPECT_GT(e.ratio, 0.5);
    EXPECT_LE(e.ratio, 2.0 + 1e-12);
  }
}

TEST(Multcost, UnboundedCostIsRejected) {
  QuasiSpace s = interval_space();
  s.psi = [](const Point&, const Point&, const Point& z) { return 10.0 * std::abs(z[0]); };
  s.M = 1.0;
  EXPECT_THROW(banach_multcost(s, scale(0.5), scalar(1.0), 0.5, 100), ContractionViolation);
  QuasiSpace none = interval_space();
  EXPECT_THROW(banach_multcost(none, scale(0.5), scalar(1.0), 0.5, 100), std::invalid_argument);
}

TEST(FiniteScaling, ConvergesToTheOrigin) {
  const auto ex = finite_scaling_example();
  const auto qs = associated_quasi_space(ex.space);
  EXPECT_EQ(qs.C, 2.0);
  const SelfMap F = [&ex](const Point& x) { return index_point(ex.map[point_index(x)]); };
  const auto run = banach_direct(qs, F, index_point(0), 0.4, 50);
  EXPECT_TRUE(run.converged);
  EXPECT_TRUE(run.tail_bound_ok);
  EXPECT_EQ(point_index(run.fixed_point), ex.origin);
  ASSERT_TRUE(run.k_measured);
  EXPECT_NEAR(*run.k_measured, 1.0 / 3.0, 1e-12);
}

TEST(QuasiAudit, AssociatedDistanceSatisfiesAsymmetricTriangle) {
  Rng rng(4);
  for (int rep = 0; rep < 10; ++rep) {
    const auto s = random_projective_space(4 + rep % 3, rng);
    const auto a = audit_quasi(associated_quasi_space(s), 0, 0);
    EXPECT_TRUE(a.holds());
    EXPECT_LE(a.max_at, 0.0);
  }
  EXPECT_TRUE(audit_quasi(associated_quasi_space(demo5_space()), 0, 0).holds());
  EXPECT_TRUE(audit_quasi(interval_space(), 2000, 1).holds());
}

TEST(QuasiAudit, PlantedAsymmetryIsReported) {
  QuasiSpace s = interval_space();
  s.phi = [](const Point& x, const Point& y) { return x[0] > y[0] ? 2 * (x[0] - y[0]) : y[0] - x[0]; };
  const auto a = audit_quasi(s, 500, 2);
  EXPECT_GT(a.max_asymmetry, 0.0);
  EXPECT_FALSE(a.holds());
}

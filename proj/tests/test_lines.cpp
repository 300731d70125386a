#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles/oracles.hpp"
#include "twometric/finite_space.hpp"
#include "twometric/lines.hpp"
#include "twometric/spaces.hpp"

using namespace twometric;

namespace {

std::vector<std::vector<std::size_t>> member_lists(const std::vector<Line>& lines) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& l : lines) out.push_back(l.members.value());
  return out;
}

oracle::Table table_of(const FiniteTwoMetricSpace& s) {
  return [&s](std::size_t i, std::size_t j, std::size_t k) { return s.d(i, j, k); };
}

Point equator(double t) { return Eigen::Vector3d(std::cos(t), std::sin(t), 0.0); }

std::vector<Point> alternating(std::size_t n) {
  std::vector<Point> seq;
  for (std::size_t i = 0; i < n; ++i) seq.push_back(i % 2 ? Point(Eigen::Vector3d::UnitY()) : Point(Eigen::Vector3d::UnitX()));
  return seq;
}

}  // namespace

TEST(Lines, Demo5HasEightLines) {
  const auto lines = enumerate_lines(demo5_space());
  const std::vector<std::vector<std::size_t>> expect = {{0, 1, 2}, {0, 3}, {0, 4}, {1, 3},
                                                        {1, 4},    {2, 3}, {2, 4}, {3, 4}};
  EXPECT_EQ(member_lists(lines), expect);
}

TEST(Lines, MatchBruteForceOracle) {
  Rng rng(31);
  for (int rep = 0; rep < 40; ++rep) {
    const auto s = random_projective_space(3 + rep % 4, rng);
    EXPECT_EQ(member_lists(enumerate_lines(s)), oracle::maximal_colinear_subsets(table_of(s), s.size()));
  }
}

TEST(Lines, CollapsedSpaceIsOneLine) {
  const FiniteTwoMetricSpace zero(4);
  const auto lines = enumerate_lines(zero);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(*lines[0].members, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(Lines, LineThroughFinitePair) {
  const auto s = demo5_space();
  EXPECT_EQ(*line_through(s, 0, 1).members, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(*line_through(s, 2, 0).members, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(*line_through(s, 3, 4).members, (std::vector<std::size_t>{3, 4}));
}

TEST(Lines, CoincidentGeneratorsAreRejected) {
  const auto s = demo5_space();
  EXPECT_THROW(line_through(s, 1, 1), LineUndefined);
  const auto sphere = det_sphere_space();
  const auto W = WitnessSet::make(sphere, WitnessKind::Sample, 10);
  const Point x = Eigen::Vector3d::UnitX();
  EXPECT_THROW(line_through(sphere, x, Point(-x), W, 1e-9, 1e-6), LineUndefined);
}

TEST(Lines, NonTransitiveTableIsReported) {
  // {0,1,2} and {0,1,3} colinear but {0,2,3} not; point 4 keeps 0, 1 apart
  FiniteTwoMetricSpace t(5);
  t.set(0, 2, 3, 1.0);
  t.set(1, 2, 3, 1.0);
  t.set(0, 1, 4, 1.0);
  EXPECT_THROW(line_through(t, 0, 1), std::runtime_error);
}

TEST(Lines, GreatCircleMembership) {
  const auto sphere = det_sphere_space();
  const auto W = WitnessSet::make(sphere, WitnessKind::Sample, 10);
  const auto line = line_through(sphere, equator(0.3), equator(1.9), W, 1e-12, 1e-6);
  for (int i = 0; i < 50; ++i) EXPECT_TRUE(line.contains(sphere, equator(0.1 * i)));
  EXPECT_FALSE(line.contains(sphere, Point(Eigen::Vector3d(0.0, 0.6, 0.8))));
  Rng rng(3);
  for (int i = 0; i < 50; ++i) EXPECT_TRUE(line.contains(sphere, sphere.sample_on_line(line.g1, line.g2, rng)));
}

TEST(Transitivity, EquatorHolds) {
  const auto sphere = det_sphere_space();
  const auto W = WitnessSet::make(sphere, WitnessKind::Sample, 10);
  const auto p = transitivity_probe(sphere, equator(0.1), equator(0.7), equator(2.0), equator(2.9), 1e-12, W, 1e-6);
  EXPECT_EQ(p.result, ProbeResult::Held);
  EXPECT_NEAR(p.phi_yz, std::sin(1.3), 1e-15);
  EXPECT_NEAR(p.tolerance, 2e-12 / std::sin(1.3), 1e-20);
}

TEST(Transitivity, CloseMiddlePointsAreInconclusive) {
  const auto sphere = det_sphere_space();
  const auto W = WitnessSet::make(sphere, WitnessKind::Sample, 10);
  const auto p = transitivity_probe(sphere, equator(0.1), equator(0.7), equator(0.7 + 1e-9), equator(2.9), 1e-12,
                                    W, 1e-6);
  EXPECT_EQ(p.result, ProbeResult::Inconclusive);
}

TEST(Transitivity, FailedPremiseIsVacuous) {
  const auto sphere = det_sphere_space();
  const auto W = WitnessSet::make(sphere, WitnessKind::Sample, 10);
  const auto p = transitivity_probe(sphere, Point(Eigen::Vector3d::UnitZ()), equator(0.7), equator(2.0),
                                    equator(2.9), 1e-12, W, 1e-6);
  EXPECT_EQ(p.result, ProbeResult::Vacuous);
}

TEST(Transitivity, BrokenTableIsViolated) {
  // x=0, y=1, z=2, w=3: (0,1,2) and (1,2,3) colinear, (0,1,3) not; point 4 keeps y, z apart
  FiniteTwoMetricSpace t(5);
  t.set(0, 1, 3, 1.0);
  t.set(1, 2, 4, 1.0);
  const auto s = t.as_space();
  const auto W = WitnessSet::make(s, WitnessKind::Sample, 5);
  const auto p = transitivity_probe(s, index_point(0), index_point(1), index_point(2), index_point(3), 0.0, W, 0.0);
  EXPECT_EQ(p.result, ProbeResult::Violated);
}

TEST(Bounds, Formulas) {
  EXPECT_DOUBLE_EQ(lim_colinearity_bound(1e-6, 0.5), 6e-6 * 3.0);
  EXPECT_DOUBLE_EQ(lim_extension_threshold(1e-6, 0.5, 0.1, 1e-6), 1e-6 + 2.0 * (1e-6 + 2e-6 * 3.0) / 0.1);
}

TEST(Lim, ResidualIsMaxOverTailPairs) {
  const auto sphere = det_sphere_space();
  const auto seq = alternating(10);
  const auto r = lim_residual(sphere, Point(Eigen::Vector3d(1, 1, 0).normalized()), seq, 5);
  EXPECT_EQ(r.residual, 0.0);
  const Point y = Eigen::Vector3d(0, 0.6, 0.8);
  EXPECT_NEAR(lim_residual(sphere, y, seq, 5).residual, 0.8, 1e-15);
}

TEST(Classify, AlternatingIsLineCase) {
  const auto sphere = det_sphere_space();
  const auto W = WitnessSet::make(sphere, WitnessKind::Grid, 200);
  const auto seq = alternating(100);
  const auto c = classify(sphere, seq, W);
  EXPECT_EQ(c.tag, ClassTag::LineCase);
  EXPECT_EQ(c.tri_cauchy_modulus, 0.0);
  EXPECT_EQ(c.cauchy_modulus, 1.0);
  ASSERT_TRUE(c.line);
  for (int i = 0; i < 20; ++i) EXPECT_LE(c.line->defect(sphere, equator(0.3 * i)), 1e-12);
  EXPECT_GT(c.line->defect(sphere, Point(Eigen::Vector3d::UnitZ())), 0.99);
}

TEST(Classify, PassersOfNonCauchyTailAreColinear) {
  const auto sphere = det_sphere_space();
  WitnessSet W = WitnessSet::make(sphere, WitnessKind::Grid, 100);
  for (int i = 0; i < 12; ++i) W.points.push_back(equator(0.25 * i + 0.1));
  const auto seq = alternating(80);
  const auto c = classify(sphere, seq, W);
  ASSERT_GE(c.passers.size(), 14u);
  const double bound = lim_colinearity_bound(c.thresholds.eps_lim, c.cauchy_modulus);
  for (std::size_t i = 0; i < c.passers.size(); ++i)
    for (std::size_t j = i + 1; j < c.passers.size(); ++j)
      for (std::size_t k = j + 1; k < c.passers.size(); ++k)
        EXPECT_LE(sphere.d(c.passers[i], c.passers[j], c.passers[k]), bound);
}

TEST(Classify, ConstantSequenceIsCauchy) {
  const auto sphere = det_sphere_space();
  const auto W = WitnessSet::make(sphere, WitnessKind::Grid, 50);
  const std::vector<Point> seq(60, Point(Eigen::Vector3d(0.6, 0, 0.8)));
  const auto c = classify(sphere, seq, W);
  EXPECT_EQ(c.tag, ClassTag::CauchySequence);
  EXPECT_EQ(c.cauchy_modulus, 0.0);
}

TEST(Classify, ThreePointCycleHasNoLimit) {
  const auto s = demo5_space().as_space();
  const auto W = WitnessSet::make(s, WitnessKind::Sample, 5);
  std::vector<Point> seq;
  const std::size_t cycle[3] = {0, 3, 4};
  for (std::size_t i = 0; i < 60; ++i) seq.push_back(index_point(cycle[i % 3]));
  const auto c = classify(s, seq, W);
  EXPECT_EQ(c.tag, ClassTag::NoPoint);
  EXPECT_TRUE(c.passers.empty());
}

TEST(Classify, FiniteTwoPointCycleGivesMaterializedLine) {
  const auto s = demo5_space().as_space();
  const auto W = WitnessSet::make(s, WitnessKind::Sample, 5);
  std::vector<Point> seq;
  for (std::size_t i = 0; i < 60; ++i) seq.push_back(index_point(i % 2));
  const auto c = classify(s, seq, W);
  EXPECT_EQ(c.tag, ClassTag::LineCase);
  ASSERT_TRUE(c.line && c.line->members);
  EXPECT_EQ(*c.line->members, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Classify, PassersWithinDeltaCollapseToOnePoint) {
  // slow spiral into the pole: not Cauchy at eps_cauchy, but every passer is
  // within the (widened) delta of the pole
  const auto sphere = det_sphere_space();
  WitnessSet W = WitnessSet::make(sphere, WitnessKind::Grid, 100);
  W.points.push_back(Eigen::Vector3d::UnitZ());
  std::vector<Point> seq;
  for (int i = 0; i < 60; ++i) {
    const double r = std::pow(10.0, -i / 8.0), t = 2.0 * i;
    seq.push_back(Eigen::Vector3d(r * std::cos(t), r * std::sin(t), 1.0).normalized());
  }
  Thresholds th;
  th.delta = 1e-3;
  const auto c = classify(sphere, seq, W, th);
  EXPECT_GT(c.cauchy_modulus, th.eps_cauchy);
  EXPECT_EQ(c.tag, ClassTag::UniquePoint);
  ASSERT_TRUE(c.point);
  EXPECT_LE(eval_phi(sphere, *c.point, Point(Eigen::Vector3d::UnitZ()), W), 1e-3);
}

TEST(Classify, ShortSequenceThrows) {
  const auto sphere = det_sphere_space();
  const auto W = WitnessSet::make(sphere, WitnessKind::Grid, 10);
  const auto seq = alternating(10);
  EXPECT_THROW(classify(sphere, seq, W), std::invalid_argument);
}

TEST(Names, ToString) {
  EXPECT_STREQ(to_string(ClassTag::LineCase), "LineCase");
  EXPECT_STREQ(to_string(ProbeResult::Vacuous), "vacuous");
}

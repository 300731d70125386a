#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "oracles/oracles.hpp"
#include "twometric/audit.hpp"
#include "twometric/finite_space.hpp"
#include "twometric/metric_space.hpp"
#include "twometric/spaces.hpp"

using namespace twometric;

namespace {

oracle::Table table_of(const FiniteTwoMetricSpace& s) {
  return [&s](std::size_t i, std::size_t j, std::size_t k) { return s.d(i, j, k); };
}

const char* kAxioms[] = {"Sym", "Tetr", "Z", "N", "B", "Pos", "Trans", "AT", "CostTriangle", "DphiLipschitz"};

}  // namespace

TEST(FiniteSpace, TableIsSymmetricByConstruction) {
  FiniteTwoMetricSpace s(4);
  s.set(2, 0, 3, 0.7);
  std::array<std::size_t, 3> q{0, 2, 3};
  do {
    EXPECT_EQ(s.d(q[0], q[1], q[2]), 0.7);
  } while (std::next_permutation(q.begin(), q.end()));
  EXPECT_EQ(s.d(1, 2, 3), 0.0);
}

TEST(FiniteSpace, PhiMatchesOracle) {
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const auto s = random_projective_space(3 + rep % 4, rng);
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = 0; j < s.size(); ++j)
        EXPECT_EQ(s.phi(i, j), oracle::phi(table_of(s), s.size(), i, j));
  }
}

TEST(WitnessSet, FiniteSpacesUseEveryPoint) {
  const auto s = demo5_space();
  const auto W = WitnessSet::make(s.as_space(), WitnessKind::Sample, 2, 9);
  EXPECT_EQ(W.points.size(), 5u);
  EXPECT_EQ(W.count, 5u);
}

TEST(WitnessSet, EmptySetIsRejected) {
  const auto sphere = det_sphere_space();
  EXPECT_THROW(WitnessSet::make(sphere, WitnessKind::Sample, 0), std::invalid_argument);
  WitnessSet empty;
  const Point x = Eigen::Vector3d::UnitX(), y = Eigen::Vector3d::UnitY();
  EXPECT_THROW(eval_phi(sphere, x, y, empty), std::invalid_argument);
}

TEST(WitnessSet, DeterministicInSeed) {
  const auto sphere = det_sphere_space();
  const auto a = WitnessSet::make(sphere, WitnessKind::Sample, 50, 11);
  const auto b = WitnessSet::make(sphere, WitnessKind::Sample, 50, 11);
  const auto c = WitnessSet::make(sphere, WitnessKind::Sample, 50, 12);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) EXPECT_EQ(a.points[i], b.points[i]);
  EXPECT_NE(a.points[0], c.points[0]);
}

TEST(Phi, ExactlySymmetricOnTheSphere) {
  const auto sphere = det_sphere_space();
  const auto W = WitnessSet::make(sphere, WitnessKind::Sample, 30, 1);
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const Point x = sphere.sample(rng), y = sphere.sample(rng);
    EXPECT_EQ(eval_phi(sphere, x, y, W), eval_phi(sphere, y, x, W));
  }
}

TEST(Phi, SphereSupWitnessGivesCrossProductNorm) {
  const auto sphere = det_sphere_space();
  const auto W = WitnessSet::make(sphere, WitnessKind::Sample, 1, 1);
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector3d x = sphere.sample(rng), y = sphere.sample(rng);
    const double expect = oracle::norm(oracle::cross({x[0], x[1], x[2]}, {y[0], y[1], y[2]}));
    EXPECT_NEAR(eval_phi(sphere, x, y, W), expect, 1e-14);
  }
}

TEST(Phi, WitnessErrorVanishesOnFiniteSpaces) {
  const auto s = demo5_space().as_space();
  const auto W = WitnessSet::make(s, WitnessKind::Sample, 5);
  EXPECT_EQ(witness_error_estimate(s, W, 10, 0), 0.0);
}

TEST(Phi, WitnessErrorIsSmallWithSupWitness) {
  const auto sphere = det_sphere_space();
  const auto W = WitnessSet::make(sphere, WitnessKind::Sample, 16, 0);
  const double e = witness_error_estimate(sphere, W, 32, 1);
  EXPECT_GE(e, 0.0);
  EXPECT_LE(e, 1e-12);
}

TEST(Audit, Demo5SatisfiesEveryAxiom) {
  const auto s = demo5_space().as_space();
  const auto W = WitnessSet::make(s, WitnessKind::Sample, 5);
  const auto rep = audit(s, AuditConfig{}, W);
  for (const char* a : kAxioms) EXPECT_TRUE(rep.holds(a)) << a;
  EXPECT_TRUE(rep.all_hold());
}

TEST(Audit, ProjectiveSpacesSatisfyEveryAxiomExactly) {
  Rng rng(21);
  for (int rep = 0; rep < 10; ++rep) {
    const auto s = random_projective_space(3 + rep % 4, rng).as_space();
    const auto W = WitnessSet::make(s, WitnessKind::Sample, 1);
    const auto r = audit(s, AuditConfig{}, W);
    for (const char* a : kAxioms) EXPECT_LE(r.at(a).max_violation, 1e-12) << a;
  }
}

TEST(Audit, PlantedNegativeValueIsCaughtWithWitness) {
  auto t = demo5_space();
  t.set(0, 3, 4, -0.5);
  const auto s = t.as_space();
  const auto rep = audit(s, AuditConfig{}, WitnessSet::make(s, WitnessKind::Sample, 5));
  const auto& pos = rep.at("Pos");
  EXPECT_DOUBLE_EQ(pos.max_violation, 0.5);
  ASSERT_EQ(pos.witness.size(), 3u);
  std::vector<std::size_t> idx;
  for (const auto& p : pos.witness) idx.push_back(point_index(p));
  std::sort(idx.begin(), idx.end());
  EXPECT_EQ(idx, (std::vector<std::size_t>{0, 3, 4}));
  EXPECT_FALSE(rep.all_hold());
}

TEST(Audit, PlantedTetrahedralFailureIsCaught) {
  FiniteTwoMetricSpace t(4);
  t.set(0, 1, 2, 1.0);  // all other faces of {0,1,2,3} are zero
  const auto s = t.as_space();
  const auto rep = audit(s, AuditConfig{}, WitnessSet::make(s, WitnessKind::Sample, 4));
  EXPECT_DOUBLE_EQ(rep.at("Tetr").max_violation, 1.0);
  EXPECT_EQ(rep.at("Tetr").witness.size(), 4u);
}

TEST(Audit, SameSeedSameReport) {
  const auto ball = ball_space();
  const auto W = WitnessSet::make(ball, WitnessKind::Sample, 32, 4);
  AuditConfig cfg;
  cfg.triples = cfg.quadruples = cfg.quintuples = 300;
  cfg.seed = 8;
  const auto a = audit(ball, cfg, W), b = audit(ball, cfg, W);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].axiom, b.records[i].axiom);
    EXPECT_EQ(a.records[i].max_violation, b.records[i].max_violation);
    EXPECT_EQ(a.records[i].samples, b.records[i].samples);
  }
}

TEST(Audit, UnknownAxiomThrows) {
  const auto s = demo5_space().as_space();
  const auto rep = audit(s, AuditConfig{}, WitnessSet::make(s, WitnessKind::Sample, 5));
  EXPECT_THROW(rep.at("Nope"), std::out_of_range);
}

TEST(Quotient, AntipodesCollapse) {
  std::vector<Point> pts = {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(-1, 0, 0), Eigen::Vector3d(0, 1, 0),
                            Eigen::Vector3d(0, 0, 1)};
  const auto t = FiniteTwoMetricSpace::tabulate(det_sphere_space(), pts, 1e-15);
  const auto q = quotient_by_zero_phi(t);
  EXPECT_EQ(q.space.size(), 3u);
  EXPECT_EQ(q.class_of[0], q.class_of[1]);
  EXPECT_EQ(q.classes[q.class_of[0]], (std::vector<std::size_t>{0, 1}));
}

TEST(Quotient, AllZeroTableIsOneClass) {
  const FiniteTwoMetricSpace t(3);
  const auto q = quotient_by_zero_phi(t);
  EXPECT_EQ(q.space.size(), 1u);
  EXPECT_EQ(q.classes.front(), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Quotient, DistinctClassesAreApart) {
  Rng rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    auto base = random_projective_space(5, rng);
    // duplicate point 0 as point 5 so the quotient has something to do
    FiniteTwoMetricSpace t(6);
    auto src = [](std::size_t i) { return i == 5 ? std::size_t{0} : i; };
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i; j < 6; ++j)
        for (std::size_t k = j; k < 6; ++k) t.set(i, j, k, base.d(src(i), src(j), src(k)));
    const auto q = quotient_by_zero_phi(t);
    EXPECT_EQ(q.space.size(), 5u);
    for (std::size_t a = 0; a < q.space.size(); ++a)
      for (std::size_t b = a + 1; b < q.space.size(); ++b) EXPECT_GT(q.space.phi(a, b), 0.0);
  }
}

TEST(Surjective, IdentityHasFactorOne) {
  const auto s = demo5_space();
  std::vector<std::size_t> id(5);
  std::iota(id.begin(), id.end(), 0);
  const auto c = surjective_contraction_check(s, id);
  EXPECT_TRUE(c.is_surjective);
  ASSERT_TRUE(c.measured_k);
  EXPECT_EQ(*c.measured_k, 1.0);
}

TEST(Surjective, ConstantMapHasFactorZero) {
  const auto s = demo5_space();
  const std::vector<std::size_t> constant(5, 3);
  const auto c = surjective_contraction_check(s, constant);
  EXPECT_FALSE(c.is_surjective);
  ASSERT_TRUE(c.measured_k);
  EXPECT_EQ(*c.measured_k, 0.0);
}

TEST(Surjective, PermutationBreakingALineIsUnbounded) {
  const auto s = demo5_space();
  const std::vector<std::size_t> swap_c_p = {0, 1, 3, 2, 4};  // maps {a,b,c} to {a,b,p}
  const auto c = surjective_contraction_check(s, swap_c_p);
  ASSERT_TRUE(c.measured_k);
  EXPECT_TRUE(std::isinf(*c.measured_k));
}

TEST(Surjective, RejectsBadMaps) {
  const auto s = demo5_space();
  const std::vector<std::size_t> short_map = {0, 1};
  const std::vector<std::size_t> out_of_range = {0, 1, 2, 3, 9};
  EXPECT_THROW(surjective_contraction_check(s, short_map), std::invalid_argument);
  EXPECT_THROW(surjective_contraction_check(s, out_of_range), std::out_of_range);
}

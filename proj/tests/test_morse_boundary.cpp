#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace morse2d;
using testutil::id_of;
using testutil::load;
using testutil::tri;

TEST(FormalSum, MergeDropsZeros) {
  FormalSum a = FormalSum::unit(3);
  a.add_scaled(FormalSum::unit(1), 2);
  a.add_scaled(FormalSum::unit(3), -1);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a.coefficient(1), 2);
  EXPECT_EQ(a.coefficient(3), 0);
  a.scale(-1);
  EXPECT_EQ(a.coefficient(1), -2);
}

TEST(FormalSum, PromotesPastMachineWords) {
  FormalSum a = FormalSum::unit(0);
  for (int i = 0; i < 80; ++i) a.add_scaled(a, 1);
  Integer expect = 1;
  expect <<= 80;
  EXPECT_EQ(a.coefficient(0), expect);
}

TEST(BoundaryOp, DiskIsEmpty) {
  auto c = load("disk_fan.tri");
  auto op = calc_bdry_op(c, main_frame(c));
  EXPECT_EQ(op.delta1.rows(), 1u);
  EXPECT_EQ(op.delta1.cols(), 0u);
  EXPECT_EQ(op.delta2.rows(), 0u);
  EXPECT_EQ(op.delta2.cols(), 0u);
}

TEST(BoundaryOp, TetrahedronHasNoSaddles) {
  auto c = load("tetra.off");
  auto op = calc_bdry_op(c, main_frame(c));
  EXPECT_EQ(op.delta2.rows(), 0u);
  EXPECT_EQ(op.delta2.cols(), 1u);
  EXPECT_TRUE(op.delta2.is_zero());
}

TEST(BoundaryOp, ProjectivePlane) {
  auto c = load("rp2_6.tri");
  auto m = main_frame(c);
  auto op = calc_bdry_op(c, m);
  ASSERT_EQ(op.delta2.rows(), 1u);
  ASSERT_EQ(op.delta2.cols(), 1u);
  EXPECT_EQ(abs(op.delta2(0, 0)), 2);
  ASSERT_EQ(op.delta1.rows(), 1u);
  ASSERT_EQ(op.delta1.cols(), 1u);
  EXPECT_EQ(op.delta1(0, 0), 0);
  EXPECT_EQ(op.delta2(0, 0), enumerate_gradient_paths(m, c, op.critical[2][0], op.critical[1][0]));
}

TEST(BoundaryOp, TorusIsZero) {
  auto c = load("torus7.tri");
  auto op = calc_bdry_op(c, main_frame(c));
  EXPECT_EQ(op.delta2.rows(), 2u);
  EXPECT_TRUE(op.delta1.is_zero());
  EXPECT_TRUE(op.delta2.is_zero());
}

TEST(BoundaryOp, EmptyMatchingGivesIncidences) {
  auto c = load("tetra.off");
  MorseMatching m(c);
  const auto full = full_chain_complex(c);
  auto op = calc_bdry_op(c, m);
  EXPECT_EQ(op.delta1, full.d1);
  EXPECT_EQ(op.delta2, full.d2);
  const CellId t = id_of(c, {0, 1, 2});
  const CellId e = id_of(c, {0, 2});
  EXPECT_EQ(enumerate_gradient_paths(m, c, t, e), c.incidence(t, e));
}

TEST(BoundaryOp, RegularVertexCarriesTheFlowWithSign) {
  // v0 critical, [v0 v1] paired with v1, [v1 v2] critical: the flow from
  // [v1 v2] reaches v2 - v0
  auto c = tri(3, {{0, 1, 2}});
  MorseMatching m(c);
  m.match(1, id_of(c, {0, 1}));
  auto op = calc_bdry_op(c, m);
  const CellId f = id_of(c, {1, 2});
  EXPECT_EQ(op.entry(f, 1, 2), 1);
  EXPECT_EQ(op.entry(f, 1, 0), -1);
  EXPECT_EQ(enumerate_gradient_paths(m, c, f, 0), -1);
  EXPECT_TRUE((op.delta1 * op.delta2).is_zero());
}

TEST(BoundaryOp, MatchesPathEnumerationOnCorpus) {
  for (const auto& name : testutil::manifolds()) {
    auto c = load(name);
    auto m = main_frame(c);
    EXPECT_EQ(calc_bdry_op(c, m), enumerate_bdry_op(c, m)) << name;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
      for (const auto& r : {random_dgvf(c, seed), random_matching(c, seed)}) {
        auto op = calc_bdry_op(c, r);
        EXPECT_EQ(op, enumerate_bdry_op(c, r)) << name << " seed " << seed;
        EXPECT_TRUE((op.delta1 * op.delta2).is_zero()) << name << " seed " << seed;
      }
  }
}

TEST(BoundaryOp, MorseHomologyEqualsSimplicial) {
  for (const auto& name : testutil::manifolds()) {
    auto c = load(name);
    const auto h = oracle_homology(c);
    EXPECT_EQ(morse_homology(calc_bdry_op(c, main_frame(c))), h) << name;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      EXPECT_EQ(morse_homology(calc_bdry_op(c, random_dgvf(c, seed))), h) << name << " seed " << seed;
      EXPECT_EQ(morse_homology(calc_bdry_op(c, random_matching(c, seed))), h) << name << " seed " << seed;
    }
  }
}

TEST(BoundaryOp, OperationCountIsLinear) {
  auto c = load("torus7.tri");
  for (int level = 0; level < 4; ++level) {
    auto m = main_frame(c);
    OpCounter ops;
    calc_bdry_op(c, m, &ops);
    const auto upsilon = critical_cells(m, c).total();
    EXPECT_LE(ops.total(), 12 * upsilon * c.num_cells()) << level;
    EXPECT_LE(ops.total(), 12 * c.num_cells()) << level;
    c = subdivide(c);
  }
}

TEST(BoundaryOp, Deterministic) {
  auto c = load("genus2.tri");
  auto m = random_matching(c, 11);
  EXPECT_EQ(calc_bdry_op(c, m), calc_bdry_op(c, m));
}

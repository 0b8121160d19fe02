#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace morse2d;
using testutil::counts;
using testutil::id_of;
using testutil::load;
using testutil::tri;

TEST(RandomField, AcyclicAndReproducible) {
  for (const auto& name : testutil::manifolds()) {
    auto c = load(name);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      for (const auto& m : {random_dgvf(c, seed), random_matching(c, seed)}) {
        check_matching(m, c);
        EXPECT_TRUE(is_acyclic(m, c)) << name << " seed " << seed;
        EXPECT_EQ(critical_cells(m, c).euler(), c.euler_characteristic()) << name;
      }
      EXPECT_EQ(random_dgvf(c, seed), random_dgvf(c, seed));
      EXPECT_EQ(random_matching(c, seed), random_matching(c, seed));
    }
  }
}

TEST(RandomField, CollapseOnTetrahedron) {
  auto c = load("tetra.off");
  const auto k = critical_cells(random_dgvf(c, 42), c);
  EXPECT_GE(k.total(), 2u);
  EXPECT_EQ(k.total() % 2, 0u);
}

TEST(RandomField, CollapseOnTorus) {
  auto c = load("torus7.tri");
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto m = random_dgvf(c, seed);
    ASSERT_TRUE(is_acyclic(m, c));
    const auto k = critical_cells(m, c);
    EXPECT_GE(k.total(), 4u);
    EXPECT_EQ(k.c[2], 1u);
  }
}

TEST(RandomField, ShuffledMatchingIsOftenSuboptimal) {
  auto c = load("torus7.tri");
  int worse = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) worse += critical_cells(random_matching(c, seed), c).total() > 4;
  EXPECT_GT(worse, 0);
}

TEST(RandomField, CollapseCanBeSuboptimal) {
  auto c = subdivide(load("genus2.tri"));
  int worse = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) worse += critical_cells(random_dgvf(c, seed), c).total() > 6;
  EXPECT_GT(worse, 0);
}

TEST(RandomField, SingleVertex) {
  auto c = OrientedComplex2::from_triangles(1, {});
  EXPECT_EQ(counts(random_dgvf(c, 3), c), (std::array<std::size_t, 3>{1, 0, 0}));
  EXPECT_EQ(counts(random_matching(c, 3), c), (std::array<std::size_t, 3>{1, 0, 0}));
}

TEST(CancelPair, AdjacentCells) {
  auto c = tri(3, {{0, 1, 2}});
  MorseMatching m(c);
  const CellId e = id_of(c, {0, 1}), t = id_of(c, {0, 1, 2});
  EXPECT_EQ(count_gradient_paths(m, c, e, t), 1);
  EXPECT_EQ(cancel_pair(m, c, e, t), 1u);
  EXPECT_EQ(m.pair(e), t);
}

TEST(CancelPair, ReversesAStrip) {
  // fan of k triangles around vertex 0 with spoke i paired into the triangle
  // before it; the only path from the last triangle runs down to spoke 1
  for (std::int64_t k = 2; k <= 6; ++k) {
    std::vector<Triangle> tris;
    for (std::int64_t i = 1; i <= k; ++i) tris.push_back({0, i, i + 1});
    auto c = tri(static_cast<std::size_t>(k) + 2, tris);
    auto spoke = [&](std::int64_t i) { return id_of(c, {0, i}); };
    auto fan = [&](std::int64_t i) { return id_of(c, {0, i, i + 1}); };
    MorseMatching m(c);
    for (std::int64_t i = 2; i <= k; ++i) m.match(spoke(i), fan(i - 1));
    ASSERT_TRUE(is_acyclic(m, c));
    EXPECT_EQ(count_gradient_paths(m, c, spoke(1), fan(k)), 1);
    EXPECT_EQ(cancel_pair(m, c, spoke(1), fan(k)), static_cast<std::size_t>(k));
    EXPECT_TRUE(is_acyclic(m, c));
    for (std::int64_t i = 1; i <= k; ++i) EXPECT_EQ(m.pair(spoke(i)), fan(i));
  }
}

TEST(CancelPair, TwoPathsAreRejected) {
  auto c = tri(3, {{0, 1, 2}});
  MorseMatching m(c);
  m.match(0, id_of(c, {0, 2}));
  m.match(1, id_of(c, {1, 2}));
  ASSERT_TRUE(is_acyclic(m, c));
  EXPECT_EQ(count_gradient_paths(m, c, 2, id_of(c, {0, 1})), 2);
  const auto before = m;
  try {
    cancel_pair(m, c, 2, id_of(c, {0, 1}));
    FAIL() << "expected CancellationError";
  } catch (const CancellationError& e) {
    EXPECT_EQ(e.path_count(), 2);
  }
  EXPECT_EQ(m, before);
}

TEST(CancelPair, NoPathIsRejected) {
  auto c = tri(4, {{0, 1, 2}, {1, 2, 3}});
  MorseMatching m(c);
  EXPECT_EQ(count_gradient_paths(m, c, 3, id_of(c, {0, 1})), 0);
  EXPECT_THROW(cancel_pair(m, c, 3, id_of(c, {0, 1})), CancellationError);
}

TEST(Roots, FollowTheFlow) {
  auto c = tri(4, {{0, 1, 2}, {1, 2, 3}});
  MorseMatching m(c);
  m.match(id_of(c, {1, 2}), id_of(c, {1, 2, 3}));
  m.match(id_of(c, {0, 1}), id_of(c, {0, 1, 2}));
  m.match(1, id_of(c, {1, 3}));
  const auto tr = triangle_roots(m, c);
  EXPECT_EQ(tr[0], id_of(c, {0, 1}));
  EXPECT_EQ(tr[1], id_of(c, {0, 1}));
  const auto vr = vertex_roots(m, c);
  EXPECT_EQ(vr[1], 3);
  EXPECT_EQ(vr[0], 0);
}

TEST(SharedSaddle, TwoTrianglesOnASphere) {
  auto c = load("tetra.off");
  MorseMatching m(c);
  CancellationState st(c, m);
  const CellId king = c.first_id(2);
  auto s = shared_saddle(st, king);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(c.dim(s->first), 1);
  EXPECT_EQ(c.dim(s->second), 2);
  EXPECT_NE(s->second, king);
  EXPECT_THROW(shared_saddle(st, c.first_id(1)), Error);
}

TEST(FixBdry, PairsWithCriticalCoface) {
  auto c = tri(3, {{0, 1, 2}});
  CancellationState st(c, MorseMatching(c));
  fix_bdry(st, 2, 0);
  EXPECT_EQ(st.steps().size(), 1u);
  EXPECT_EQ(st.steps()[0].rule, "fix_bdry");
  EXPECT_EQ(st.upsilon(), 5u);
  fix_bdry(st, 1, 0);
  EXPECT_EQ(st.steps().size(), 1u);
}

TEST(FixBdry, CancelsWithTheRootTriangle) {
  auto c = tri(4, {{0, 1, 2}, {1, 2, 3}});
  MorseMatching m(c);
  m.match(id_of(c, {1, 2}), id_of(c, {1, 2, 3}));
  CancellationState st(c, m);
  fix_bdry(st, 2, 0);
  EXPECT_TRUE(st.matching().is_matched(id_of(c, {0, 1, 2})));
  EXPECT_TRUE(st.matching().is_matched(id_of(c, {1, 2, 3})));
  EXPECT_TRUE(is_acyclic(st.matching(), c));
}

TEST(KingFlow, PseudoOptimalOnCorpus) {
  for (const auto& name : testutil::manifolds()) {
    auto c = load(name);
    const auto target = testutil::golden_betti(name, 2);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      KingFlowOptions opt;
      opt.seed = seed;
      for (const auto& m : {random_dgvf(c, seed), random_matching(c, seed)}) {
        auto st = king_flow_state(c, m, opt);
        EXPECT_EQ(counts(st.matching(), c), target) << name << " seed " << seed;
        EXPECT_TRUE(is_acyclic(st.matching(), c));
      }
    }
  }
}

TEST(KingFlow, StepsShrinkUpsilonByTwo) {
  auto c = subdivide(load("klein.tri"));
  KingFlowOptions opt;
  opt.seed = 7;
  std::vector<CancellationStep> seen;
  opt.on_step = [&](const CancellationStep& s) { seen.push_back(s); };
  const auto m0 = random_matching(c, 7);
  auto st = king_flow_state(c, m0, opt);
  ASSERT_EQ(seen.size(), st.steps().size());
  std::size_t u = critical_cells(m0, c).total();
  for (const auto& s : seen) {
    EXPECT_EQ(s.upsilon_before, u);
    EXPECT_EQ(s.upsilon_after, u - 2);
    u = s.upsilon_after;
  }
  EXPECT_EQ(u, 4u);
}

TEST(KingFlow, OptimalInputNeedsNoSteps) {
  for (const char* name : {"tetra.off", "torus7.tri", "annulus.tri"}) {
    auto c = load(name);
    auto st = king_flow_state(c, main_frame(c));
    EXPECT_TRUE(st.steps().empty()) << name;
  }
}

TEST(KingFlow, EmptyFieldOnASphere) {
  auto c = load("icosa.off");
  auto m = king_flow(c, MorseMatching(c));
  EXPECT_EQ(counts(m, c), (std::array<std::size_t, 3>{1, 0, 1}));
}

TEST(KingFlow, RejectsBadInput) {
  auto c = load("tetra.off");
  MorseMatching m(c);
  // closed V-path around a triangle's boundary
  m.match(0, id_of(c, {0, 1}));
  m.match(1, id_of(c, {1, 2}));
  m.match(2, id_of(c, {0, 2}));
  EXPECT_THROW(king_flow(c, m), Error);
  EXPECT_THROW(king_flow(load("fin.tri"), MorseMatching(load("fin.tri"))), ManifoldError);
}

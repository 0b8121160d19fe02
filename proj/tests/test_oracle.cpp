#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace morse2d;
using testutil::load;
using testutil::tri;

TEST(Oracle, MatchesFrozenValues) {
  for (const auto& name : testutil::manifolds()) {
    auto c = load(name);
    const auto h = oracle_homology(c);
    for (int q = 0; q < 3; ++q) EXPECT_EQ(h.groups[q], testutil::golden_group(name, q)) << name << " H" << q;
    EXPECT_EQ(oracle_betti_mod(c, 2), testutil::golden_betti(name, 2)) << name;
    EXPECT_EQ(oracle_betti_mod(c, 3), testutil::golden_betti(name, 3)) << name;
  }
}

TEST(Oracle, NonManifoldsToo) {
  for (const char* name : {"bowtie.tri", "fin.tri"}) {
    const auto h = oracle_homology(load(name));
    for (int q = 0; q < 3; ++q) EXPECT_EQ(h.groups[q], testutil::golden_group(name, q)) << name;
  }
}

TEST(Oracle, DisjointTriangles) {
  auto c = tri(6, {{0, 1, 2}, {3, 4, 5}});
  const auto h = oracle_homology(c);
  EXPECT_EQ(h.groups[0], AbelianGroup::parse("Z^2"));
  EXPECT_TRUE(h.groups[1].is_trivial());
  EXPECT_TRUE(h.groups[2].is_trivial());
}

TEST(Oracle, EmptyFieldGivesSimplicialOperator) {
  auto c = load("mobius.tri");
  MorseMatching m(c);
  const auto op = oracle_morse_operator(c, m);
  const auto f = full_chain_complex(c);
  ASSERT_EQ(op.delta1.rows(), f.d1.rows());
  ASSERT_EQ(op.delta2.cols(), f.d2.cols());
  for (std::size_t i = 0; i < f.d2.rows(); ++i)
    for (std::size_t j = 0; j < f.d2.cols(); ++j) EXPECT_EQ(op.delta2(i, j), f.d2(i, j));
}

TEST(Oracle, MorseHomologyAgrees) {
  for (const auto& name : testutil::manifolds()) {
    auto c = load(name);
    if (c.num_cells() > kOracleCellCap) continue;
    const auto m = random_dgvf(c, 11);
    EXPECT_EQ(oracle_morse_homology(c, m).groups, oracle_homology(c).groups) << name;
  }
}

TEST(Oracle, CapIsEnforced) {
  auto c = subdivide(subdivide(load("icosa.off")));
  ASSERT_GT(c.num_cells(), kOracleCellCap);
  EXPECT_THROW(oracle_morse_operator(c, MorseMatching(c)), Error);
  EXPECT_NO_THROW(oracle_morse_operator(c, MorseMatching(c), c.num_cells()));
}

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using namespace morse2d;
using testutil::load;

namespace {

IntMatrix from_rows(std::vector<std::vector<int>> rows) {
  IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

// Fraction-free determinant.
Integer det(IntMatrix a) {
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && a(r, k) == 0) ++r;
      if (r == n) return 0;
      a.swap_rows(k, r);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

IntMatrix diagonal(const std::vector<int>& d) {
  IntMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

}  // namespace

TEST(SNF, ZeroMatrix) {
  auto r = smith_normal_form(IntMatrix(3, 4));
  EXPECT_EQ(r.rank, 0u);
  EXPECT_TRUE(r.diagonal.empty());
}

TEST(SNF, TwoByTwo) {
  auto r = smith_normal_form(from_rows({{2, 4}, {6, 8}}));
  std::vector<Integer> expect;
  for (const auto& x : testutil::golden()["snf"]["[[2,4],[6,8]]"]) expect.emplace_back(x.get<int>());
  EXPECT_EQ(r.diagonal, expect);
  EXPECT_EQ(r.left * from_rows({{2, 4}, {6, 8}}) * r.right, r.normal);
}

TEST(SNF, Identity) {
  auto r = smith_normal_form(IntMatrix::identity(5));
  EXPECT_EQ(r.rank, 5u);
  for (const auto& d : r.diagonal) EXPECT_EQ(d, 1);
}

TEST(SNF, EmptyDimensions) {
  EXPECT_EQ(smith_normal_form(IntMatrix(0, 3)).rank, 0u);
  EXPECT_EQ(smith_normal_form(IntMatrix(2, 0)).rank, 0u);
  EXPECT_EQ(smith_normal_form(IntMatrix(0, 0)).left.rows(), 0u);
}

TEST(SNF, RandomTransformsAreUnimodular) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> val(-9, 9), dim(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    IntMatrix a(static_cast<std::size_t>(dim(rng)), static_cast<std::size_t>(dim(rng)));
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = val(rng);
    auto r = smith_normal_form(a);
    ASSERT_EQ(r.left * a * r.right, r.normal);
    EXPECT_EQ(abs(det(r.left)), 1);
    EXPECT_EQ(abs(det(r.right)), 1);
    for (std::size_t i = 0; i < r.normal.rows(); ++i)
      for (std::size_t j = 0; j < r.normal.cols(); ++j)
        if (i != j || i >= r.rank) EXPECT_EQ(r.normal(i, j), 0);
    for (std::size_t i = 0; i + 1 < r.rank; ++i) EXPECT_EQ(r.diagonal[i + 1] % r.diagonal[i], 0);
  }
}

TEST(Group, ParseAndPrint) {
  EXPECT_EQ(AbelianGroup::parse("Z").to_string(), "Z");
  EXPECT_EQ(AbelianGroup::parse("0").to_string(), "0");
  EXPECT_EQ(AbelianGroup::parse("Z^2+Z_2").to_string(), "Z^2 + Z_2");
  EXPECT_EQ(AbelianGroup::parse(" Z_2 + Z_3 ").to_string(), "Z_6");
  EXPECT_EQ(AbelianGroup::parse("Z_4+Z_6").to_string(), "Z_2 + Z_12");
  EXPECT_EQ(AbelianGroup::parse("Z_2^3").torsion.size(), 3u);
  EXPECT_EQ(AbelianGroup::parse("Z+Z_2+Z").free_rank, 2u);
  for (const char* bad : {"", "Q", "Z_1", "Z_", "Z^x", "Z_2^", "Z++Z", "Z_-3"})
    EXPECT_THROW(AbelianGroup::parse(bad), Error) << bad;
}

TEST(Group, Canonical) {
  EXPECT_TRUE(AbelianGroup::parse("Z_2+Z_4").is_canonical());
  AbelianGroup g{0, {4, 2}};
  EXPECT_FALSE(g.is_canonical());
  EXPECT_EQ(AbelianGroup::canonical(0, {4, 2, 1, 0}).to_string(), "Z + Z_2 + Z_4");
}

TEST(Homology, FromChainOnCorpus) {
  for (const char* name : {"tetra.off", "rp2_6.tri", "klein.tri", "torus7.tri", "mobius.tri", "genus2.tri"}) {
    auto h = oracle_homology(load(name));
    for (int q = 0; q < 3; ++q) EXPECT_EQ(h.groups[static_cast<std::size_t>(q)], testutil::golden_group(name, q)) << name << q;
  }
}

TEST(Homology, RejectsNonChain) {
  EXPECT_THROW(homology_from_chain(from_rows({{1, 1}}), from_rows({{1}, {1}})), Error);
  EXPECT_THROW(homology_from_chain(IntMatrix(1, 2), IntMatrix(3, 1)), Error);
}

TEST(Homology, EmptyDimensions) {
  // a single point
  auto h = homology_from_chain(IntMatrix(1, 0), IntMatrix(0, 0));
  EXPECT_EQ(h.groups[0].to_string(), "Z");
  EXPECT_EQ(h.groups[1].to_string(), "0");
}

TEST(Coefficients, KleinModTwo) {
  auto hz = oracle_homology(load("klein.tri"));
  auto h2 = homology_with_coefficients(hz, AbelianGroup::cyclic(2));
  EXPECT_EQ(h2.groups[0].to_string(), "Z_2");
  EXPECT_EQ(h2.groups[1].to_string(), "Z_2 + Z_2");
  EXPECT_EQ(h2.groups[2].to_string(), "Z_2");
  EXPECT_EQ(h2.betti, testutil::golden_betti("klein.tri", 2));
}

TEST(Coefficients, ProjectivePlaneModThree) {
  auto hz = oracle_homology(load("rp2_6.tri"));
  auto h3 = homology_with_coefficients(hz, AbelianGroup::cyclic(3));
  EXPECT_EQ(h3.groups[0].to_string(), "Z_3");
  EXPECT_EQ(h3.groups[1].to_string(), "0");
  EXPECT_EQ(h3.groups[2].to_string(), "0");
  EXPECT_EQ(h3.betti, testutil::golden_betti("rp2_6.tri", 3));
}

TEST(Coefficients, IntegersAreIdentity) {
  for (const auto& name : testutil::manifolds()) {
    auto hz = oracle_homology(load(name));
    EXPECT_EQ(homology_with_coefficients(hz, AbelianGroup::integers()), hz) << name;
  }
}

TEST(Coefficients, ModPBettiMatchesRankOracle) {
  for (const auto& name : testutil::manifolds()) {
    auto c = load(name);
    auto hz = oracle_homology(c);
    for (int p : {2, 3}) {
      auto hp = homology_with_coefficients(hz, AbelianGroup::cyclic(p));
      EXPECT_EQ(hp.betti, oracle_betti_mod(c, p)) << name << " mod " << p;
      EXPECT_EQ(hp.betti, testutil::golden_betti(name, p)) << name << " mod " << p;
      EXPECT_EQ(hp.euler(), c.euler_characteristic());
    }
  }
}

TEST(Coefficients, MixedGroup) {
  auto hz = oracle_homology(load("rp2_6.tri"));
  auto h = homology_with_coefficients(hz, AbelianGroup::parse("Z+Z_4"));
  EXPECT_EQ(h.groups[0].to_string(), "Z + Z_4");
  EXPECT_EQ(h.groups[1].to_string(), "Z_2 + Z_2");
  EXPECT_EQ(h.groups[2].to_string(), "Z_2");
  EXPECT_THROW(homology_with_coefficients(hz, AbelianGroup{0, {4, 2}}), Error);
}

TEST(ModRank, Examples) {
  EXPECT_EQ(mod_m_rank(IntMatrix::identity(3), 2), 3u);
  EXPECT_EQ(mod_m_rank(diagonal({2, 4}), 2), 0u);
  const auto f = full_chain_complex(load("rp2_6.tri"));
  EXPECT_EQ(mod_m_rank(f.d2, 2) + 1, integer_rank(f.d2));
  EXPECT_EQ(mod_m_rank(f.d2, 3), integer_rank(f.d2));
  EXPECT_THROW(mod_m_rank(f.d2, 1), Error);
}

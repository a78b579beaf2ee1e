// Copyright 2026 The seedalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "seedalign/fixture.hpp"
#include "seedalign/seedx.hpp"
#include "seedalign/simcore.hpp"

namespace sa = seedalign;

namespace {

sa::EmbeddingTable table(std::initializer_list<std::initializer_list<double>> r) {
  sa::EmbeddingTable t(r.size(), r.begin()->size());
  std::size_t i = 0;
  for (const auto& row : r) {
    std::size_t j = 0;
    for (double v : row) t.vectors(i, j++) = v;
    ++i;
  }
  return t;
}

sa::SimilarityMatrix from_dense(const oracle::Dense& d) {
  sa::SimilarityMatrix m(d.size(), d.front().size());
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d[i].size(); ++j) m(i, j) = d[i][j];
  return m;
}

oracle::Dense dense_cos(const sa::EmbeddingTable& a, const sa::EmbeddingTable& b) {
  oracle::Dense out(a.rows(), std::vector<double>(b.rows()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::vector<double> ai(a.vectors.row(i).begin(), a.vectors.row(i).end());
    for (std::size_t j = 0; j < b.rows(); ++j) {
      std::vector<double> bj(b.vectors.row(j).begin(), b.vectors.row(j).end());
      out[i][j] = oracle::cosine(ai, bj);
    }
  }
  return out;
}

}  // namespace

TEST(Neighborhood, SingleNeighbor) {
  const sa::KnowledgeGraph kg(1, 2, 1, {{0, 0, 1}});
  const auto sem = table({{1, 2}, {3, 4}});
  const auto n = sa::neighborhood_semantic_embedding(kg, sem);
  EXPECT_DOUBLE_EQ(n.vectors(0, 0), 3.0);
  EXPECT_DOUBLE_EQ(n.vectors(0, 1), 4.0);
  EXPECT_DOUBLE_EQ(n.vectors(1, 0), 1.0);
}

TEST(Neighborhood, PerTermNormalization) {
  // deg(0) = 2 with neighbours 1 (deg 1) and 2 (deg 4).
  const sa::KnowledgeGraph kg(1, 6, 1, {{0, 0, 1}, {0, 0, 2}, {2, 0, 3}, {2, 0, 4}, {2, 0, 5}});
  const auto sem = table({{0, 0}, {1, 0}, {0, 1}, {5, 5}, {5, 5}, {5, 5}});
  const auto n = sa::neighborhood_semantic_embedding(kg, sem);
  EXPECT_NEAR(n.vectors(0, 0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(n.vectors(0, 1), 1.0 / std::sqrt(8.0), 1e-15);
}

TEST(Neighborhood, IsolatedFlagged) {
  const sa::KnowledgeGraph kg(1, 3, 1, {{0, 0, 1}});
  const auto n = sa::neighborhood_semantic_embedding(kg, table({{1, 0}, {0, 1}, {1, 1}}));
  EXPECT_TRUE(n.is_missing(2));
  EXPECT_EQ(n.vectors(2, 0), 0.0);
  EXPECT_FALSE(n.is_missing(0));
}

class Fused : public ::testing::Test {
 protected:
  sa::EmbeddingTable s1 = table({{1, 0}, {0, 1}, {0.3, 0.7}});
  sa::EmbeddingTable s2 = table({{1, 0.1}, {0.6, 0.8}, {0.2, 0.9}});
  sa::EmbeddingTable n1 = table({{0.5, 0.5}, {1, -0.2}, {0.1, 0.4}});
  sa::EmbeddingTable n2 = table({{0.2, 1}, {0.9, 0.1}, {0.4, 0.4}});
};

TEST_F(Fused, DegenerateWeights) {
  sa::SeedExpansionConfig cfg;
  cfg.q = 2;
  cfg.epsilon = 1.0;
  const auto ms = sa::csls_adjust(sa::cosine_matrix(s1, s2), {2});
  EXPECT_EQ(sa::fused_semantic_similarity(s1, s2, n1, n2, cfg), ms);
  cfg.epsilon = 0.0;
  const auto mn = sa::csls_adjust(sa::cosine_matrix(n1, n2), {2});
  EXPECT_EQ(sa::fused_semantic_similarity(s1, s2, n1, n2, cfg), mn);
}

TEST_F(Fused, HalfIsMeanOfOracles) {
  sa::SeedExpansionConfig cfg;
  cfg.q = 2;
  const auto a = oracle::csls(dense_cos(s1, s2), 2);
  const auto b = oracle::csls(dense_cos(n1, n2), 2);
  const auto got = sa::fused_semantic_similarity(s1, s2, n1, n2, cfg);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(got(i, j), 0.5 * (a[i][j] + b[i][j]), 1e-12);
}

TEST(Expand, Examples) {
  sa::SeedExpansionConfig cfg;
  const auto m = from_dense({{0.9, 0.1}, {0.1, 0.8}});
  const auto s = sa::expand_seeds(m, cfg, {});
  EXPECT_EQ(s.count(sa::Provenance::kInit), 2u);

  sa::SeedSet full;
  full.add({0, 1});
  full.add({1, 0});
  EXPECT_EQ(sa::expand_seeds(m, cfg, full), full);

  cfg.theta_sem = 0.95;
  EXPECT_TRUE(sa::expand_seeds(m, cfg, {}).empty());
}

TEST(Expand, PreConflictDropped) {
  // (0,0) is a mutual best pair but entity 0 of G1 is already paired with 1.
  const auto m = from_dense({{0.9, 0.1}, {0.1, 0.05}});
  sa::SeedSet s;
  s.add({0, 1});
  const auto e = sa::expand_seeds(m, {}, s);
  EXPECT_EQ(e, s);
}

TEST(Expand, MonotoneInSeedsAndThreshold) {
  std::mt19937_64 gen(31);
  for (int t = 0; t < 30; ++t) {
    const auto m = from_dense(oracle::random_dense(gen, 10, 12));
    sa::SeedSet pre;
    pre.add({static_cast<sa::EntityId>(t % 10), static_cast<sa::EntityId>(t % 12)});
    sa::SeedExpansionConfig lo, hi;
    lo.theta_sem = -0.2;
    hi.theta_sem = 0.4;
    const auto a = sa::expand_seeds(m, lo, pre);
    const auto b = sa::expand_seeds(m, hi, pre);
    for (const auto& p : pre.pairs()) EXPECT_EQ(*a.partner_of_left(p.e1), p.e2);
    for (const auto& p : b.pairs()) EXPECT_EQ(*a.partner_of_left(p.e1), p.e2);
    EXPECT_LE(b.size(), a.size());
  }
}

TEST(Expand, IdenticalGraphsRecoverIdentity) {
  sa::FixtureConfig fc;
  fc.entities = 60;
  fc.triples = 180;
  const auto fx = sa::generate_fixture(fc);
  const auto nbr = sa::neighborhood_semantic_embedding(fx.kg1, fx.sem1);
  sa::SeedExpansionConfig cfg;
  const auto m = sa::fused_semantic_similarity(fx.sem1, fx.sem1, nbr, nbr, cfg);
  const auto s = sa::expand_seeds(m, cfg, {});
  std::size_t strict = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    bool is_strict = m(i, i) > cfg.theta_sem;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (j != i && !(m(i, i) > m(i, j))) is_strict = false;
    if (is_strict) {
      ++strict;
      ASSERT_TRUE(s.partner_of_left(static_cast<sa::EntityId>(i)).has_value());
      EXPECT_EQ(*s.partner_of_left(static_cast<sa::EntityId>(i)), i);
    }
  }
  EXPECT_GT(strict, 50u);
  for (const auto& p : s.pairs()) EXPECT_EQ(p.e1, p.e2);
}

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

#include <set>

#include "oracles.hpp"
#include "seedalign/error.hpp"
#include "seedalign/simcore.hpp"

namespace sa = seedalign;

namespace {

sa::SimilarityMatrix from_dense(const oracle::Dense& d) {
  sa::SimilarityMatrix m(d.size(), d.front().size());
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d[i].size(); ++j) m(i, j) = d[i][j];
  return m;
}

sa::Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  sa::Matrix m(r.size(), r.begin()->size());
  std::size_t i = 0;
  for (const auto& row : r) {
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST(Cosine, Examples) {
  EXPECT_DOUBLE_EQ(sa::cosine_matrix(rows({{1, 0}}), rows({{1, 0}}))(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(sa::cosine_matrix(rows({{1, 0}}), rows({{0, 1}}))(0, 0), 0.0);
  const auto m = sa::cosine_matrix(rows({{1, 0}, {0, 1}}), rows({{1, 0}, {0.6, 0.8}}));
  EXPECT_NEAR(m(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(m(0, 1), 0.6, 1e-15);
  EXPECT_NEAR(m(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(m(1, 1), 0.8, 1e-15);
}

TEST(Cosine, MatchesOracle) {
  std::mt19937_64 gen(3);
  const auto a = oracle::random_dense(gen, 7, 5);
  const auto b = oracle::random_dense(gen, 4, 5);
  sa::Matrix ma(7, 5), mb(4, 5);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t k = 0; k < 5; ++k) ma(i, k) = a[i][k];
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 5; ++k) mb(i, k) = b[i][k];
  const auto m = sa::cosine_matrix(ma, mb);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(m(i, j), oracle::cosine(a[i], b[j]), 1e-12);
}

TEST(Cosine, MissingAndZeroRowsExcluded) {
  const std::vector<std::uint8_t> miss{0, 1};
  const auto m = sa::cosine_matrix(rows({{1, 0}, {1, 1}}), rows({{1, 0}, {0, 0}}), miss, {});
  EXPECT_TRUE(sa::is_excluded(m(1, 0)));
  EXPECT_TRUE(sa::is_excluded(m(0, 1)));
  EXPECT_DOUBLE_EQ(m(0, 0), 1.0);
}

TEST(Cosine, DimMismatch) {
  try {
    sa::cosine_matrix(rows({{1, 0}}), rows({{1, 0, 0}}));
    FAIL();
  } catch (const sa::Error& e) {
    EXPECT_EQ(e.kind(), sa::ErrorKind::kDimMismatch);
  }
}

TEST(Csls, Examples) {
  const auto out = sa::csls_adjust(from_dense({{1, 0.6}, {0, 0.8}}), {1});
  EXPECT_NEAR(out(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(out(0, 1), -0.6, 1e-15);
  EXPECT_NEAR(out(1, 0), -1.8, 1e-15);
  EXPECT_NEAR(out(1, 1), 0.0, 1e-15);

  const auto c = sa::csls_adjust(sa::SimilarityMatrix(3, 4, 0.37), {2});
  for (double v : c.values()) EXPECT_NEAR(v, 0.0, 1e-15);

  const auto one = sa::csls_adjust(from_dense({{0.4}}), {1});
  EXPECT_NEAR(one(0, 0), 0.0, 1e-15);
}

TEST(Csls, QOutOfRange) {
  const auto m = from_dense({{1, 0.6}, {0, 0.8}});
  for (std::size_t q : {0u, 3u}) {
    try {
      sa::csls_adjust(m, {q});
      FAIL() << q;
    } catch (const sa::Error& e) {
      EXPECT_EQ(e.kind(), sa::ErrorKind::kQOutOfRange);
    }
  }
}

TEST(Csls, MatchesBruteForce) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<std::size_t> dim(1, 20);
  for (int t = 0; t < 50; ++t) {
    const std::size_t r = dim(gen), c = dim(gen);
    const auto d = oracle::random_dense(gen, r, c);
    const std::size_t q = std::uniform_int_distribution<std::size_t>(1, std::min(r, c))(gen);
    const auto want = oracle::csls(d, q);
    const auto got = sa::csls_adjust(from_dense(d), {q});
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) ASSERT_NEAR(got(i, j), want[i][j], 1e-9);
  }
}

// csls(M) + row means + column means == 2M.
TEST(Csls, IdentityProperty) {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 20; ++t) {
    const auto m = from_dense(oracle::random_dense(gen, 9, 13));
    const sa::CslsParams p{4};
    const auto out = sa::csls_adjust(m, p);
    const auto means = sa::csls_means(m, p);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        EXPECT_NEAR(out(i, j) + means.row[i] + means.col[j], 2.0 * m(i, j), 1e-12);
  }
}

TEST(Csls, ShiftInvariance) {
  std::mt19937_64 gen(8);
  for (double c : {-3.0, 0.25, 10.0}) {
    const auto d = oracle::random_dense(gen, 6, 8);
    auto shifted = from_dense(d);
    for (double& v : shifted.values()) v += c;
    const auto a = sa::csls_adjust(from_dense(d), {3});
    const auto b = sa::csls_adjust(shifted, {3});
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.values()[i], b.values()[i], 1e-12);
  }
}

TEST(Csls, SelfSimilarityExcludesDiagonal) {
  const auto m = from_dense({{1.0, 0.2, 0.5}, {0.2, 1.0, 0.1}, {0.5, 0.1, 1.0}});
  const auto means = sa::csls_means(m, {1}, true);
  EXPECT_DOUBLE_EQ(means.row[0], 0.5);
  EXPECT_DOUBLE_EQ(means.row[1], 0.2);
  EXPECT_DOUBLE_EQ(means.col[2], 0.5);
}

TEST(Mutual, Examples) {
  const auto m = from_dense({{0.9, 0.1}, {0.1, 0.8}});
  const auto p = sa::mutual_nearest_pairs(m, 0.5, {});
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0], (sa::ScoredPair{0, 0, 0.9}));
  EXPECT_EQ(p[1], (sa::ScoredPair{1, 1, 0.8}));
  EXPECT_TRUE(sa::mutual_nearest_pairs(from_dense({{0.9, 0.9}}), 0.5, {}).empty());
  const auto hi = sa::mutual_nearest_pairs(m, 0.85, {});
  ASSERT_EQ(hi.size(), 1u);
  EXPECT_EQ(hi[0], (sa::ScoredPair{0, 0, 0.9}));
}

TEST(Mutual, FullySeededPairBlocked) {
  const auto m = from_dense({{0.9, 0.1}, {0.1, 0.8}});
  sa::SeedSet s;
  s.add({0, 0});
  const auto p = sa::mutual_nearest_pairs(m, 0.5, s);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].i, 1u);
}

TEST(Mutual, MatchesPredicateOracle) {
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<std::size_t> dim(1, 12);
  std::bernoulli_distribution coin(0.3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t r = dim(gen), c = dim(gen);
    auto d = oracle::random_dense(gen, r, c);
    // Quantize some matrices so ties occur.
    if (t % 3 == 0)
      for (auto& row : d)
        for (auto& v : row) v = std::round(v * 4.0) / 4.0;
    sa::SeedSet s;
    std::vector<bool> sl(r, false), sr(c, false);
    for (std::size_t i = 0; i < std::min(r, c); ++i) {
      if (coin(gen)) {
        const std::size_t j = (i * 7 + t) % c;
        if (s.try_add({static_cast<sa::EntityId>(i), static_cast<sa::EntityId>(j)})) {
          sl[i] = true;
          sr[j] = true;
        }
      }
    }
    const double th = std::uniform_real_distribution<double>(-0.5, 0.8)(gen);
    const auto want = oracle::mutual_pairs(d, th, sl, sr);
    const auto got = sa::mutual_nearest_pairs(from_dense(d), th, s);
    ASSERT_EQ(got.size(), want.size()) << "matrix " << t;
    std::set<sa::EntityId> li, rj;
    for (std::size_t k = 0; k < got.size(); ++k) {
      EXPECT_EQ(got[k].i, want[k].i);
      EXPECT_EQ(got[k].j, want[k].j);
      EXPECT_EQ(got[k].score, want[k].score);
      EXPECT_GT(got[k].score, th);
      EXPECT_TRUE(li.insert(got[k].i).second);
      EXPECT_TRUE(rj.insert(got[k].j).second);
    }
  }
}

TEST(Mutual, ColumnPermutationEquivariance) {
  std::mt19937_64 gen(23);
  for (int t = 0; t < 20; ++t) {
    const auto d = oracle::random_dense(gen, 8, 10);
    std::vector<std::size_t> perm(10);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    oracle::Dense pd(8, std::vector<double>(10));
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 10; ++j) pd[i][perm[j]] = d[i][j];
    const auto a = sa::mutual_nearest_pairs(from_dense(d), -1.0, {});
    const auto b = sa::mutual_nearest_pairs(from_dense(pd), -1.0, {});
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      EXPECT_EQ(b[k].i, a[k].i);
      EXPECT_EQ(b[k].j, perm[a[k].j]);
    }
  }
}

TEST(TopK, Examples) {
  const auto r = sa::topk_rows(from_dense({{0.1, 0.9, 0.5}}), 2);
  EXPECT_EQ(r[0], (std::vector<std::uint32_t>{1, 2}));
  const auto t = sa::topk_rows(from_dense({{0.5, 0.5}}), 1);
  EXPECT_EQ(t[0], (std::vector<std::uint32_t>{0}));
  try {
    sa::topk_rows(from_dense({{0.5, 0.5}}), 3);
    FAIL();
  } catch (const sa::Error& e) {
    EXPECT_EQ(e.kind(), sa::ErrorKind::kKOutOfRange);
  }
}

TEST(TopK, SymmetricMatchesSortOracle) {
  std::mt19937_64 gen(29);
  auto d = oracle::random_dense(gen, 6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < i; ++j) d[i][j] = d[j][i];
  const auto got = sa::topk_rows(from_dense(d), 3, true);
  for (std::size_t i = 0; i < 6; ++i) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < 6; ++j)
      if (j != i) idx.push_back(j);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return d[i][a] != d[i][b] ? d[i][a] > d[i][b] : a < b;
    });
    ASSERT_EQ(got[i].size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(got[i][k], idx[k]);
  }
}

TEST(MatrixDump, RoundTrip) {
  const auto dir = oracle::temp_dir("simcore_dump");
  const auto m = from_dense({{0.5, -0.25}, {1.0, 0.125}, {3.0, 4.0}});
  sa::write_matrix_dump(dir / "m.bin", m);
  EXPECT_EQ(sa::read_matrix_dump(dir / "m.bin"), m);
}

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

// Brute-force reference implementations and fixture helpers shared by the
// unit and acceptance tests. Nothing here calls into the library code it is
// used to check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense random_dense(std::mt19937_64& gen, std::size_t rows, std::size_t cols,
                          double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Dense m(rows, std::vector<double>(cols));
  for (auto& r : m)
    for (auto& x : r) x = u(gen);
  return m;
}

inline double mean_top(std::vector<double> v, std::size_t q) {
  std::sort(v.begin(), v.end(), std::greater<>());
  q = std::min(q, v.size());
  double s = 0.0;
  for (std::size_t i = 0; i < q; ++i) s += v[i];
  return s / static_cast<double>(q);
}

// 2 M - row top-Q mean - column top-Q mean, full sort per row and column.
inline Dense csls(const Dense& m, std::size_t q) {
  const std::size_t rows = m.size();
  const std::size_t cols = m.front().size();
  std::vector<double> ra(rows), ca(cols);
  for (std::size_t i = 0; i < rows; ++i) ra[i] = mean_top(m[i], q);
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<double> col(rows);
    for (std::size_t i = 0; i < rows; ++i) col[i] = m[i][j];
    ca[j] = mean_top(col, q);
  }
  Dense out(rows, std::vector<double>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out[i][j] = 2.0 * m[i][j] - ra[i] - ca[j];
  return out;
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ab += a[k] * b[k];
    aa += a[k] * a[k];
    bb += b[k] * b[k];
  }
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

struct Triple3 {
  std::uint32_t i, j;
  double score;
};

// Exhaustive four-condition predicate; seeded_left/right mark paired entities.
inline std::vector<Triple3> mutual_pairs(const Dense& m, double threshold,
                                         const std::vector<bool>& seeded_left,
                                         const std::vector<bool>& seeded_right) {
  std::vector<Triple3> out;
  const std::size_t rows = m.size();
  const std::size_t cols = m.front().size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      bool row_max = true, col_max = true;
      for (std::size_t jj = 0; jj < cols; ++jj)
        if (jj != j && !(m[i][j] > m[i][jj])) row_max = false;
      for (std::size_t ii = 0; ii < rows; ++ii)
        if (ii != i && !(m[i][j] > m[ii][j])) col_max = false;
      const bool free_end = !seeded_left[i] || !seeded_right[j];
      if (row_max && col_max && m[i][j] > threshold && free_end) {
        out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), m[i][j]});
      }
    }
  }
  return out;
}

// 1-based rank by full sort: descending score, ties to the lower index.
inline std::size_t rank(const std::vector<double>& row, std::size_t target) {
  std::vector<std::size_t> idx(row.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return row[a] != row[b] ? row[a] > row[b] : a < b;
  });
  return static_cast<std::size_t>(std::find(idx.begin(), idx.end(), target) - idx.begin()) + 1;
}

inline double hits(const Dense& m, const std::vector<std::pair<std::size_t, std::size_t>>& test,
                   std::size_t k) {
  double n = 0.0;
  for (auto [i, j] : test) n += rank(m[i], j) <= k ? 1.0 : 0.0;
  return n / static_cast<double>(test.size());
}

inline double mrr(const Dense& m, const std::vector<std::pair<std::size_t, std::size_t>>& test) {
  double s = 0.0;
  for (auto [i, j] : test) s += 1.0 / static_cast<double>(rank(m[i], j));
  return s / static_cast<double>(test.size());
}

// One log term of the margin loss: log(1 + sum_n exp(g (l + pos - neg_n))).
inline double log_term(double gamma, double lambda, double pos, const std::vector<double>& negs) {
  double s = 1.0;
  for (double n : negs) s += std::exp(gamma * (lambda + pos - n));
  return std::log(s);
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("seedalign_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace oracle

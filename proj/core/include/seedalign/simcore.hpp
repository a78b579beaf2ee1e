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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "seedalign/kg.hpp"
#include "seedalign/matrix.hpp"

namespace seedalign {

// Score given to entries that must never win an argmax (rows or columns of
// entities without usable vectors). CSLS leaves such entries untouched and
// ignores them when averaging.
inline constexpr double kExcludedScore = -1.0e300;
inline bool is_excluded(double score) { return score <= kExcludedScore; }

// |rows| x |cols| dense score matrix (cosine, CSLS or fused scores).
class SimilarityMatrix : public Matrix {
 public:
  using Matrix::Matrix;
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(Matrix m) : Matrix(std::move(m)) {}
};

struct CslsParams {
  std::size_t q = 15;
};

// cos(a_i, b_j). Rows that are flagged missing, or have zero norm, produce
// kExcludedScore across their whole row/column.
SimilarityMatrix cosine_matrix(const Matrix& a, const Matrix& b,
                               std::span<const std::uint8_t> a_missing = {},
                               std::span<const std::uint8_t> b_missing = {});
SimilarityMatrix cosine_matrix(const EmbeddingTable& a, const EmbeddingTable& b);

struct CslsMeans {
  std::vector<double> row;  // mean of the q largest entries of each row
  std::vector<double> col;  // mean of the q largest entries of each column
};

// With self_similarity the diagonal is left out of both means (the matrix
// must be square). Excluded entries never count; a row with fewer than q
// valid entries averages what it has.
CslsMeans csls_means(const SimilarityMatrix& m, const CslsParams& params,
                     bool self_similarity = false);

// out(i, j) = 2 m(i, j) - row_mean(i) - col_mean(j).
SimilarityMatrix csls_adjust(const SimilarityMatrix& m, const CslsParams& params,
                             bool self_similarity = false);

struct ScoredPair {
  EntityId i;
  EntityId j;
  double score;

  friend bool operator==(const ScoredPair&, const ScoredPair&) = default;
};

// Pairs (i, j) where m(i, j) is the strict maximum of row i and of column j,
// exceeds `threshold`, and at least one endpoint is unpaired in `excluded`.
// Conflicts are then resolved greedily by descending score. Sorted by i.
std::vector<ScoredPair> mutual_nearest_pairs(const SimilarityMatrix& m, double threshold,
                                             const SeedSet& excluded);

// Indices of the k largest entries per row, ties to the lower index.
// Excluded entries are skipped, so a row may come back short.
std::vector<std::vector<std::uint32_t>> topk_rows(const SimilarityMatrix& m, std::size_t k,
                                                  bool self_similarity = false);

// Debug dump: char[8] "SAMAT001", u64 rows, u64 cols, f32[rows*cols], LE.
void write_matrix_dump(const std::filesystem::path& path, const SimilarityMatrix& m);
SimilarityMatrix read_matrix_dump(const std::filesystem::path& path);

}  // namespace seedalign

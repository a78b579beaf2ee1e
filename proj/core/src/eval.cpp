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

#include "seedalign/eval.hpp"

#include "seedalign/error.hpp"

namespace seedalign {

const char* direction_name(Direction d) {
  switch (d) {
    case Direction::kLeftToRight: return "l2r";
    case Direction::kRightToLeft: return "r2l";
    case Direction::kMean: return "mean";
  }
  return "?";
}

std::size_t rank_in_row(const SimilarityMatrix& m, std::size_t row, std::size_t target,
                        std::span<const std::uint8_t> excluded_cols) {
  const double score = m(row, target);
  std::size_t rank = 1;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (j == target) continue;
    if (!excluded_cols.empty() && excluded_cols[j]) continue;
    const double v = m(row, j);
    if (v > score || (v == score && j < target)) ++rank;
  }
  return rank;
}

namespace {

void check_test(const SimilarityMatrix& m, const SeedSet& test) {
  if (test.empty()) throw Error(ErrorKind::kEmptyTestSet, "no test pairs");
  for (const auto& p : test.pairs()) {
    if (p.e1 >= m.rows() || p.e2 >= m.cols()) {
      throw Error(ErrorKind::kOutOfRangeId, "test pair outside the score matrix");
    }
  }
}

std::vector<std::size_t> ranks(const SimilarityMatrix& m, const SeedSet& test,
                               std::span<const std::uint8_t> excluded_cols) {
  check_test(m, test);
  const auto& pairs = test.pairs();
  std::vector<std::size_t> out(pairs.size());
  const auto count = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto& p = pairs[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(k)] = rank_in_row(m, p.e1, p.e2, excluded_cols);
  }
  return out;
}

SimilarityMatrix transpose(const SimilarityMatrix& m) {
  SimilarityMatrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  }
  return t;
}

SeedSet swapped(const SeedSet& s) {
  SeedSet out;
  for (const auto& p : s.pairs()) out.add({p.e2, p.e1, p.provenance});
  return out;
}

EvalReport evaluate_one(const SimilarityMatrix& m, const SeedSet& test,
                        const std::vector<std::size_t>& ks,
                        std::span<const std::uint8_t> excluded_cols) {
  const std::vector<std::size_t> r = ranks(m, test, excluded_cols);
  EvalReport report;
  report.n_test = r.size();
  for (std::size_t k : ks) {
    std::size_t hit = 0;
    for (std::size_t rank : r) hit += rank <= k ? 1 : 0;
    report.hits[k] = static_cast<double>(hit) / static_cast<double>(r.size());
  }
  double sum = 0.0;
  for (std::size_t rank : r) sum += 1.0 / static_cast<double>(rank);
  report.mrr = sum / static_cast<double>(r.size());
  return report;
}

// Candidate mask over columns: seed entities on that side, minus test ones.
std::vector<std::uint8_t> exclusion_mask(std::size_t cols, const SeedSet* excluded,
                                         const SeedSet& test, bool right_side) {
  std::vector<std::uint8_t> mask;
  if (excluded == nullptr) return mask;
  mask.assign(cols, 0);
  for (const auto& p : excluded->pairs()) {
    const EntityId e = right_side ? p.e2 : p.e1;
    if (e < cols) mask[e] = 1;
  }
  for (const auto& p : test.pairs()) {
    const EntityId e = right_side ? p.e2 : p.e1;
    if (e < cols) mask[e] = 0;
  }
  return mask;
}

}  // namespace

double hits_at_k(const SimilarityMatrix& m, const SeedSet& test, std::size_t k,
                 std::span<const std::uint8_t> excluded_cols) {
  const std::vector<std::size_t> r = ranks(m, test, excluded_cols);
  std::size_t hit = 0;
  for (std::size_t rank : r) hit += rank <= k ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(r.size());
}

double mrr(const SimilarityMatrix& m, const SeedSet& test,
           std::span<const std::uint8_t> excluded_cols) {
  const std::vector<std::size_t> r = ranks(m, test, excluded_cols);
  double sum = 0.0;
  for (std::size_t rank : r) sum += 1.0 / static_cast<double>(rank);
  return sum / static_cast<double>(r.size());
}

EvalReport evaluate(const SimilarityMatrix& m, const SeedSet& test, const EvalOptions& opts) {
  EvalReport out;
  if (opts.direction == Direction::kLeftToRight || opts.direction == Direction::kMean) {
    out = evaluate_one(m, test, opts.ks,
                       exclusion_mask(m.cols(), opts.excluded_seeds, test, /*right_side=*/true));
  }
  if (opts.direction == Direction::kRightToLeft || opts.direction == Direction::kMean) {
    const SeedSet rev = swapped(test);
    const EvalReport r2l = evaluate_one(
        transpose(m), rev, opts.ks,
        exclusion_mask(m.rows(), opts.excluded_seeds, test, /*right_side=*/false));
    if (opts.direction == Direction::kRightToLeft) {
      out = r2l;
    } else {
      for (auto& [k, v] : out.hits) v = 0.5 * (v + r2l.hits.at(k));
      out.mrr = 0.5 * (out.mrr + r2l.mrr);
    }
  }
  out.direction = opts.direction;
  return out;
}

}  // namespace seedalign

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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "seedalign/kg.hpp"
#include "seedalign/simcore.hpp"

namespace seedalign {

enum class Direction { kLeftToRight, kRightToLeft, kMean };
const char* direction_name(Direction d);

// 1-based rank of column `target` in row `row`, descending score, ties to the
// lower column index. Columns flagged in `excluded_cols` are not candidates.
std::size_t rank_in_row(const SimilarityMatrix& m, std::size_t row, std::size_t target,
                        std::span<const std::uint8_t> excluded_cols = {});

double hits_at_k(const SimilarityMatrix& m, const SeedSet& test, std::size_t k,
                 std::span<const std::uint8_t> excluded_cols = {});
double mrr(const SimilarityMatrix& m, const SeedSet& test,
           std::span<const std::uint8_t> excluded_cols = {});

struct EvalReport {
  std::map<std::size_t, double> hits;
  double mrr = 0.0;
  std::size_t n_test = 0;
  Direction direction = Direction::kLeftToRight;
};

struct EvalOptions {
  std::vector<std::size_t> ks{1, 10};
  Direction direction = Direction::kLeftToRight;
  // Drop these seed pairs' entities from the candidate lists (test pairs
  // themselves always stay candidates).
  const SeedSet* excluded_seeds = nullptr;
};

// m is G1 x G2; the G2 -> G1 direction ranks over the transpose.
EvalReport evaluate(const SimilarityMatrix& m, const SeedSet& test, const EvalOptions& opts);

}  // namespace seedalign

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
#include <vector>

#include "seedalign/kg.hpp"
#include "seedalign/matrix.hpp"
#include "seedalign/rng.hpp"

namespace seedalign {

// Trainable parameters of the local/global awareness encoder.
struct ModelParams {
  Matrix entity_base;   // (|E1| + |E2|) x d
  Matrix relation_emb;  // relation slots x d
  std::vector<double> v1;  // local attention
  std::vector<double> v2;  // global attention

  std::size_t dim() const noexcept { return entity_base.cols(); }
  bool all_finite() const;
  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// b = sqrt(6 / (fan_in + fan_out))
double xavier_bound(std::size_t fan_in, std::size_t fan_out);
void xavier_fill(std::span<double> values, std::size_t fan_in, std::size_t fan_out, Rng& rng);

// Xavier-uniform init of every block. Matrices use fan_in = fan_out = d; the
// attention vectors use fan_in = d, fan_out = 1.
ModelParams init_params(std::size_t num_entities, std::size_t num_relation_slots,
                        std::size_t dim, std::uint64_t rng_seed);

// Semantic high-order neighbours, fixed after preprocessing.
struct HighOrderNeighbors {
  std::size_t k = 0;
  std::vector<std::vector<std::uint32_t>> lists;
};

// CSLS(cos(H, H^T)) over every entity of both graphs, diagonal excluded, then
// the top-k per row. Missing entities get empty lists and never appear as
// anyone's neighbour.
HighOrderNeighbors global_neighbors(const EmbeddingTable& sem_all, std::size_t k, std::size_t q);

struct ForwardTrace {
  std::size_t depth = 0;
  Matrix h0;
  std::vector<Matrix> local;   // layers 1..depth
  std::vector<Matrix> global;  // layers 1..depth
  Matrix final_embedding;      // [h0 | local... | h0 | global...]

  std::size_t width() const noexcept { return final_embedding.cols(); }
};

// h0(i) = mean of neighbour base embeddings + mean of incident relation
// embeddings; isolated entities use their own base embedding.
Matrix local_input_features(const UnifiedGraph& graph, const ModelParams& params);

// Relation-aware reflection aggregation:
//   out(i) = tanh(sum_k a_k (h_j - 2 (r_k . h_j) r_k)),  a = softmax_k(v1 . r_k)
// Isolated entities pass through unchanged.
Matrix local_layer(const Matrix& h_in, const ModelParams& params, const UnifiedGraph& graph);

// out(i) = tanh(sum_j b_j h_j) over the high-order neighbours of i,
// b = softmax_j(v2 . h_j). Empty neighbour lists pass through unchanged.
Matrix global_layer(const Matrix& h_in, const ModelParams& params,
                    const HighOrderNeighbors& neighbors);

ForwardTrace forward(const ModelParams& params, const UnifiedGraph& graph,
                     const HighOrderNeighbors& neighbors, std::size_t depth);

// Attention weights, in adjacency / neighbour-list order.
std::vector<double> local_attention(const ModelParams& params, const UnifiedGraph& graph,
                                    std::size_t entity);
std::vector<double> global_attention(const Matrix& h_in, const ModelParams& params,
                                     const HighOrderNeighbors& neighbors, std::size_t entity);

}  // namespace seedalign

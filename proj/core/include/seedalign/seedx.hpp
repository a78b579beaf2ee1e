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

#include "seedalign/kg.hpp"
#include "seedalign/simcore.hpp"

namespace seedalign {

struct SeedExpansionConfig {
  double epsilon = 0.5;    // weight of the entity-semantics CSLS matrix
  double theta_sem = 0.01;
  std::size_t q = 15;
};

// One-hop symmetric-normalised aggregation of neighbour semantics:
//   h_n(i) = sum_{(r, j) in adj(i)} h_s(j) / sqrt(deg(i) deg(j))
// Degrees count adjacency entries. Entities whose aggregate is zero
// (isolated, or only missing neighbours) are flagged missing.
EmbeddingTable neighborhood_semantic_embedding(const KnowledgeGraph& kg,
                                               const EmbeddingTable& sem);

// eps * CSLS(cos(sem1, sem2)) + (1 - eps) * CSLS(cos(nbr1, nbr2)).
SimilarityMatrix fused_semantic_similarity(const EmbeddingTable& sem1, const EmbeddingTable& sem2,
                                           const EmbeddingTable& nbr1, const EmbeddingTable& nbr2,
                                           const SeedExpansionConfig& cfg);

// S u S_I, with S_I tagged INIT. INIT candidates touching an already paired
// entity are dropped; existing pairs are copied unchanged.
SeedSet expand_seeds(const SimilarityMatrix& m_sem, const SeedExpansionConfig& cfg,
                     const SeedSet& seeds);

}  // namespace seedalign

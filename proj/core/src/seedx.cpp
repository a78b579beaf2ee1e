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

#include "seedalign/seedx.hpp"

#include <cmath>

#include "seedalign/error.hpp"

namespace seedalign {

EmbeddingTable neighborhood_semantic_embedding(const KnowledgeGraph& kg,
                                               const EmbeddingTable& sem) {
  if (sem.rows() != kg.num_entities()) {
    throw Error(ErrorKind::kDimMismatch, "semantic table has " + std::to_string(sem.rows()) +
                                             " rows for " + std::to_string(kg.num_entities()) +
                                             " entities");
  }
  EmbeddingTable out(kg.num_entities(), sem.dim());
  for (EntityId e = 0; e < kg.num_entities(); ++e) {
    auto dst = out.vectors.row(e);
    const double deg_i = static_cast<double>(kg.degree(e));
    for (const Edge& edge : kg.adjacency(e)) {
      const double deg_j = static_cast<double>(kg.degree(edge.neighbor));
      axpy(1.0 / std::sqrt(deg_i * deg_j), sem.vectors.row(edge.neighbor), dst);
    }
    bool zero = true;
    for (double v : dst) zero = zero && v == 0.0;
    out.missing[e] = zero ? 1 : 0;
  }
  return out;
}

SimilarityMatrix fused_semantic_similarity(const EmbeddingTable& sem1, const EmbeddingTable& sem2,
                                           const EmbeddingTable& nbr1, const EmbeddingTable& nbr2,
                                           const SeedExpansionConfig& cfg) {
  if (!(cfg.epsilon >= 0.0 && cfg.epsilon <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "epsilon must lie in [0, 1]");
  }
  if (sem1.rows() != nbr1.rows() || sem2.rows() != nbr2.rows()) {
    throw Error(ErrorKind::kDimMismatch, "semantic and neighbourhood tables differ in rows");
  }
  const CslsParams params{cfg.q};
  const SimilarityMatrix m_s = csls_adjust(cosine_matrix(sem1, sem2), params);
  const SimilarityMatrix m_n = csls_adjust(cosine_matrix(nbr1, nbr2), params);

  SimilarityMatrix out(m_s.rows(), m_s.cols());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double a = m_s.values()[k];
    const double b = m_n.values()[k];
    if (cfg.epsilon == 1.0) {
      out.values()[k] = a;
    } else if (cfg.epsilon == 0.0) {
      out.values()[k] = b;
    } else if (is_excluded(a) && is_excluded(b)) {
      out.values()[k] = kExcludedScore;
    } else {
      // A side without usable vectors contributes nothing.
      out.values()[k] = (is_excluded(a) ? 0.0 : cfg.epsilon * a) +
                        (is_excluded(b) ? 0.0 : (1.0 - cfg.epsilon) * b);
    }
  }
  return out;
}

SeedSet expand_seeds(const SimilarityMatrix& m_sem, const SeedExpansionConfig& cfg,
                     const SeedSet& seeds) {
  SeedSet out = seeds;
  for (const ScoredPair& p : mutual_nearest_pairs(m_sem, cfg.theta_sem, seeds)) {
    out.try_add({p.i, p.j, Provenance::kInit});
  }
  return out;
}

}  // namespace seedalign

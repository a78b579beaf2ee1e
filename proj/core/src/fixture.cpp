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

#include "seedalign/fixture.hpp"

#include <cmath>
#include <set>

#include "seedalign/error.hpp"
#include "seedalign/rng.hpp"

namespace seedalign {

namespace {

enum Stream : std::uint64_t {
  kTriples = 1,
  kPermutation = 2,
  kDropout = 3,
  kBase = 4,
  kNoise1 = 5,
  kNoise2 = 6,
};

std::vector<double> noisy_unit(std::span<const double> base, double sigma, Rng& rng) {
  std::vector<double> v(base.begin(), base.end());
  const double scale = sigma / std::sqrt(static_cast<double>(v.size()));
  for (double& x : v) x += scale * rng.normal();
  const double norm = l2_norm(v);
  for (double& x : v) x /= norm;
  return v;
}

KnowledgeGraph labelled_graph(int graph_id, std::size_t n, std::size_t relations,
                              std::vector<Triple> triples) {
  std::vector<ExternalId> ids(n);
  std::vector<std::string> labels(n);
  for (std::size_t e = 0; e < n; ++e) {
    ids[e] = static_cast<ExternalId>(e);
    labels[e] = "g" + std::to_string(graph_id) + "/e" + std::to_string(e);
  }
  std::vector<ExternalId> rel_ids(relations);
  std::vector<std::string> rel_labels(relations);
  for (std::size_t r = 0; r < relations; ++r) {
    rel_ids[r] = static_cast<ExternalId>(r);
    rel_labels[r] = "g" + std::to_string(graph_id) + "/r" + std::to_string(r);
  }
  return KnowledgeGraph(graph_id, std::move(ids), std::move(labels), std::move(rel_ids),
                        std::move(rel_labels), std::move(triples));
}

}  // namespace

Fixture generate_fixture(const FixtureConfig& cfg) {
  const std::size_t n = cfg.entities;
  if (n < 2 || cfg.relations < 1 || cfg.sem_dim < 1) {
    throw Error(ErrorKind::kInvalidArgument, "fixture needs >= 2 entities, >= 1 relation, dim >= 1");
  }
  if (cfg.triples > n * (n - 1) * cfg.relations) {
    throw Error(ErrorKind::kInvalidArgument, "more triples requested than distinct ones exist");
  }
  if (!(cfg.edge_dropout >= 0.0 && cfg.edge_dropout < 1.0) || !(cfg.semantic_noise >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "edge_dropout must lie in [0, 1), noise >= 0");
  }

  Rng triple_rng(mix64(cfg.seed, kTriples));
  std::set<Triple> unique;
  std::vector<Triple> t1;
  while (t1.size() < cfg.triples) {
    const auto h = static_cast<EntityId>(triple_rng.below(n));
    const auto t = static_cast<EntityId>(triple_rng.below(n));
    const auto r = static_cast<RelationId>(triple_rng.below(cfg.relations));
    if (h == t) continue;
    if (unique.insert({h, r, t}).second) t1.push_back({h, r, t});
  }

  std::vector<EntityId> perm(n);
  for (std::size_t e = 0; e < n; ++e) perm[e] = static_cast<EntityId>(e);
  Rng perm_rng(mix64(cfg.seed, kPermutation));
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[perm_rng.below(i)]);

  Rng drop_rng(mix64(cfg.seed, kDropout));
  std::vector<Triple> t2;
  for (const Triple& t : t1) {
    if (drop_rng.uniform01() < cfg.edge_dropout) continue;
    t2.push_back({perm[t.head], t.relation, perm[t.tail]});
  }

  Fixture fx;
  fx.kg1 = labelled_graph(1, n, cfg.relations, std::move(t1));
  fx.kg2 = labelled_graph(2, n, cfg.relations, std::move(t2));
  fx.sem1 = EmbeddingTable(n, cfg.sem_dim);
  fx.sem2 = EmbeddingTable(n, cfg.sem_dim);
  std::vector<double> base(cfg.sem_dim);
  for (std::size_t w = 0; w < n; ++w) {
    Rng base_rng(mix64(mix64(cfg.seed, kBase), w));
    for (double& x : base) x = base_rng.normal();
    const double norm = l2_norm(base);
    for (double& x : base) x /= norm;
    Rng noise1(mix64(mix64(cfg.seed, kNoise1), w));
    Rng noise2(mix64(mix64(cfg.seed, kNoise2), w));
    const auto a = noisy_unit(base, cfg.semantic_noise, noise1);
    const auto b = noisy_unit(base, cfg.semantic_noise, noise2);
    std::copy(a.begin(), a.end(), fx.sem1.vectors.row(w).begin());
    std::copy(b.begin(), b.end(), fx.sem2.vectors.row(perm[w]).begin());
    fx.reference.add({static_cast<EntityId>(w), perm[w], Provenance::kPre});
  }
  return fx;
}

void write_fixture(const Fixture& fx, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_knowledge_graph(fx.kg1, dir / "triples_1", dir / "ent_ids_1", dir / "rel_ids_1");
  write_knowledge_graph(fx.kg2, dir / "triples_2", dir / "ent_ids_2", dir / "rel_ids_2");
  write_seed_pairs(dir / "ref_ent_ids", fx.reference, fx.kg1, fx.kg2);
  write_semantic_embeddings(dir / "sem_1.emb", fx.sem1, fx.kg1);
  write_semantic_embeddings(dir / "sem_2.emb", fx.sem2, fx.kg2);
}

}  // namespace seedalign

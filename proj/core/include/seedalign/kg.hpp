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

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "seedalign/matrix.hpp"

namespace seedalign {

// Dense per-graph indices. External (file) ids are mapped onto these at load.
using EntityId = std::uint32_t;
using RelationId = std::uint32_t;
using ExternalId = std::int64_t;

struct Triple {
  EntityId head;
  RelationId relation;
  EntityId tail;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct Edge {
  RelationId relation;  // relation slot; inverse of r is r + num_relations
  EntityId neighbor;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// One knowledge graph G = (E, R, T). Immutable after construction.
//
// Every triple (h, r, t) contributes (r, t) to adjacency(h) and the inverse
// edge (r + |R|, h) to adjacency(t), so adjacency has 2|T| entries in total.
// Triples are kept sorted by (head, relation, tail) with duplicates removed.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;

  // Contiguous external ids 0..n-1, no labels.
  KnowledgeGraph(int graph_id, std::size_t num_entities, std::size_t num_relations,
                 std::vector<Triple> triples);

  KnowledgeGraph(int graph_id, std::vector<ExternalId> entity_ids,
                 std::vector<std::string> entity_labels,
                 std::vector<ExternalId> relation_ids,
                 std::vector<std::string> relation_labels, std::vector<Triple> triples);

  int graph_id() const noexcept { return graph_id_; }
  std::size_t num_entities() const noexcept { return entity_ids_.size(); }
  std::size_t num_relations() const noexcept { return relation_ids_.size(); }
  // Relation slots including inverses.
  std::size_t num_relation_slots() const noexcept { return 2 * relation_ids_.size(); }
  RelationId inverse(RelationId r) const noexcept {
    return r < num_relations() ? r + static_cast<RelationId>(num_relations())
                               : r - static_cast<RelationId>(num_relations());
  }

  const std::vector<Triple>& triples() const noexcept { return triples_; }
  std::span<const Edge> adjacency(EntityId e) const {
    return {edges_.data() + offsets_[e], offsets_[e + 1] - offsets_[e]};
  }
  std::size_t degree(EntityId e) const { return offsets_[e + 1] - offsets_[e]; }
  std::size_t num_adjacency_entries() const noexcept { return edges_.size(); }
  std::size_t duplicates_dropped() const noexcept { return duplicates_dropped_; }

  ExternalId external_entity(EntityId e) const { return entity_ids_[e]; }
  ExternalId external_relation(RelationId r) const { return relation_ids_[r]; }
  const std::string& entity_label(EntityId e) const { return entity_labels_[e]; }
  const std::string& relation_label(RelationId r) const { return relation_labels_[r]; }
  std::optional<EntityId> find_entity(ExternalId id) const;
  std::optional<RelationId> find_relation(ExternalId id) const;

 private:
  void build();

  int graph_id_ = 1;
  std::vector<ExternalId> entity_ids_;
  std::vector<std::string> entity_labels_;
  std::vector<ExternalId> relation_ids_;
  std::vector<std::string> relation_labels_;
  std::unordered_map<ExternalId, EntityId> entity_index_;
  std::unordered_map<ExternalId, RelationId> relation_index_;
  std::vector<Triple> triples_;
  std::vector<std::size_t> offsets_;
  std::vector<Edge> edges_;
  std::size_t duplicates_dropped_ = 0;
};

// Loads "head\trel\ttail" triples. Id map files ("id\tlabel") declare the id
// spaces; when omitted the ids are taken as 0..max seen in the triple file.
KnowledgeGraph load_knowledge_graph(
    int graph_id, const std::filesystem::path& triple_path,
    const std::optional<std::filesystem::path>& entity_id_path = std::nullopt,
    const std::optional<std::filesystem::path>& relation_id_path = std::nullopt);

void write_knowledge_graph(const KnowledgeGraph& kg, const std::filesystem::path& triple_path,
                           const std::optional<std::filesystem::path>& entity_id_path =
                               std::nullopt,
                           const std::optional<std::filesystem::path>& relation_id_path =
                               std::nullopt);

enum class Provenance : std::uint8_t { kPre = 0, kInit = 1, kIter = 2 };
const char* provenance_name(Provenance p);

struct SeedPair {
  EntityId e1;
  EntityId e2;
  Provenance provenance = Provenance::kPre;

  friend bool operator==(const SeedPair&, const SeedPair&) = default;
};

// Ordered, one-to-one set of cross-graph entity pairs.
class SeedSet {
 public:
  SeedSet() = default;

  // Throws kDuplicateEntity if either side is already paired.
  void add(const SeedPair& pair);
  // Returns false (and leaves the set unchanged) on a one-to-one conflict.
  bool try_add(const SeedPair& pair);

  bool has_left(EntityId e1) const { return left_.contains(e1); }
  bool has_right(EntityId e2) const { return right_.contains(e2); }
  std::optional<EntityId> partner_of_left(EntityId e1) const;
  std::optional<EntityId> partner_of_right(EntityId e2) const;

  const std::vector<SeedPair>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  std::size_t count(Provenance p) const;
  SeedSet filtered(Provenance p) const;

  friend bool operator==(const SeedSet& a, const SeedSet& b) { return a.pairs_ == b.pairs_; }

 private:
  std::vector<SeedPair> pairs_;
  std::unordered_map<EntityId, EntityId> left_;
  std::unordered_map<EntityId, EntityId> right_;
};

// Global validator: one-to-one on both sides and ids within the graphs.
void validate_seed_set(const SeedSet& seeds, std::size_t n1, std::size_t n2);

// "e1_id\te2_id" per line, external ids; all pairs tagged PRE.
SeedSet load_seed_pairs(const std::filesystem::path& path, const KnowledgeGraph& kg1,
                        const KnowledgeGraph& kg2);
void write_seed_pairs(const std::filesystem::path& path, const SeedSet& seeds,
                      const KnowledgeGraph& kg1, const KnowledgeGraph& kg2);

// Fixed semantic vectors, one row per entity of a graph.
struct EmbeddingTable {
  Matrix vectors;
  std::vector<std::uint8_t> missing;  // 1 = no semantics; row is zero

  EmbeddingTable() = default;
  EmbeddingTable(std::size_t rows, std::size_t dim)
      : vectors(rows, dim), missing(rows, 0) {}

  std::size_t rows() const noexcept { return vectors.rows(); }
  std::size_t dim() const noexcept { return vectors.cols(); }
  bool is_missing(std::size_t r) const { return missing[r] != 0; }
};

// Text layout: "entity_id\tf_1 f_2 ... f_d". Binary layout (little endian):
//   char[8] "SAEMB001", u32 dim, u64 rows, rows x { i64 entity_id, f32[dim] }.
// The format is detected from the leading magic bytes. Entities absent from
// the file get zero rows flagged missing.
EmbeddingTable load_semantic_embeddings(const std::filesystem::path& path,
                                        const KnowledgeGraph& kg, std::size_t expected_dim);
void write_semantic_embeddings(const std::filesystem::path& path, const EmbeddingTable& table,
                               const KnowledgeGraph& kg, bool binary = false);

// Deterministic stand-in for a text encoder: row e is seeded by
// mix64(rng_seed, external id of e), drawn i.i.d. N(0, 1) per component and
// scaled to unit L2 norm.
EmbeddingTable pseudo_semantic_embeddings(const KnowledgeGraph& kg, std::size_t dim,
                                          std::uint64_t rng_seed);

struct SplitFractions {
  double train = 0.3;
  double valid = 0.1;
  double test = 0.6;
};

struct SeedSplits {
  SeedSet train;  // provenance PRE
  SeedSet valid;
  SeedSet test;
};

// Shuffles the reference pairs with `rng_seed` and cuts them by fraction.
// Fractions must be in [0, 1] and sum to 1.
SeedSplits split_reference(const SeedSet& reference, const SplitFractions& fractions,
                           std::uint64_t rng_seed);

struct DatasetBundle {
  KnowledgeGraph kg1;
  KnowledgeGraph kg2;
  EmbeddingTable sem1;
  EmbeddingTable sem2;
  SeedSet reference;
  SeedSplits splits;
};

// Both graphs in one entity index space (G2 offset by |E1|) and one relation
// slot space (G2 slots offset by 2|R1|). This is what the encoder runs on.
class UnifiedGraph {
 public:
  UnifiedGraph() = default;
  UnifiedGraph(const KnowledgeGraph& kg1, const KnowledgeGraph& kg2);
  explicit UnifiedGraph(const KnowledgeGraph& kg);

  std::size_t num_entities() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_relation_slots() const noexcept { return num_relation_slots_; }
  std::size_t left_count() const noexcept { return left_count_; }
  std::size_t right_count() const noexcept { return num_entities() - left_count_; }
  std::size_t left(EntityId e1) const noexcept { return e1; }
  std::size_t right(EntityId e2) const noexcept { return left_count_ + e2; }

  std::span<const Edge> adjacency(std::size_t e) const {
    return {edges_.data() + offsets_[e], offsets_[e + 1] - offsets_[e]};
  }
  std::size_t degree(std::size_t e) const { return offsets_[e + 1] - offsets_[e]; }

 private:
  void append(const KnowledgeGraph& kg, std::size_t entity_offset, std::size_t relation_offset);

  std::size_t left_count_ = 0;
  std::size_t num_relation_slots_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Edge> edges_;
};

// Stacks two per-graph tables into one unified table (G1 rows first).
EmbeddingTable stack_tables(const EmbeddingTable& a, const EmbeddingTable& b);

}  // namespace seedalign

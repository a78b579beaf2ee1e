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

#include "seedalign/kg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <set>

#include "seedalign/error.hpp"
#include "seedalign/rng.hpp"
#include "text_io.hpp"

namespace seedalign {

namespace fs = std::filesystem;
using detail::malformed;
using detail::parse_number;
using detail::split_ws;

// ---------------------------------------------------------------------------
// KnowledgeGraph

KnowledgeGraph::KnowledgeGraph(int graph_id, std::size_t num_entities,
                               std::size_t num_relations, std::vector<Triple> triples)
    : graph_id_(graph_id), triples_(std::move(triples)) {
  entity_ids_.resize(num_entities);
  entity_labels_.resize(num_entities);
  for (std::size_t e = 0; e < num_entities; ++e) entity_ids_[e] = static_cast<ExternalId>(e);
  relation_ids_.resize(num_relations);
  relation_labels_.resize(num_relations);
  for (std::size_t r = 0; r < num_relations; ++r) relation_ids_[r] = static_cast<ExternalId>(r);
  build();
}

KnowledgeGraph::KnowledgeGraph(int graph_id, std::vector<ExternalId> entity_ids,
                               std::vector<std::string> entity_labels,
                               std::vector<ExternalId> relation_ids,
                               std::vector<std::string> relation_labels,
                               std::vector<Triple> triples)
    : graph_id_(graph_id),
      entity_ids_(std::move(entity_ids)),
      entity_labels_(std::move(entity_labels)),
      relation_ids_(std::move(relation_ids)),
      relation_labels_(std::move(relation_labels)),
      triples_(std::move(triples)) {
  entity_labels_.resize(entity_ids_.size());
  relation_labels_.resize(relation_ids_.size());
  build();
}

void KnowledgeGraph::build() {
  entity_index_.clear();
  relation_index_.clear();
  for (std::size_t e = 0; e < entity_ids_.size(); ++e) {
    if (!entity_index_.emplace(entity_ids_[e], static_cast<EntityId>(e)).second) {
      throw Error(ErrorKind::kDuplicateEntity,
                  "entity id " + std::to_string(entity_ids_[e]) + " declared twice");
    }
  }
  for (std::size_t r = 0; r < relation_ids_.size(); ++r) {
    if (!relation_index_.emplace(relation_ids_[r], static_cast<RelationId>(r)).second) {
      throw Error(ErrorKind::kDuplicateEntity,
                  "relation id " + std::to_string(relation_ids_[r]) + " declared twice");
    }
  }

  const std::size_t n = entity_ids_.size();
  const std::size_t nr = relation_ids_.size();
  for (const Triple& t : triples_) {
    if (t.head >= n || t.tail >= n) {
      throw Error(ErrorKind::kDanglingId, "triple entity index out of range");
    }
    if (t.relation >= nr) {
      throw Error(ErrorKind::kDanglingId, "triple relation index out of range");
    }
  }

  std::sort(triples_.begin(), triples_.end());
  const auto last = std::unique(triples_.begin(), triples_.end());
  duplicates_dropped_ += static_cast<std::size_t>(triples_.end() - last);
  triples_.erase(last, triples_.end());

  std::vector<std::size_t> degree(n, 0);
  for (const Triple& t : triples_) {
    ++degree[t.head];
    ++degree[t.tail];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t e = 0; e < n; ++e) offsets_[e + 1] = offsets_[e] + degree[e];
  edges_.resize(offsets_[n]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const Triple& t : triples_) {
    edges_[cursor[t.head]++] = Edge{t.relation, t.tail};
    edges_[cursor[t.tail]++] = Edge{static_cast<RelationId>(t.relation + nr), t.head};
  }
}

std::optional<EntityId> KnowledgeGraph::find_entity(ExternalId id) const {
  const auto it = entity_index_.find(id);
  if (it == entity_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<RelationId> KnowledgeGraph::find_relation(ExternalId id) const {
  const auto it = relation_index_.find(id);
  if (it == relation_index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Loading

namespace {

struct IdMap {
  std::vector<ExternalId> ids;
  std::vector<std::string> labels;
};

IdMap read_id_map(const fs::path& path) {
  auto in = detail::open_input(path);
  IdMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = detail::trim(line);
    if (view.empty()) continue;
    std::size_t cut = view.find('\t');
    if (cut == std::string_view::npos) cut = view.find(' ');
    const auto id = parse_number<ExternalId>(view.substr(0, cut));
    if (!id) throw malformed(path, line_no, "expected \"id\\tlabel\"");
    map.ids.push_back(*id);
    map.labels.emplace_back(cut == std::string_view::npos ? std::string_view{}
                                                          : detail::trim(view.substr(cut + 1)));
  }
  return map;
}

IdMap contiguous_ids(ExternalId max_id) {
  IdMap map;
  for (ExternalId id = 0; id <= max_id; ++id) {
    map.ids.push_back(id);
    map.labels.emplace_back();
  }
  return map;
}

}  // namespace

KnowledgeGraph load_knowledge_graph(int graph_id, const fs::path& triple_path,
                                    const std::optional<fs::path>& entity_id_path,
                                    const std::optional<fs::path>& relation_id_path) {
  struct RawTriple {
    ExternalId h, r, t;
  };
  std::vector<RawTriple> raw;
  {
    auto in = detail::open_input(triple_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto fields = split_ws(line);
      if (fields.empty()) continue;
      if (fields.size() != 3) throw malformed(triple_path, line_no, "expected head\\trel\\ttail");
      const auto h = parse_number<ExternalId>(fields[0]);
      const auto r = parse_number<ExternalId>(fields[1]);
      const auto t = parse_number<ExternalId>(fields[2]);
      if (!h || !r || !t || *h < 0 || *r < 0 || *t < 0) {
        throw malformed(triple_path, line_no, "ids must be non-negative integers");
      }
      raw.push_back({*h, *r, *t});
    }
  }
  if (raw.empty()) throw Error(ErrorKind::kEmptyGraph, triple_path.string() + " has no triples");

  ExternalId max_entity = 0;
  ExternalId max_relation = 0;
  for (const auto& t : raw) {
    max_entity = std::max({max_entity, t.h, t.t});
    max_relation = std::max(max_relation, t.r);
  }
  IdMap entities = entity_id_path ? read_id_map(*entity_id_path) : contiguous_ids(max_entity);
  IdMap relations =
      relation_id_path ? read_id_map(*relation_id_path) : contiguous_ids(max_relation);

  // Provisional graph just for the id lookups.
  KnowledgeGraph ids(graph_id, entities.ids, {}, relations.ids, {}, {});
  std::vector<Triple> triples;
  triples.reserve(raw.size());
  for (const auto& t : raw) {
    const auto h = ids.find_entity(t.h);
    const auto r = ids.find_relation(t.r);
    const auto tl = ids.find_entity(t.t);
    if (!h) throw Error(ErrorKind::kDanglingId, "entity " + std::to_string(t.h));
    if (!tl) throw Error(ErrorKind::kDanglingId, "entity " + std::to_string(t.t));
    if (!r) throw Error(ErrorKind::kDanglingId, "relation " + std::to_string(t.r));
    triples.push_back({*h, *r, *tl});
  }
  return KnowledgeGraph(graph_id, std::move(entities.ids), std::move(entities.labels),
                        std::move(relations.ids), std::move(relations.labels),
                        std::move(triples));
}

void write_knowledge_graph(const KnowledgeGraph& kg, const fs::path& triple_path,
                           const std::optional<fs::path>& entity_id_path,
                           const std::optional<fs::path>& relation_id_path) {
  {
    auto out = detail::open_output(triple_path);
    for (const Triple& t : kg.triples()) {
      out << kg.external_entity(t.head) << '\t' << kg.external_relation(t.relation) << '\t'
          << kg.external_entity(t.tail) << '\n';
    }
  }
  if (entity_id_path) {
    auto out = detail::open_output(*entity_id_path);
    for (EntityId e = 0; e < kg.num_entities(); ++e) {
      out << kg.external_entity(e) << '\t' << kg.entity_label(e) << '\n';
    }
  }
  if (relation_id_path) {
    auto out = detail::open_output(*relation_id_path);
    for (RelationId r = 0; r < kg.num_relations(); ++r) {
      out << kg.external_relation(r) << '\t' << kg.relation_label(r) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// SeedSet

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kPre: return "pre";
    case Provenance::kInit: return "init";
    case Provenance::kIter: return "iter";
  }
  return "?";
}

void SeedSet::add(const SeedPair& pair) {
  if (left_.contains(pair.e1)) {
    throw Error(ErrorKind::kDuplicateEntity, "entity " + std::to_string(pair.e1) + " on side 1");
  }
  if (right_.contains(pair.e2)) {
    throw Error(ErrorKind::kDuplicateEntity, "entity " + std::to_string(pair.e2) + " on side 2");
  }
  left_.emplace(pair.e1, pair.e2);
  right_.emplace(pair.e2, pair.e1);
  pairs_.push_back(pair);
}

bool SeedSet::try_add(const SeedPair& pair) {
  if (left_.contains(pair.e1) || right_.contains(pair.e2)) return false;
  left_.emplace(pair.e1, pair.e2);
  right_.emplace(pair.e2, pair.e1);
  pairs_.push_back(pair);
  return true;
}

std::optional<EntityId> SeedSet::partner_of_left(EntityId e1) const {
  const auto it = left_.find(e1);
  if (it == left_.end()) return std::nullopt;
  return it->second;
}

std::optional<EntityId> SeedSet::partner_of_right(EntityId e2) const {
  const auto it = right_.find(e2);
  if (it == right_.end()) return std::nullopt;
  return it->second;
}

std::size_t SeedSet::count(Provenance p) const {
  return static_cast<std::size_t>(std::count_if(
      pairs_.begin(), pairs_.end(), [p](const SeedPair& s) { return s.provenance == p; }));
}

SeedSet SeedSet::filtered(Provenance p) const {
  SeedSet out;
  for (const auto& s : pairs_) {
    if (s.provenance == p) out.add(s);
  }
  return out;
}

void validate_seed_set(const SeedSet& seeds, std::size_t n1, std::size_t n2) {
  std::set<EntityId> left;
  std::set<EntityId> right;
  for (const auto& s : seeds.pairs()) {
    if (s.e1 >= n1 || s.e2 >= n2) {
      throw Error(ErrorKind::kOutOfRangeId, "seed pair outside the graphs");
    }
    if (!left.insert(s.e1).second || !right.insert(s.e2).second) {
      throw Error(ErrorKind::kDuplicateEntity, "seed set is not one-to-one");
    }
  }
}

SeedSet load_seed_pairs(const fs::path& path, const KnowledgeGraph& kg1,
                        const KnowledgeGraph& kg2) {
  auto in = detail::open_input(path);
  SeedSet seeds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() != 2) throw malformed(path, line_no, "expected e1_id\\te2_id");
    const auto a = parse_number<ExternalId>(fields[0]);
    const auto b = parse_number<ExternalId>(fields[1]);
    if (!a || !b) throw malformed(path, line_no, "ids must be integers");
    const auto e1 = kg1.find_entity(*a);
    const auto e2 = kg2.find_entity(*b);
    if (!e1) {
      throw Error(ErrorKind::kOutOfRangeId,
                  "line " + std::to_string(line_no) + ": " + std::to_string(*a) + " not in graph 1");
    }
    if (!e2) {
      throw Error(ErrorKind::kOutOfRangeId,
                  "line " + std::to_string(line_no) + ": " + std::to_string(*b) + " not in graph 2");
    }
    if (seeds.has_left(*e1)) {
      throw Error(ErrorKind::kDuplicateEntity, "entity " + std::to_string(*a) + " on side 1");
    }
    if (seeds.has_right(*e2)) {
      throw Error(ErrorKind::kDuplicateEntity, "entity " + std::to_string(*b) + " on side 2");
    }
    seeds.add({*e1, *e2, Provenance::kPre});
  }
  return seeds;
}

void write_seed_pairs(const fs::path& path, const SeedSet& seeds, const KnowledgeGraph& kg1,
                      const KnowledgeGraph& kg2) {
  auto out = detail::open_output(path);
  for (const auto& s : seeds.pairs()) {
    out << kg1.external_entity(s.e1) << '\t' << kg2.external_entity(s.e2) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Embedding tables

namespace {

constexpr char kEmbeddingMagic[8] = {'S', 'A', 'E', 'M', 'B', '0', '0', '1'};

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

void check_row_finite(std::span<const double> row, ExternalId id) {
  for (double v : row) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kNonFiniteValue, "embedding row " + std::to_string(id));
    }
  }
}

EmbeddingTable load_binary_embeddings(std::ifstream& in, const fs::path& path,
                                      const KnowledgeGraph& kg, std::size_t expected_dim) {
  std::uint32_t dim = 0;
  std::uint64_t rows = 0;
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  in.read(reinterpret_cast<char*>(&rows), sizeof rows);
  if (!in) throw malformed(path, 0, "truncated header");
  if (expected_dim != 0 && dim != expected_dim) {
    throw Error(ErrorKind::kDimMismatch, "found " + std::to_string(dim) + ", expected " +
                                             std::to_string(expected_dim));
  }
  EmbeddingTable table(kg.num_entities(), dim);
  std::fill(table.missing.begin(), table.missing.end(), 1);
  std::vector<float> buf(dim);
  for (std::uint64_t row = 0; row < rows; ++row) {
    ExternalId id = 0;
    in.read(reinterpret_cast<char*>(&id), sizeof id);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(dim * sizeof(float)));
    if (!in) throw malformed(path, row + 1, "truncated row");
    const auto e = kg.find_entity(id);
    if (!e) throw Error(ErrorKind::kDanglingId, "embedding row for unknown entity " + std::to_string(id));
    if (!table.is_missing(*e)) throw malformed(path, row + 1, "entity listed twice");
    auto dst = table.vectors.row(*e);
    std::copy(buf.begin(), buf.end(), dst.begin());
    check_row_finite(dst, id);
    table.missing[*e] = 0;
  }
  return table;
}

}  // namespace

EmbeddingTable load_semantic_embeddings(const fs::path& path, const KnowledgeGraph& kg,
                                        std::size_t expected_dim) {
  auto in = detail::open_input(path, std::ios::in | std::ios::binary);
  char magic[8] = {};
  in.read(magic, sizeof magic);
  if (in && std::memcmp(magic, kEmbeddingMagic, sizeof magic) == 0) {
    return load_binary_embeddings(in, path, kg, expected_dim);
  }
  in.clear();
  in.seekg(0);

  std::vector<std::pair<EntityId, std::vector<double>>> rows;
  std::size_t dim = expected_dim;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    const auto id = parse_number<ExternalId>(fields[0]);
    if (!id) throw malformed(path, line_no, "expected entity_id\\tf_1 ... f_d");
    const std::size_t found = fields.size() - 1;
    if (dim == 0) dim = found;
    if (found != dim) {
      throw Error(ErrorKind::kDimMismatch, path.string() + ":" + std::to_string(line_no) +
                                               ": found " + std::to_string(found) +
                                               ", expected " + std::to_string(dim));
    }
    std::vector<double> values(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      // from_chars rejects "nan"/"inf" spellings differently across libs; parse
      // leniently and check finiteness afterwards.
      const auto v = parse_number<double>(fields[k + 1]);
      if (!v) {
        const std::string text(fields[k + 1]);
        char* end = nullptr;
        const double fallback = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size()) throw malformed(path, line_no, "bad number");
        values[k] = fallback;
      } else {
        values[k] = *v;
      }
    }
    check_row_finite(values, *id);
    const auto e = kg.find_entity(*id);
    if (!e) throw Error(ErrorKind::kDanglingId, "embedding row for unknown entity " + std::to_string(*id));
    rows.emplace_back(*e, std::move(values));
  }
  if (dim == 0) throw Error(ErrorKind::kDimMismatch, path.string() + " has no rows");

  EmbeddingTable table(kg.num_entities(), dim);
  std::fill(table.missing.begin(), table.missing.end(), 1);
  for (auto& [e, values] : rows) {
    if (!table.is_missing(e)) throw malformed(path, 0, "entity listed twice");
    std::copy(values.begin(), values.end(), table.vectors.row(e).begin());
    table.missing[e] = 0;
  }
  return table;
}

void write_semantic_embeddings(const fs::path& path, const EmbeddingTable& table,
                               const KnowledgeGraph& kg, bool binary) {
  if (binary) {
    auto out = detail::open_output(path, std::ios::out | std::ios::binary);
    out.write(kEmbeddingMagic, sizeof kEmbeddingMagic);
    const auto dim = static_cast<std::uint32_t>(table.dim());
    std::uint64_t rows = 0;
    for (std::size_t e = 0; e < table.rows(); ++e) rows += table.is_missing(e) ? 0 : 1;
    out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
    out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
    std::vector<float> buf(dim);
    for (std::size_t e = 0; e < table.rows(); ++e) {
      if (table.is_missing(e)) continue;
      const ExternalId id = kg.external_entity(static_cast<EntityId>(e));
      const auto row = table.vectors.row(e);
      std::transform(row.begin(), row.end(), buf.begin(),
                     [](double v) { return static_cast<float>(v); });
      out.write(reinterpret_cast<const char*>(&id), sizeof id);
      out.write(reinterpret_cast<const char*>(buf.data()),
                static_cast<std::streamsize>(buf.size() * sizeof(float)));
    }
    return;
  }
  auto out = detail::open_output(path);
  for (std::size_t e = 0; e < table.rows(); ++e) {
    if (table.is_missing(e)) continue;
    out << kg.external_entity(static_cast<EntityId>(e)) << '\t';
    const auto row = table.vectors.row(e);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ' ';
      out << detail::format_double(row[k]);
    }
    out << '\n';
  }
}

EmbeddingTable pseudo_semantic_embeddings(const KnowledgeGraph& kg, std::size_t dim,
                                          std::uint64_t rng_seed) {
  if (dim == 0) throw Error(ErrorKind::kInvalidArgument, "pseudo embedding dim must be >= 1");
  EmbeddingTable table(kg.num_entities(), dim);
  for (std::size_t e = 0; e < kg.num_entities(); ++e) {
    Rng rng(mix64(rng_seed, static_cast<std::uint64_t>(kg.external_entity(static_cast<EntityId>(e)))));
    auto row = table.vectors.row(e);
    for (double& v : row) v = rng.normal();
    const double norm = l2_norm(row);
    for (double& v : row) v /= norm;
  }
  return table;
}

SeedSplits split_reference(const SeedSet& reference, const SplitFractions& fractions,
                           std::uint64_t rng_seed) {
  const double parts[3] = {fractions.train, fractions.valid, fractions.test};
  for (double p : parts) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorKind::kConfig, "split fractions must lie in [0, 1]");
    }
  }
  if (std::abs(parts[0] + parts[1] + parts[2] - 1.0) > 1e-9) {
    throw Error(ErrorKind::kConfig, "split fractions must sum to 1");
  }
  std::vector<SeedPair> pairs = reference.pairs();
  Rng rng(mix64(rng_seed, 0x5eed5));
  for (std::size_t i = pairs.size(); i > 1; --i) {
    std::swap(pairs[i - 1], pairs[rng.below(i)]);
  }
  const std::size_t n = pairs.size();
  const auto n_train = static_cast<std::size_t>(std::llround(fractions.train * static_cast<double>(n)));
  const auto n_valid = std::min(
      n - n_train, static_cast<std::size_t>(std::llround(fractions.valid * static_cast<double>(n))));
  SeedSplits out;
  for (std::size_t i = 0; i < n; ++i) {
    SeedPair p = pairs[i];
    p.provenance = Provenance::kPre;
    if (i < n_train) {
      out.train.add(p);
    } else if (i < n_train + n_valid) {
      out.valid.add(p);
    } else {
      out.test.add(p);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// UnifiedGraph

UnifiedGraph::UnifiedGraph(const KnowledgeGraph& kg1, const KnowledgeGraph& kg2) {
  left_count_ = kg1.num_entities();
  num_relation_slots_ = kg1.num_relation_slots() + kg2.num_relation_slots();
  offsets_.push_back(0);
  append(kg1, 0, 0);
  append(kg2, kg1.num_entities(), kg1.num_relation_slots());
}

UnifiedGraph::UnifiedGraph(const KnowledgeGraph& kg) {
  left_count_ = kg.num_entities();
  num_relation_slots_ = kg.num_relation_slots();
  offsets_.push_back(0);
  append(kg, 0, 0);
}

void UnifiedGraph::append(const KnowledgeGraph& kg, std::size_t entity_offset,
                          std::size_t relation_offset) {
  for (EntityId e = 0; e < kg.num_entities(); ++e) {
    for (const Edge& edge : kg.adjacency(e)) {
      edges_.push_back(Edge{static_cast<RelationId>(edge.relation + relation_offset),
                            static_cast<EntityId>(edge.neighbor + entity_offset)});
    }
    offsets_.push_back(edges_.size());
  }
}

EmbeddingTable stack_tables(const EmbeddingTable& a, const EmbeddingTable& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::kDimMismatch,
                "found " + std::to_string(b.dim()) + ", expected " + std::to_string(a.dim()));
  }
  EmbeddingTable out(a.rows() + b.rows(), a.dim());
  std::copy(a.vectors.values().begin(), a.vectors.values().end(), out.vectors.values().begin());
  std::copy(b.vectors.values().begin(), b.vectors.values().end(),
            out.vectors.values().begin() + static_cast<std::ptrdiff_t>(a.vectors.size()));
  std::copy(a.missing.begin(), a.missing.end(), out.missing.begin());
  std::copy(b.missing.begin(), b.missing.end(),
            out.missing.begin() + static_cast<std::ptrdiff_t>(a.rows()));
  return out;
}

}  // namespace seedalign

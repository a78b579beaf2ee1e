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

#include "seedalign/lgam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seedalign/error.hpp"
#include "seedalign/simcore.hpp"

namespace seedalign {

bool ModelParams::all_finite() const {
  const auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(entity_base.values().begin(), entity_base.values().end(), finite) &&
         std::all_of(relation_emb.values().begin(), relation_emb.values().end(), finite) &&
         std::all_of(v1.begin(), v1.end(), finite) && std::all_of(v2.begin(), v2.end(), finite);
}

double xavier_bound(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

void xavier_fill(std::span<double> values, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double b = xavier_bound(fan_in, fan_out);
  for (double& v : values) v = rng.uniform(-b, b);
}

ModelParams init_params(std::size_t num_entities, std::size_t num_relation_slots,
                        std::size_t dim, std::uint64_t rng_seed) {
  if (dim == 0) throw Error(ErrorKind::kInvalidArgument, "embedding dim must be >= 1");
  ModelParams p;
  p.entity_base = Matrix(num_entities, dim);
  p.relation_emb = Matrix(num_relation_slots, dim);
  p.v1.assign(dim, 0.0);
  p.v2.assign(dim, 0.0);
  Rng entity_rng(mix64(rng_seed, 1));
  Rng relation_rng(mix64(rng_seed, 2));
  Rng attention_rng(mix64(rng_seed, 3));
  xavier_fill(p.entity_base.values(), dim, dim, entity_rng);
  xavier_fill(p.relation_emb.values(), dim, dim, relation_rng);
  xavier_fill(p.v1, dim, 1, attention_rng);
  xavier_fill(p.v2, dim, 1, attention_rng);
  return p;
}

HighOrderNeighbors global_neighbors(const EmbeddingTable& sem_all, std::size_t k,
                                    std::size_t q) {
  if (k >= sem_all.rows()) {
    throw Error(ErrorKind::kKOutOfRange, "K=" + std::to_string(k) + " with " +
                                             std::to_string(sem_all.rows()) + " entities");
  }
  const SimilarityMatrix csls =
      csls_adjust(cosine_matrix(sem_all, sem_all), CslsParams{q}, /*self_similarity=*/true);
  HighOrderNeighbors out;
  out.k = k;
  out.lists = topk_rows(csls, k, /*self_similarity=*/true);
  for (std::size_t e = 0; e < sem_all.rows(); ++e) {
    if (sem_all.is_missing(e)) out.lists[e].clear();
  }
  return out;
}

Matrix local_input_features(const UnifiedGraph& graph, const ModelParams& params) {
  const std::size_t n = graph.num_entities();
  const std::size_t d = params.dim();
  Matrix h0(n, d);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    auto dst = h0.row(i);
    const auto edges = graph.adjacency(i);
    if (edges.empty()) {
      std::copy_n(params.entity_base.row(i).begin(), d, dst.begin());
      continue;
    }
    const double inv = 1.0 / static_cast<double>(edges.size());
    for (const Edge& e : edges) {
      axpy(inv, params.entity_base.row(e.neighbor), dst);
      axpy(inv, params.relation_emb.row(e.relation), dst);
    }
  }
  return h0;
}

std::vector<double> local_attention(const ModelParams& params, const UnifiedGraph& graph,
                                    std::size_t entity) {
  const auto edges = graph.adjacency(entity);
  std::vector<double> alpha(edges.size());
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    alpha[k] = dot(params.v1, params.relation_emb.row(edges[k].relation));
    max_logit = std::max(max_logit, alpha[k]);
  }
  double total = 0.0;
  for (double& a : alpha) {
    a = std::exp(a - max_logit);
    total += a;
  }
  for (double& a : alpha) a /= total;
  return alpha;
}

std::vector<double> global_attention(const Matrix& h_in, const ModelParams& params,
                                     const HighOrderNeighbors& neighbors, std::size_t entity) {
  const auto& list = neighbors.lists[entity];
  std::vector<double> beta(list.size());
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < list.size(); ++k) {
    beta[k] = dot(params.v2, h_in.row(list[k]));
    max_logit = std::max(max_logit, beta[k]);
  }
  double total = 0.0;
  for (double& b : beta) {
    b = std::exp(b - max_logit);
    total += b;
  }
  for (double& b : beta) b /= total;
  return beta;
}

Matrix local_layer(const Matrix& h_in, const ModelParams& params, const UnifiedGraph& graph) {
  const std::size_t n = graph.num_entities();
  const std::size_t d = params.dim();
  if (h_in.cols() != d || params.relation_emb.cols() != d) {
    throw Error(ErrorKind::kDimMismatch, "local layer width must equal the embedding dim");
  }
  Matrix out(n, d);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    auto dst = out.row(i);
    const auto edges = graph.adjacency(i);
    if (edges.empty()) {
      std::copy_n(h_in.row(i).begin(), d, dst.begin());
      continue;
    }
    const std::vector<double> alpha = local_attention(params, graph, i);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto h = h_in.row(edges[k].neighbor);
      const auto r = params.relation_emb.row(edges[k].relation);
      const double proj = dot(r, h);
      for (std::size_t c = 0; c < d; ++c) dst[c] += alpha[k] * (h[c] - 2.0 * proj * r[c]);
    }
    for (double& v : dst) v = std::tanh(v);
  }
  return out;
}

Matrix global_layer(const Matrix& h_in, const ModelParams& params,
                    const HighOrderNeighbors& neighbors) {
  const std::size_t n = h_in.rows();
  const std::size_t d = h_in.cols();
  if (neighbors.lists.size() != n) {
    throw Error(ErrorKind::kDimMismatch, "neighbour lists do not cover every entity");
  }
  Matrix out(n, d);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    auto dst = out.row(i);
    const auto& list = neighbors.lists[i];
    if (list.empty()) {
      std::copy_n(h_in.row(i).begin(), d, dst.begin());
      continue;
    }
    const std::vector<double> beta = global_attention(h_in, params, neighbors, i);
    for (std::size_t k = 0; k < list.size(); ++k) axpy(beta[k], h_in.row(list[k]), dst);
    for (double& v : dst) v = std::tanh(v);
  }
  return out;
}

ForwardTrace forward(const ModelParams& params, const UnifiedGraph& graph,
                     const HighOrderNeighbors& neighbors, std::size_t depth) {
  if (depth < 1) throw Error(ErrorKind::kInvalidArgument, "encoder depth must be >= 1");
  if (params.entity_base.rows() != graph.num_entities() ||
      params.relation_emb.rows() != graph.num_relation_slots()) {
    throw Error(ErrorKind::kDimMismatch, "parameters do not match the graph");
  }
  ForwardTrace trace;
  trace.depth = depth;
  trace.h0 = local_input_features(graph, params);
  for (std::size_t layer = 0; layer < depth; ++layer) {
    trace.local.push_back(local_layer(layer == 0 ? trace.h0 : trace.local.back(), params, graph));
    trace.global.push_back(
        global_layer(layer == 0 ? trace.h0 : trace.global.back(), params, neighbors));
  }

  const std::size_t n = graph.num_entities();
  const std::size_t d = params.dim();
  trace.final_embedding = Matrix(n, 2 * (depth + 1) * d);
  for (std::size_t i = 0; i < n; ++i) {
    auto dst = trace.final_embedding.row(i).begin();
    dst = std::copy_n(trace.h0.row(i).begin(), d, dst);
    for (const Matrix& m : trace.local) dst = std::copy_n(m.row(i).begin(), d, dst);
    dst = std::copy_n(trace.h0.row(i).begin(), d, dst);
    for (const Matrix& m : trace.global) dst = std::copy_n(m.row(i).begin(), d, dst);
  }
  return trace;
}

}  // namespace seedalign

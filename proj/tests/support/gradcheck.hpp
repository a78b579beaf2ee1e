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

// Central-difference check of the analytic gradients on a small two-graph
// fixture. Shared by the unit tests and the acceptance binary.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "seedalign/lgam.hpp"
#include "seedalign/train.hpp"

namespace gradcheck {

struct Setup {
  seedalign::UnifiedGraph graph;
  seedalign::HighOrderNeighbors neighbors;
  seedalign::ModelParams params;
  seedalign::SeedSet seeds;
  seedalign::LossConfig loss;
  std::size_t depth = 2;
};

// 3 + 3 entities, d = 8, depth 2, FULL negatives.
inline Setup six_entity_setup(std::uint64_t seed = 1) {
  using namespace seedalign;
  const KnowledgeGraph g1(1, 3, 2, {{0, 0, 1}, {1, 1, 2}, {0, 1, 2}});
  const KnowledgeGraph g2(2, 3, 2, {{0, 0, 1}, {1, 1, 2}, {2, 0, 0}});
  Setup s;
  s.graph = UnifiedGraph(g1, g2);
  s.neighbors = HighOrderNeighbors{2, {{1, 3}, {0, 4}, {5, 1}, {0, 4}, {3, 2}, {2, 1}}};
  s.params = init_params(6, s.graph.num_relation_slots(), 8, seed);
  // Larger attention vectors so the softmax derivatives are exercised.
  for (double& v : s.params.v1) v *= 4.0;
  for (double& v : s.params.v2) v *= 4.0;
  s.seeds.add({0, 0});
  s.seeds.add({1, 2});
  s.loss.neg_mode = NegativeMode::kFull;
  s.loss.gamma = 2.0;
  s.loss.lambda = 1.0;
  return s;
}

struct Result {
  double max_rel_err = 0.0;  // max |a - n| / max(|a|, |n|) over entries above the floor
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::string worst;
};

inline double loss_at(const Setup& s, const seedalign::ModelParams& p) {
  return seedalign::alignment_loss(seedalign::forward(p, s.graph, s.neighbors, s.depth), s.graph,
                                   s.seeds, s.loss);
}

// Entry passes when |a - n| <= tol * max(|a|, |n|) + abs_floor.
inline Result check(const Setup& s, double h = 1e-4, double tol = 1e-3, double abs_floor = 1e-6) {
  using namespace seedalign;
  const LossAndGradients lg = gradients(s.params, s.graph, s.neighbors, s.seeds, s.loss, s.depth);
  Result r;
  ModelParams p = s.params;
  const auto probe = [&](std::span<double> values, std::span<const double> analytic,
                         const char* block) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double keep = values[k];
      values[k] = keep + h;
      const double up = loss_at(s, p);
      values[k] = keep - h;
      const double down = loss_at(s, p);
      values[k] = keep;
      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic[k];
      const double diff = std::abs(a - numeric);
      const double scale = std::max(std::abs(a), std::abs(numeric));
      const double rel = diff / std::max(scale, abs_floor);
      ++r.checked;
      if (diff > tol * scale + abs_floor) ++r.failures;
      if (rel > r.max_rel_err && scale > abs_floor) {
        r.max_rel_err = rel;
        r.worst = std::string(block) + "[" + std::to_string(k) + "] analytic " +
                  std::to_string(a) + " numeric " + std::to_string(numeric);
      }
    }
  };
  probe(p.entity_base.values(), lg.grads.entity_base.values(), "entity_base");
  probe(p.relation_emb.values(), lg.grads.relation_emb.values(), "relation_emb");
  probe(p.v1, lg.grads.v1, "v1");
  probe(p.v2, lg.grads.v2, "v2");
  return r;
}

}  // namespace gradcheck

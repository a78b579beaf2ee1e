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
#include <functional>
#include <optional>
#include <vector>

#include "seedalign/kg.hpp"
#include "seedalign/lgam.hpp"
#include "seedalign/simcore.hpp"
#include "seedalign/train.hpp"

namespace seedalign {

struct TnecsConfig {
  double theta_fin = 0.05;
  std::size_t interval = 30;     // training epochs between corrections
  std::size_t max_updates = 3;
  std::size_t q = 15;
  std::size_t final_epochs = 30;  // training after the last correction
  bool correction = true;         // Xavier re-init of entity embeddings
  bool cumulative = false;        // keep earlier potential pairs that were not reselected
  std::uint64_t rng_seed = 0;
};

// CSLS(cos(H_fin1, H_fin2^T)) with G1 rows and G2 columns.
SimilarityMatrix final_similarity(const ForwardTrace& trace, std::size_t left_count,
                                  std::size_t q);
SimilarityMatrix final_cosine(const ForwardTrace& trace, std::size_t left_count);

// S_O from the mutual-nearest predicate against the PRE pairs of `seeds`,
// tagged ITER. Returns PRE u S_O, or seeds u S_O when cfg.cumulative.
SeedSet optimize_seeds(const SimilarityMatrix& m_fin, const TnecsConfig& cfg,
                       const SeedSet& seeds);

// Redraws entity_base uniformly on (-b, b), b = sqrt(6 / 2d), and zeroes its
// RMSprop accumulator. Relation embeddings and attention vectors are kept.
void embedding_correction(ModelParams& params, OptimizerState& state, std::uint64_t rng_seed);

struct UpdateRecord {
  std::size_t update = 0;
  std::size_t epoch = 0;  // epochs trained when the update fired
  std::size_t optimized = 0;  // |S_O|
  std::size_t expanded = 0;   // |S_E|
  std::optional<double> val_hits1;
};

struct IterationState {
  std::size_t epoch = 0;
  std::size_t updates = 0;
  SeedSet seeds;
  std::vector<UpdateRecord> history;
  std::vector<EpochRecord> epochs;
};

using UpdateObserver = std::function<void(const IterationState&, const ModelParams&,
                                          const OptimizerState&)>;

// {train interval epochs -> M_fin -> optimize_seeds -> correction} x
// max_updates, then final_epochs more training. Early stopping (patience) is
// only honoured in the final phase.
IterationState run_iterative(ModelParams& params, OptimizerState& state,
                             const UnifiedGraph& graph, const HighOrderNeighbors& neighbors,
                             const SeedSet& seeds, const TrainConfig& train_cfg,
                             const TnecsConfig& tnecs_cfg, const Validator& validator = {},
                             const EpochObserver& epoch_observer = {},
                             const UpdateObserver& update_observer = {});

}  // namespace seedalign

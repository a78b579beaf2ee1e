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

namespace seedalign {

enum class NegativeMode { kFull, kSampled };

// gamma and lambda have no published values; 2.0 / 1.0 are our defaults.
struct LossConfig {
  double gamma = 2.0;
  double lambda = 1.0;
  NegativeMode neg_mode = NegativeMode::kSampled;
  std::size_t neg_samples = 256;
  std::uint64_t rng_seed = 0;
};

void validate(const LossConfig& cfg);

// Euclidean distance between rows i and j of the final embedding.
double pair_distance(const ForwardTrace& trace, std::size_t i, std::size_t j);

// LogSumExp margin loss over the seed pairs, both directions:
//   sum log(1 + sum_{j'} exp(g (l + d(i,j) - d(i,j'))))
// + sum log(1 + sum_{i'} exp(g (l + d(i,j) - d(i',j))))
// Negatives exclude only the aligned partner. Under kSampled they are drawn
// with replacement, keyed by (rng_seed, epoch, pair index).
double alignment_loss(const ForwardTrace& trace, const UnifiedGraph& graph, const SeedSet& seeds,
                      const LossConfig& cfg, std::uint64_t epoch = 0);

struct Gradients {
  Matrix entity_base;
  Matrix relation_emb;
  std::vector<double> v1;
  std::vector<double> v2;

  static Gradients zeros_like(const ModelParams& params);
  bool all_finite() const;
};

struct LossAndGradients {
  double loss = 0.0;
  Gradients grads;
};

// Exact reverse-mode gradients of alignment_loss through the encoder.
// Throws kNonFiniteGradient if any entry is not finite.
LossAndGradients gradients(const ModelParams& params, const UnifiedGraph& graph,
                           const HighOrderNeighbors& neighbors, const SeedSet& seeds,
                           const LossConfig& cfg, std::size_t depth, std::uint64_t epoch = 0);

struct RmspropConfig {
  double lr = 0.01;
  double rho = 0.9;
  double eps = 1e-8;

  friend bool operator==(const RmspropConfig&, const RmspropConfig&) = default;
};

struct OptimizerState {
  RmspropConfig cfg;
  Matrix acc_entity;
  Matrix acc_relation;
  std::vector<double> acc_v1;
  std::vector<double> acc_v2;
  std::uint64_t steps = 0;

  friend bool operator==(const OptimizerState&, const OptimizerState&) = default;
};

OptimizerState make_optimizer_state(const ModelParams& params, const RmspropConfig& cfg = {});

// acc <- rho acc + (1 - rho) g^2;  p <- p - lr g / (sqrt(acc) + eps)
void rmsprop_update(std::span<double> params, std::span<const double> grads,
                    std::span<double> acc, const RmspropConfig& cfg);
void rmsprop_step(ModelParams& params, const Gradients& grads, OptimizerState& state);

struct TrainConfig {
  LossConfig loss;
  std::size_t depth = 2;
  std::size_t patience = 10;   // evaluations without val Hits@1 gain; 0 disables
  std::size_t eval_every = 1;  // epochs between validation passes
};

struct EpochRecord {
  std::size_t epoch = 0;
  double loss = 0.0;
  std::optional<double> val_hits1;
  std::size_t seeds_pre = 0;
  std::size_t seeds_init = 0;
  std::size_t seeds_iter = 0;
  double wall_ms = 0.0;
};

struct TrainResult {
  std::vector<EpochRecord> history;
  bool early_stopped = false;
};

// Returns validation Hits@1 for a forward trace.
using Validator = std::function<double(const ForwardTrace&)>;
using EpochObserver = std::function<void(const EpochRecord&)>;

// `first_epoch` offsets the global epoch counter (it keys negative sampling).
TrainResult train_epochs(ModelParams& params, OptimizerState& state, const UnifiedGraph& graph,
                         const HighOrderNeighbors& neighbors, const SeedSet& seeds,
                         const TrainConfig& cfg, std::size_t epochs, std::size_t first_epoch = 0,
                         const Validator& validator = {}, const EpochObserver& observer = {});

}  // namespace seedalign

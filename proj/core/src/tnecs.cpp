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

#include "seedalign/tnecs.hpp"

#include <algorithm>

#include "seedalign/error.hpp"
#include "seedalign/rng.hpp"

namespace seedalign {

namespace {

Matrix rows_of(const Matrix& m, std::size_t begin, std::size_t end) {
  Matrix out(end - begin, m.cols());
  std::copy(m.values().begin() + static_cast<std::ptrdiff_t>(begin * m.cols()),
            m.values().begin() + static_cast<std::ptrdiff_t>(end * m.cols()),
            out.values().begin());
  return out;
}

}  // namespace

SimilarityMatrix final_cosine(const ForwardTrace& trace, std::size_t left_count) {
  const Matrix& f = trace.final_embedding;
  if (left_count > f.rows()) throw Error(ErrorKind::kInvalidArgument, "left_count > entities");
  return cosine_matrix(rows_of(f, 0, left_count), rows_of(f, left_count, f.rows()));
}

SimilarityMatrix final_similarity(const ForwardTrace& trace, std::size_t left_count,
                                  std::size_t q) {
  return csls_adjust(final_cosine(trace, left_count), CslsParams{q});
}

SeedSet optimize_seeds(const SimilarityMatrix& m_fin, const TnecsConfig& cfg,
                       const SeedSet& seeds) {
  const SeedSet pre = seeds.filtered(Provenance::kPre);
  SeedSet out = cfg.cumulative ? seeds : pre;
  for (const ScoredPair& p : mutual_nearest_pairs(m_fin, cfg.theta_fin, pre)) {
    out.try_add({p.i, p.j, Provenance::kIter});
  }
  return out;
}

void embedding_correction(ModelParams& params, OptimizerState& state, std::uint64_t rng_seed) {
  Rng rng(mix64(rng_seed, 0xc0ec7));
  const std::size_t d = params.dim();
  xavier_fill(params.entity_base.values(), d, d, rng);
  state.acc_entity.fill(0.0);
}

IterationState run_iterative(ModelParams& params, OptimizerState& state,
                             const UnifiedGraph& graph, const HighOrderNeighbors& neighbors,
                             const SeedSet& seeds, const TrainConfig& train_cfg,
                             const TnecsConfig& tnecs_cfg, const Validator& validator,
                             const EpochObserver& epoch_observer,
                             const UpdateObserver& update_observer) {
  if (tnecs_cfg.interval < 1) throw Error(ErrorKind::kConfig, "interval must be >= 1");

  IterationState it;
  it.seeds = seeds;
  // Intervals run to full length; early stopping applies to the final phase.
  TrainConfig interval_cfg = train_cfg;
  interval_cfg.patience = 0;
  const auto train = [&](const TrainConfig& cfg, std::size_t epochs) {
    TrainResult r = train_epochs(params, state, graph, neighbors, it.seeds, cfg, epochs,
                                 it.epoch, validator, epoch_observer);
    it.epoch += r.history.size();
    it.epochs.insert(it.epochs.end(), r.history.begin(), r.history.end());
  };

  for (std::size_t update = 0; update < tnecs_cfg.max_updates; ++update) {
    train(interval_cfg, tnecs_cfg.interval);
    const ForwardTrace trace = forward(params, graph, neighbors, train_cfg.depth);
    const SimilarityMatrix m_fin = final_similarity(trace, graph.left_count(), tnecs_cfg.q);

    UpdateRecord rec;
    rec.update = update;
    rec.epoch = it.epoch;
    if (validator) rec.val_hits1 = validator(trace);
    it.seeds = optimize_seeds(m_fin, tnecs_cfg, it.seeds);
    rec.optimized = it.seeds.count(Provenance::kIter);
    rec.expanded = it.seeds.size();
    if (tnecs_cfg.correction) {
      embedding_correction(params, state, mix64(tnecs_cfg.rng_seed, update));
    }
    it.updates = update + 1;
    it.history.push_back(rec);
    if (update_observer) update_observer(it, params, state);
  }
  if (tnecs_cfg.final_epochs > 0) train(train_cfg, tnecs_cfg.final_epochs);
  return it;
}

}  // namespace seedalign

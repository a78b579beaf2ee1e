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

#include <filesystem>
#include <string>
#include <vector>

#include "seedalign/checkpoint.hpp"
#include "seedalign/config.hpp"
#include "seedalign/eval.hpp"
#include "seedalign/kg.hpp"
#include "seedalign/lgam.hpp"
#include "seedalign/tnecs.hpp"

namespace seedalign {

DatasetBundle load_dataset(const RunConfig& cfg);

struct ExpansionOutcome {
  SeedSet seeds;  // PRE u INIT
  std::vector<ScoredPair> candidates;
};

// Neighbourhood semantics, fused CSLS and INIT selection over the PRE split.
ExpansionOutcome run_seed_expansion(const DatasetBundle& data, const RunConfig& cfg);

struct Model {
  UnifiedGraph graph;
  HighOrderNeighbors neighbors;
  ModelParams params;
  OptimizerState optimizer;
};

Model build_model(const DatasetBundle& data, const RunConfig& cfg);

// Score matrix used for reporting (CSLS of the final embeddings unless
// eval_raw_cosine).
EvalReport evaluate_model(const Model& model, const DatasetBundle& data, const RunConfig& cfg,
                          const SeedSet& test);

struct TrainingRun {
  ExpansionOutcome expansion;
  Model model;
  IterationState state;
};

// Seed expansion, model construction and the iterative schedule. With
// write_artifacts the out_dir receives expanded_seeds.txt, expansion.json,
// train_log.jsonl, tnecs-history.json and checkpoints.
TrainingRun run_training(const DatasetBundle& data, const RunConfig& cfg, bool write_artifacts);

// Rebuilds graph and neighbour lists from the dataset and takes parameters,
// optimizer state and depth/K/Q from the checkpoint.
Model restore_model(const DatasetBundle& data, const Checkpoint& ckpt);

struct PipelineResult {
  EvalReport report;
  std::string report_json;
  ExpansionOutcome expansion;
  IterationState state;
};

// ingest -> seed expansion -> global neighbours -> iterative training ->
// evaluation. Adds report.json / report.csv to the training artifacts.
PipelineResult run_pipeline(const RunConfig& cfg, bool write_artifacts = true);

void write_report(const std::filesystem::path& out_dir, const EvalReport& report,
                  const RunConfig& cfg);
std::string report_to_json(const EvalReport& report, const RunConfig& cfg);
std::string report_csv_header(const std::vector<std::string>& keys);
std::string report_to_csv_row(const EvalReport& report, const RunConfig& cfg,
                              const std::vector<std::string>& keys);

}  // namespace seedalign

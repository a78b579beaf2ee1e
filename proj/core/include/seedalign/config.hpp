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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "seedalign/eval.hpp"
#include "seedalign/kg.hpp"
#include "seedalign/seedx.hpp"
#include "seedalign/tnecs.hpp"
#include "seedalign/train.hpp"

namespace seedalign {

enum class SemanticSource { kFile, kPseudo };

// Every knob of a pipeline run. Text form is "key = value" per line with '#'
// comments; see config_keys() for the names. Defaults follow the published
// hyperparameters, except gamma/lambda/neg_mode which are ours.
struct RunConfig {
  // Dataset directory with triples_1, triples_2, ent_ids_1, ent_ids_2,
  // rel_ids_1, rel_ids_2, ref_ent_ids, sem_1.emb, sem_2.emb.
  std::string dataset_dir;
  std::string out_dir = "out";
  SemanticSource sem_source = SemanticSource::kFile;
  std::size_t sem_dim = 0;  // 0: take the dimension from the file

  std::size_t dim = 100;
  std::size_t depth = 2;
  std::size_t csls_q = 15;
  std::size_t topk_k = 15;
  double epsilon = 0.5;
  double theta_sem = 0.01;
  double theta_fin = 0.05;
  double lr = 0.01;
  double rho = 0.9;
  double rms_eps = 1e-8;
  std::size_t interval = 30;
  std::size_t max_updates = 3;
  std::size_t final_epochs = 30;
  double gamma = 2.0;
  double lambda = 1.0;
  NegativeMode neg_mode = NegativeMode::kSampled;
  std::size_t neg_samples = 256;
  std::uint64_t rng_seed = 0;
  double train_frac = 0.3;
  double valid_frac = 0.1;
  double test_frac = 0.6;
  std::size_t patience = 10;
  std::size_t eval_every = 1;
  bool seed_expansion = true;
  bool embedding_correction = true;
  bool cumulative_seeds = false;
  Direction eval_direction = Direction::kLeftToRight;
  bool eval_raw_cosine = false;
  bool eval_exclude_seeds = false;
  std::size_t threads = 0;  // 0: library default

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  SeedExpansionConfig seed_expansion_config() const;
  TrainConfig train_config() const;
  TnecsConfig tnecs_config() const;
  RmspropConfig optimizer_config() const;
  SplitFractions split_fractions() const;
};

const std::vector<std::string>& config_keys();

// Throws kConfig on unknown keys or unparsable values.
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);
std::string get_config_value(const RunConfig& cfg, std::string_view key);
// "key=value"
void apply_override(RunConfig& cfg, std::string_view assignment);

RunConfig parse_config(std::string_view text);
std::string format_config(const RunConfig& cfg);
RunConfig load_config(const std::filesystem::path& path);

// Range checks across modules; throws kConfig.
void validate(const RunConfig& cfg);

}  // namespace seedalign

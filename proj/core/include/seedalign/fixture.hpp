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

#include "seedalign/kg.hpp"

namespace seedalign {

// Synthetic aligned pair: G1 is a random multigraph-free triple set; G2 is a
// random relabelling of G1 with each triple dropped with probability
// `edge_dropout`. Semantic vectors share a unit base vector u per aligned
// pair: sem = normalize(u + sigma * xi), xi ~ N(0, I / sem_dim), drawn
// independently per side, so sigma is the expected noise norm relative to u.
struct FixtureConfig {
  std::size_t entities = 200;
  std::size_t triples = 600;
  std::size_t relations = 8;
  double edge_dropout = 0.0;
  double semantic_noise = 0.1;
  std::size_t sem_dim = 32;
  std::uint64_t seed = 1;
};

struct Fixture {
  KnowledgeGraph kg1;
  KnowledgeGraph kg2;
  EmbeddingTable sem1;
  EmbeddingTable sem2;
  SeedSet reference;
};

Fixture generate_fixture(const FixtureConfig& cfg);

// Writes the standard dataset layout read by load_dataset().
void write_fixture(const Fixture& fixture, const std::filesystem::path& dir);

}  // namespace seedalign

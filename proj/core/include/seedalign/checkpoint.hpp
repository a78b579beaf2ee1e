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
#include "seedalign/lgam.hpp"
#include "seedalign/train.hpp"

namespace seedalign {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  std::uint32_t depth = 2;
  std::uint32_t k = 15;
  std::uint32_t q = 15;
  std::uint64_t left_count = 0;  // |E1|
  std::uint64_t epoch = 0;
  std::uint64_t updates = 0;
  ModelParams params;
  OptimizerState optimizer;
  SeedSet seeds;
};

// Layout (little endian):
//   char[8] "SACKPT\0\0", u32 version,
//   payload: u64 entities, u64 relation slots, u32 d, u32 depth, u32 k, u32 q,
//            u64 left_count, u64 epoch, u64 updates,
//            f64 entity_base, f64 relation_emb, f64 v1, f64 v2,
//            f64 lr, f64 rho, f64 eps, u64 steps, f64 accumulators (same
//            order as the parameter blocks),
//            u64 seed count, seed count x { u32 e1, u32 e2, u8 provenance },
//   u32 crc32(payload).
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);

// Throws kVersionMismatch or kCorruptChecksum.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace seedalign

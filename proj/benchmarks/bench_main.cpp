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

#include <benchmark/benchmark.h>

#include "seedalign/fixture.hpp"
#include "seedalign/lgam.hpp"
#include "seedalign/rng.hpp"
#include "seedalign/simcore.hpp"
#include "seedalign/train.hpp"

namespace sa = seedalign;

namespace {

sa::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  sa::Rng rng(seed);
  sa::Matrix m(rows, cols);
  for (double& v : m.values()) v = rng.normal();
  return m;
}

struct Problem {
  sa::UnifiedGraph graph;
  sa::HighOrderNeighbors neighbors;
  sa::ModelParams params;
  sa::SeedSet seeds;
};

Problem make_problem(std::size_t entities, std::size_t dim) {
  sa::FixtureConfig fc;
  fc.entities = entities;
  fc.triples = entities * 3;
  const auto fx = sa::generate_fixture(fc);
  Problem p;
  p.graph = sa::UnifiedGraph(fx.kg1, fx.kg2);
  sa::EmbeddingTable all(2 * entities, fx.sem1.dim());
  for (std::size_t i = 0; i < entities; ++i) {
    for (std::size_t k = 0; k < fx.sem1.dim(); ++k) {
      all.vectors(i, k) = fx.sem1.vectors(i, k);
      all.vectors(entities + i, k) = fx.sem2.vectors(i, k);
    }
  }
  p.neighbors = sa::global_neighbors(all, 15, 15);
  p.params = sa::init_params(2 * entities, p.graph.num_relation_slots(), dim, 1);
  for (const auto& pr : fx.reference.pairs())
    if (pr.e1 % 3 == 0) p.seeds.add(pr);
  return p;
}

}  // namespace

static void BM_Cosine(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, 100, 1), b = random_matrix(n, 100, 2);
  for (auto _ : state) benchmark::DoNotOptimize(sa::cosine_matrix(a, b));
}
BENCHMARK(BM_Cosine)->Arg(200)->Arg(1000);

static void BM_Csls(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = sa::cosine_matrix(random_matrix(n, 64, 1), random_matrix(n, 64, 2));
  for (auto _ : state) benchmark::DoNotOptimize(sa::csls_adjust(m, {15}));
}
BENCHMARK(BM_Csls)->Arg(200)->Arg(1000);

static void BM_MutualPairs(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = sa::cosine_matrix(random_matrix(n, 64, 1), random_matrix(n, 64, 2));
  const sa::SeedSet none;
  for (auto _ : state) benchmark::DoNotOptimize(sa::mutual_nearest_pairs(m, 0.0, none));
}
BENCHMARK(BM_MutualPairs)->Arg(200)->Arg(1000);

static void BM_Forward(benchmark::State& state) {
  const auto p = make_problem(static_cast<std::size_t>(state.range(0)), 100);
  for (auto _ : state) benchmark::DoNotOptimize(sa::forward(p.params, p.graph, p.neighbors, 2));
}
BENCHMARK(BM_Forward)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_Gradients(benchmark::State& state) {
  const auto p = make_problem(static_cast<std::size_t>(state.range(0)), 100);
  sa::LossConfig loss;
  loss.neg_samples = 256;
  for (auto _ : state)
    benchmark::DoNotOptimize(sa::gradients(p.params, p.graph, p.neighbors, p.seeds, loss, 2));
}
BENCHMARK(BM_Gradients)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

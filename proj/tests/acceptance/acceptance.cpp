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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Set SEEDALIGN_DBP15K_DIR to also run a full-data smoke run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.hpp"
#include "oracles.hpp"
#include "seedalign/config.hpp"
#include "seedalign/eval.hpp"
#include "seedalign/fixture.hpp"
#include "seedalign/pipeline.hpp"
#include "seedalign/simcore.hpp"
#include "seedalign/tnecs.hpp"

namespace sa = seedalign;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

sa::SimilarityMatrix from_dense(const oracle::Dense& d) {
  sa::SimilarityMatrix m(d.size(), d.front().size());
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d[i].size(); ++j) m(i, j) = d[i][j];
  return m;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

fs::path write_fixture_dir(const std::string& name, const sa::FixtureConfig& fc) {
  const auto dir = oracle::temp_dir("acceptance_" + name);
  sa::write_fixture(sa::generate_fixture(fc), dir);
  return dir;
}

sa::RunConfig fixture_run(const fs::path& dir, double train_frac) {
  sa::RunConfig cfg;
  cfg.dataset_dir = dir.string();
  cfg.out_dir = (dir / "out").string();
  cfg.train_frac = train_frac;
  cfg.valid_frac = 0.1;
  cfg.test_frac = 1.0 - train_frac - 0.1;
  return cfg;
}

Outcome csls_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(101);
  std::uniform_int_distribution<std::size_t> dim(1, 20);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t r = dim(gen), c = dim(gen);
    const auto d = oracle::random_dense(gen, r, c);
    const std::size_t q = std::uniform_int_distribution<std::size_t>(1, std::min(r, c))(gen);
    const auto want = oracle::csls(d, q);
    const auto got = sa::csls_adjust(from_dense(d), {q});
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) worst = std::max(worst, std::abs(got(i, j) - want[i][j]));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 1.0,
          "max abs err " + fmt("%.3g", worst) + ", " + fmt("%.3f", secs) + " s"};
}

Outcome predicate_oracle() {
  std::mt19937_64 gen(202);
  std::uniform_int_distribution<std::size_t> dim(1, 15);
  std::bernoulli_distribution coin(0.3);
  std::size_t mismatches = 0, property_violations = 0, pairs = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t r = dim(gen), c = dim(gen);
    auto d = oracle::random_dense(gen, r, c);
    if (t % 3 == 0)
      for (auto& row : d)
        for (auto& v : row) v = std::round(v * 4.0) / 4.0;
    sa::SeedSet seeds;
    std::vector<bool> sl(r, false), sr(c, false);
    for (std::size_t i = 0; i < std::min(r, c); ++i) {
      const std::size_t j = (i * 5 + t) % c;
      if (coin(gen) && seeds.try_add({static_cast<sa::EntityId>(i), static_cast<sa::EntityId>(j)})) {
        sl[i] = true;
        sr[j] = true;
      }
    }
    const double th = std::uniform_real_distribution<double>(-0.5, 0.8)(gen);
    const auto want = oracle::mutual_pairs(d, th, sl, sr);
    const auto got = sa::mutual_nearest_pairs(from_dense(d), th, seeds);
    if (got.size() != want.size()) {
      ++mismatches;
      continue;
    }
    std::set<sa::EntityId> li, rj;
    for (std::size_t k = 0; k < got.size(); ++k) {
      if (got[k].i != want[k].i || got[k].j != want[k].j || got[k].score != want[k].score)
        ++mismatches;
      if (!(got[k].score > th) || !li.insert(got[k].i).second || !rj.insert(got[k].j).second)
        ++property_violations;
    }
    pairs += got.size();
  }
  return {mismatches == 0 && property_violations == 0,
          std::to_string(pairs) + " pairs, " + std::to_string(mismatches) + " mismatches, " +
              std::to_string(property_violations) + " property violations"};
}

Outcome gradient_check() {
  const auto t0 = Clock::now();
  const auto s = gradcheck::six_entity_setup(1);
  const auto r = gradcheck::check(s, 1e-4, 1e-3);
  const double secs = seconds_since(t0);
  return {r.failures == 0 && secs < 10.0,
          std::to_string(r.checked) + " entries, max rel err " + fmt("%.3g", r.max_rel_err) +
              ", " + fmt("%.2f", secs) + " s"};
}

Outcome isomorphic_recovery() {
  const auto t0 = Clock::now();
  const auto dir = write_fixture_dir("iso", sa::FixtureConfig{});
  const auto r = sa::run_pipeline(fixture_run(dir, 0.1), false);
  const double secs = seconds_since(t0);
  const double h1 = r.report.hits.at(1);
  return {h1 >= 0.90 && r.report.mrr >= 0.93 && secs < 300.0,
          "hits@1 " + fmt("%.4f", h1) + ", mrr " + fmt("%.4f", r.report.mrr) + ", n_test " +
              std::to_string(r.report.n_test) + ", " + fmt("%.1f", secs) + " s"};
}

// Hits@1 on the noisy fixture, indexed [expansion][correction][rng seed - 1].
struct AblationGrid {
  double h1[2][2][5];
};

const AblationGrid& ablation_grid() {
  static const AblationGrid grid = [] {
    sa::FixtureConfig fc;
    fc.semantic_noise = 0.3;
    fc.edge_dropout = 0.2;
    const auto dir = write_fixture_dir("ablation", fc);
    AblationGrid g{};
    for (int e = 0; e < 2; ++e)
      for (int c = 0; c < 2; ++c)
        for (int s = 0; s < 5; ++s) {
          auto cfg = fixture_run(dir, 0.1);
          cfg.seed_expansion = e == 1;
          cfg.embedding_correction = c == 1;
          cfg.rng_seed = static_cast<std::uint64_t>(s + 1);
          g.h1[e][c][s] = sa::run_pipeline(cfg, false).report.hits.at(1);
        }
    return g;
  }();
  return grid;
}

Outcome ablation_expansion() {
  const auto& g = ablation_grid();
  std::ostringstream os;
  int wins = 0;
  for (int c = 0; c < 2; ++c) {
    os << (c ? " | correction:" : "correction off:");
    for (int s = 0; s < 5; ++s) {
      wins += g.h1[1][c][s] >= g.h1[0][c][s];
      os << ' ' << fmt("%.3f", g.h1[1][c][s]) << '/' << fmt("%.3f", g.h1[0][c][s]);
    }
  }
  os << " (with/without expansion)";
  return {wins == 10, os.str()};
}

Outcome ablation_correction() {
  const auto& g = ablation_grid();
  std::ostringstream os;
  int wins = 0;
  for (int s = 0; s < 5; ++s) {
    wins += g.h1[0][1][s] >= g.h1[0][0][s];
    os << (s ? " " : "") << fmt("%.3f", g.h1[0][1][s]) << '/' << fmt("%.3f", g.h1[0][0][s]);
  }
  os << " (with/without correction, no expansion), " << wins << "/5";
  return {wins == 5, os.str()};
}

Outcome unsupervised() {
  sa::FixtureConfig fc;
  fc.semantic_noise = 0.05;
  const auto dir = write_fixture_dir("unsup", fc);
  const auto r = sa::run_pipeline(fixture_run(dir, 0.0), false);
  const double h1 = r.report.hits.at(1);
  return {h1 >= 0.80, "hits@1 " + fmt("%.4f", h1) + ", init seeds " +
                          std::to_string(r.expansion.seeds.count(sa::Provenance::kInit))};
}

Outcome xavier_statistics() {
  constexpr std::size_t kEntities = 400, kDim = 100;
  const double target = 1.0 / static_cast<double>(kDim);
  const double bound = sa::xavier_bound(kDim, kDim);
  double lo = 1e9, hi = 0.0;
  std::size_t out_of_bounds = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto p = sa::init_params(kEntities, 8, kDim, seed);
    auto st = sa::make_optimizer_state(p);
    sa::embedding_correction(p, st, seed * 7919);
    double sum = 0.0, sq = 0.0;
    for (double v : p.entity_base.values()) {
      out_of_bounds += std::abs(v) > bound;
      sum += v;
      sq += v * v;
    }
    const double n = static_cast<double>(p.entity_base.size());
    const double var = (sq - sum * sum / n) / (n - 1.0);
    lo = std::min(lo, var);
    hi = std::max(hi, var);
  }
  const bool ok = lo >= 0.9 * target && hi <= 1.1 * target && out_of_bounds == 0;
  return {ok, "variance range [" + fmt("%.5f", lo) + ", " + fmt("%.5f", hi) + "] vs 1/d " +
                  fmt("%.5f", target) + ", " + std::to_string(out_of_bounds) + " out of bounds"};
}

Outcome metric_oracles() {
  std::mt19937_64 gen(303);
  std::uniform_int_distribution<std::size_t> dim(2, 25);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = dim(gen);
    auto d = oracle::random_dense(gen, n, n);
    if (t % 4 == 0)
      for (auto& r : d)
        for (auto& v : r) v = std::round(v * 2.0) / 2.0;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    sa::SeedSet test;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; i += 1 + t % 2) {
      test.add({static_cast<sa::EntityId>(i), static_cast<sa::EntityId>(perm[i])});
      pairs.emplace_back(i, perm[i]);
    }
    const auto m = from_dense(d);
    for (std::size_t k : {1u, 3u, 10u})
      worst = std::max(worst, std::abs(sa::hits_at_k(m, test, k) - oracle::hits(d, pairs, k)));
    worst = std::max(worst, std::abs(sa::mrr(m, test) - oracle::mrr(d, pairs)));
  }
  return {worst <= 1e-12, "max abs err " + fmt("%.3g", worst)};
}

Outcome determinism() {
  sa::FixtureConfig fc;
  fc.entities = 100;
  fc.triples = 300;
  fc.edge_dropout = 0.1;
  fc.semantic_noise = 0.2;
  const auto dir = write_fixture_dir("det", fc);
  auto cfg = fixture_run(dir, 0.2);
  cfg.rng_seed = 42;
  const auto a = sa::run_pipeline(cfg, false).report_json;
  const auto b = sa::run_pipeline(cfg, false).report_json;
  return {a == b, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "differ")};
}

Outcome dbp15k(const char* dir) {
  // Optional config file for the full-data run; defaults otherwise.
  const char* config = std::getenv("SEEDALIGN_DBP15K_CONFIG");
  sa::RunConfig cfg = config ? sa::load_config(config) : sa::RunConfig{};
  cfg.dataset_dir = dir;
  cfg.out_dir = (oracle::temp_dir("acceptance_dbp15k") / "out").string();
  const auto r = sa::run_pipeline(cfg, true);
  return {true, "hits@1 " + fmt("%.4f", r.report.hits.at(1)) + ", mrr " + fmt("%.4f", r.report.mrr)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {"csls-oracle", csls_oracle},
      {"predicate-oracle", predicate_oracle},
      {"gradient-check", gradient_check},
      {"isomorphic-recovery", isomorphic_recovery},
      {"ablation-expansion", ablation_expansion},
      {"ablation-correction", ablation_correction},
      {"unsupervised", unsupervised},
      {"xavier-statistics", xavier_statistics},
      {"metric-oracles", metric_oracles},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  if (const char* dir = std::getenv("SEEDALIGN_DBP15K_DIR")) {
    try {
      const auto o = dbp15k(dir);
      std::printf("INFO dbp15k: %s\n", o.detail.c_str());
    } catch (const std::exception& e) {
      std::printf("INFO dbp15k: exception: %s\n", e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

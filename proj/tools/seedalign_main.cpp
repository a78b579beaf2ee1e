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

// seedalign command line driver.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "seedalign/checkpoint.hpp"
#include "seedalign/config.hpp"
#include "seedalign/error.hpp"
#include "seedalign/fixture.hpp"
#include "seedalign/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace seedalign;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string dataset;
  std::string out;
  std::size_t threads = 0;
};

RunConfig resolve_config(const GlobalOptions& g) {
  RunConfig cfg = g.config_path.empty() ? RunConfig{} : load_config(g.config_path);
  for (const auto& o : g.overrides) apply_override(cfg, o);
  if (!g.dataset.empty()) cfg.dataset_dir = g.dataset;
  if (!g.out.empty()) cfg.out_dir = g.out;
  if (g.threads > 0) cfg.threads = g.threads;
  validate(cfg);
#ifdef _OPENMP
  if (cfg.threads > 0) omp_set_num_threads(static_cast<int>(cfg.threads));
#endif
  return cfg;
}

void write_json(const fs::path& path, const json& j) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json graph_summary(const KnowledgeGraph& kg, const EmbeddingTable& sem) {
  std::size_t missing = 0;
  for (std::size_t r = 0; r < sem.rows(); ++r) missing += sem.is_missing(r) ? 1 : 0;
  return json{{"entities", kg.num_entities()},
              {"relations", kg.num_relations()},
              {"triples", kg.triples().size()},
              {"duplicates_dropped", kg.duplicates_dropped()},
              {"semantic_dim", sem.dim()},
              {"semantic_missing", missing}};
}

int cmd_ingest(const GlobalOptions& g) {
  const RunConfig cfg = resolve_config(g);
  const DatasetBundle data = load_dataset(cfg);
  const json summary{{"kg1", graph_summary(data.kg1, data.sem1)},
                     {"kg2", graph_summary(data.kg2, data.sem2)},
                     {"reference", data.reference.size()},
                     {"train", data.splits.train.size()},
                     {"valid", data.splits.valid.size()},
                     {"test", data.splits.test.size()}};
  write_json(fs::path(cfg.out_dir) / "ingest.json", summary);
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int cmd_expand(const GlobalOptions& g) {
  const RunConfig cfg = resolve_config(g);
  const DatasetBundle data = load_dataset(cfg);
  const ExpansionOutcome e = run_seed_expansion(data, cfg);
  const fs::path out = cfg.out_dir;
  write_seed_pairs(out / "expanded_seeds.txt", e.seeds, data.kg1, data.kg2);
  const json summary{{"pre", e.seeds.count(Provenance::kPre)},
                     {"init", e.seeds.count(Provenance::kInit)},
                     {"candidates", e.candidates.size()}};
  std::cout << summary.dump() << '\n';
  return 0;
}

int cmd_train(const GlobalOptions& g) {
  const RunConfig cfg = resolve_config(g);
  const DatasetBundle data = load_dataset(cfg);
  const TrainingRun run = run_training(data, cfg, true);
  std::cout << "epochs " << run.state.epoch << ", updates " << run.state.updates << ", seeds "
            << run.state.seeds.size() << ", checkpoint "
            << (fs::path(cfg.out_dir) / "checkpoint.bin").string() << '\n';
  return 0;
}

int cmd_evaluate(const GlobalOptions& g, const std::string& checkpoint_path) {
  RunConfig cfg = resolve_config(g);
  const DatasetBundle data = load_dataset(cfg);
  const fs::path ckpt_path =
      checkpoint_path.empty() ? fs::path(cfg.out_dir) / "checkpoint.bin" : fs::path(checkpoint_path);
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  cfg.depth = ckpt.depth;
  cfg.topk_k = ckpt.k;
  cfg.csls_q = ckpt.q;
  const Model model = restore_model(data, ckpt);
  const EvalReport report = evaluate_model(model, data, cfg, data.splits.test);
  write_report(cfg.out_dir, report, cfg);
  std::cout << report_to_json(report, cfg);
  return 0;
}

int cmd_run(const GlobalOptions& g) {
  const RunConfig cfg = resolve_config(g);
  const PipelineResult result = run_pipeline(cfg, true);
  std::cout << result.report_json;
  return 0;
}

// "key=v1,v2,..." -> (key, values)
std::pair<std::string, std::vector<std::string>> parse_grid(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw Error(ErrorKind::kConfig, "grid entry must look like key=v1,v2: " + spec);
  }
  std::vector<std::string> values;
  std::string rest = spec.substr(eq + 1);
  std::size_t start = 0;
  while (start <= rest.size()) {
    const auto comma = rest.find(',', start);
    const auto end = comma == std::string::npos ? rest.size() : comma;
    if (end > start) values.push_back(rest.substr(start, end - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return {spec.substr(0, eq), values};
}

int cmd_sweep(const GlobalOptions& g, const std::vector<std::string>& grid_specs,
              const std::string& csv_path) {
  const RunConfig base = resolve_config(g);
  std::vector<std::pair<std::string, std::vector<std::string>>> grid;
  std::vector<std::string> keys;
  for (const auto& spec : grid_specs) {
    grid.push_back(parse_grid(spec));
    keys.push_back(grid.back().first);
    RunConfig probe = base;
    for (const auto& v : grid.back().second) set_config_value(probe, grid.back().first, v);
  }
  const fs::path csv = csv_path.empty() ? fs::path(base.out_dir) / "sweep.csv" : fs::path(csv_path);
  fs::create_directories(csv.parent_path().empty() ? fs::path(".") : csv.parent_path());
  std::ofstream out(csv);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + csv.string());
  out << report_csv_header(keys);
  std::cout << report_csv_header(keys);

  std::vector<std::size_t> idx(grid.size(), 0);
  std::size_t run = 0;
  for (;;) {
    RunConfig cfg = base;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      set_config_value(cfg, grid[k].first, grid[k].second[idx[k]]);
    }
    cfg.out_dir = (fs::path(base.out_dir) / ("sweep_" + std::to_string(run++))).string();
    const PipelineResult result = run_pipeline(cfg, true);
    const std::string row = report_to_csv_row(result.report, cfg, keys);
    out << row << std::flush;
    std::cout << row << std::flush;

    std::size_t k = 0;
    for (; k < grid.size(); ++k) {
      if (++idx[k] < grid[k].second.size()) break;
      idx[k] = 0;
    }
    if (k == grid.size()) break;
  }
  return 0;
}

int cmd_gen_fixture(const FixtureConfig& fc, const std::string& out_dir) {
  const Fixture fx = generate_fixture(fc);
  write_fixture(fx, out_dir);
  std::cout << "wrote " << fx.kg1.num_entities() << "+" << fx.kg2.num_entities()
            << " entities, " << fx.kg1.triples().size() << "/" << fx.kg2.triples().size()
            << " triples to " << out_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-supervised knowledge graph entity alignment"};
  app.require_subcommand(1);

  GlobalOptions g;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", g.config_path, "key = value configuration file");
    sub->add_option("-s,--set", g.overrides, "override, key=value (repeatable)");
    sub->add_option("-d,--dataset", g.dataset, "dataset directory (overrides dataset_dir)");
    sub->add_option("-o,--out", g.out, "output directory (overrides out_dir)");
    sub->add_option("--threads", g.threads, "cap on worker threads");
  };

  auto* ingest = app.add_subcommand("ingest", "load and validate a dataset directory");
  add_common(ingest);
  auto* expand = app.add_subcommand("expand-seeds", "semantic seed expansion only");
  add_common(expand);
  auto* train = app.add_subcommand("train", "expansion plus iterative training; writes checkpoint");
  add_common(train);
  std::string checkpoint_path;
  auto* evaluate = app.add_subcommand("evaluate", "score the test split from a checkpoint");
  add_common(evaluate);
  evaluate->add_option("--checkpoint", checkpoint_path, "checkpoint file (default out/checkpoint.bin)");
  auto* run = app.add_subcommand("run", "full pipeline");
  add_common(run);
  std::vector<std::string> grid;
  std::string csv_path;
  auto* sweep = app.add_subcommand("sweep", "grid over config values, one CSV row per run");
  add_common(sweep);
  sweep->add_option("-g,--grid", grid, "key=v1,v2,... (repeatable)")->required();
  sweep->add_option("--csv", csv_path, "CSV output (default out/sweep.csv)");

  FixtureConfig fc;
  std::string fixture_out = "fixture";
  auto* gen = app.add_subcommand("gen-fixture", "synthetic aligned graph pair");
  gen->add_option("-o,--out", fixture_out, "output directory");
  gen->add_option("--entities", fc.entities, "entities per graph")->check(CLI::PositiveNumber);
  gen->add_option("--triples", fc.triples, "triples in the first graph")->check(CLI::PositiveNumber);
  gen->add_option("--relations", fc.relations, "relation types")->check(CLI::PositiveNumber);
  gen->add_option("--dropout", fc.edge_dropout, "edge dropout for the second graph")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--noise", fc.semantic_noise, "semantic noise sigma")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--sem-dim", fc.sem_dim, "semantic vector dimension")
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", fc.seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code_for(ErrorKind::kConfig);
  }

  try {
    if (*ingest) return cmd_ingest(g);
    if (*expand) return cmd_expand(g);
    if (*train) return cmd_train(g);
    if (*evaluate) return cmd_evaluate(g, checkpoint_path);
    if (*run) return cmd_run(g);
    if (*sweep) return cmd_sweep(g, grid, csv_path);
    if (*gen) return cmd_gen_fixture(fc, fixture_out);
  } catch (const Error& e) {
    std::cerr << "error [" << error_kind_name(e.kind()) << "]: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error [io]: " << e.what() << '\n';
    return exit_code_for(ErrorKind::kIo);
  }
  return 0;
}

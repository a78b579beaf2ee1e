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

#include "seedalign/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "seedalign/error.hpp"
#include "seedalign/rng.hpp"
#include "seedalign/seedx.hpp"
#include "text_io.hpp"

namespace seedalign {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::optional<fs::path> if_exists(const fs::path& p) {
  return fs::exists(p) ? std::optional<fs::path>(p) : std::nullopt;
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = detail::open_output(path);
  out << text;
}

json seed_counts(const SeedSet& s) {
  return json{{"pre", s.count(Provenance::kPre)},
              {"init", s.count(Provenance::kInit)},
              {"iter", s.count(Provenance::kIter)}};
}

json expansion_summary(const ExpansionOutcome& e) {
  // Histogram of accepted INIT scores, fixed-width bins over [min, max].
  json hist = json::array();
  std::vector<double> scores;
  for (const ScoredPair& p : e.candidates) {
    const auto partner = e.seeds.partner_of_left(p.i);
    if (partner && *partner == p.j) scores.push_back(p.score);
  }
  if (!scores.empty()) {
    constexpr std::size_t kBins = 10;
    const auto [lo_it, hi_it] = std::minmax_element(scores.begin(), scores.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    std::array<std::size_t, kBins> counts{};
    for (double s : scores) {
      auto bin = hi > lo ? static_cast<std::size_t>((s - lo) / (hi - lo) * kBins) : 0;
      counts[std::min(bin, kBins - 1)]++;
    }
    for (std::size_t b = 0; b < kBins; ++b) {
      const double width = (hi - lo) / kBins;
      hist.push_back(json{{"lo", lo + width * static_cast<double>(b)},
                          {"hi", lo + width * static_cast<double>(b + 1)},
                          {"count", counts[b]}});
    }
  }
  return json{{"counts", seed_counts(e.seeds)}, {"total", e.seeds.size()},
              {"score_histogram", hist}};
}

json config_echo(const RunConfig& cfg) {
  json echo = json::object();
  for (const std::string& key : config_keys()) echo[key] = get_config_value(cfg, key);
  return echo;
}

void apply_threads(const RunConfig& cfg) {
#ifdef _OPENMP
  if (cfg.threads > 0) omp_set_num_threads(static_cast<int>(cfg.threads));
#else
  (void)cfg;
#endif
}

}  // namespace

DatasetBundle load_dataset(const RunConfig& cfg) {
  const fs::path dir = cfg.dataset_dir;
  DatasetBundle data;
  data.kg1 = load_knowledge_graph(1, dir / "triples_1", if_exists(dir / "ent_ids_1"),
                                  if_exists(dir / "rel_ids_1"));
  data.kg2 = load_knowledge_graph(2, dir / "triples_2", if_exists(dir / "ent_ids_2"),
                                  if_exists(dir / "rel_ids_2"));
  data.reference = load_seed_pairs(dir / "ref_ent_ids", data.kg1, data.kg2);
  if (cfg.sem_source == SemanticSource::kFile) {
    data.sem1 = load_semantic_embeddings(dir / "sem_1.emb", data.kg1, cfg.sem_dim);
    data.sem2 = load_semantic_embeddings(dir / "sem_2.emb", data.kg2, data.sem1.dim());
  } else {
    data.sem1 = pseudo_semantic_embeddings(data.kg1, cfg.sem_dim, mix64(cfg.rng_seed, 1));
    data.sem2 = pseudo_semantic_embeddings(data.kg2, cfg.sem_dim, mix64(cfg.rng_seed, 2));
  }
  data.splits = split_reference(data.reference, cfg.split_fractions(), cfg.rng_seed);
  return data;
}

ExpansionOutcome run_seed_expansion(const DatasetBundle& data, const RunConfig& cfg) {
  ExpansionOutcome out;
  out.seeds = data.splits.train;
  if (!cfg.seed_expansion) return out;
  const EmbeddingTable nbr1 = neighborhood_semantic_embedding(data.kg1, data.sem1);
  const EmbeddingTable nbr2 = neighborhood_semantic_embedding(data.kg2, data.sem2);
  const SeedExpansionConfig sx = cfg.seed_expansion_config();
  const SimilarityMatrix m_sem = fused_semantic_similarity(data.sem1, data.sem2, nbr1, nbr2, sx);
  out.candidates = mutual_nearest_pairs(m_sem, sx.theta_sem, out.seeds);
  out.seeds = expand_seeds(m_sem, sx, out.seeds);
  validate_seed_set(out.seeds, data.kg1.num_entities(), data.kg2.num_entities());
  return out;
}

Model build_model(const DatasetBundle& data, const RunConfig& cfg) {
  Model m;
  m.graph = UnifiedGraph(data.kg1, data.kg2);
  m.neighbors = global_neighbors(stack_tables(data.sem1, data.sem2), cfg.topk_k, cfg.csls_q);
  m.params = init_params(m.graph.num_entities(), m.graph.num_relation_slots(), cfg.dim,
                         mix64(cfg.rng_seed, 0x1417));
  m.optimizer = make_optimizer_state(m.params, cfg.optimizer_config());
  return m;
}

EvalReport evaluate_model(const Model& model, const DatasetBundle& data, const RunConfig& cfg,
                          const SeedSet& test) {
  const ForwardTrace trace = forward(model.params, model.graph, model.neighbors, cfg.depth);
  const SimilarityMatrix m = cfg.eval_raw_cosine
                                 ? final_cosine(trace, model.graph.left_count())
                                 : final_similarity(trace, model.graph.left_count(), cfg.csls_q);
  EvalOptions opts;
  opts.ks = {1, 5, 10};
  opts.direction = cfg.eval_direction;
  opts.excluded_seeds = cfg.eval_exclude_seeds ? &data.splits.train : nullptr;
  return evaluate(m, test, opts);
}

std::string report_to_json(const EvalReport& report, const RunConfig& cfg) {
  json j;
  for (const auto& [k, v] : report.hits) j["hits@" + std::to_string(k)] = v;
  j["mrr"] = report.mrr;
  j["n_test"] = report.n_test;
  j["direction"] = direction_name(report.direction);
  j["config"] = config_echo(cfg);
  return j.dump(2) + "\n";
}

std::string report_csv_header(const std::vector<std::string>& keys) {
  std::string out;
  for (const auto& k : keys) out += k + ",";
  return out + "hits@1,hits@5,hits@10,mrr,n_test\n";
}

std::string report_to_csv_row(const EvalReport& report, const RunConfig& cfg,
                              const std::vector<std::string>& keys) {
  std::string out;
  for (const auto& k : keys) out += get_config_value(cfg, k) + ",";
  const auto hit = [&](std::size_t k) {
    const auto it = report.hits.find(k);
    return it == report.hits.end() ? std::string() : detail::format_double(it->second);
  };
  out += hit(1) + "," + hit(5) + "," + hit(10) + "," + detail::format_double(report.mrr) + "," +
         std::to_string(report.n_test) + "\n";
  return out;
}

TrainingRun run_training(const DatasetBundle& data, const RunConfig& cfg, bool write_artifacts) {
  const fs::path out_dir = cfg.out_dir;
  if (write_artifacts) fs::create_directories(out_dir);

  TrainingRun run;
  run.expansion = run_seed_expansion(data, cfg);
  if (write_artifacts) {
    write_seed_pairs(out_dir / "expanded_seeds.txt", run.expansion.seeds, data.kg1, data.kg2);
    write_text(out_dir / "expansion.json", expansion_summary(run.expansion).dump(2) + "\n");
  }

  run.model = build_model(data, cfg);
  Model& model = run.model;

  Validator validator;
  if (!data.splits.valid.empty()) {
    validator = [&](const ForwardTrace& trace) {
      return hits_at_k(final_similarity(trace, model.graph.left_count(), cfg.csls_q),
                       data.splits.valid, 1);
    };
  }

  std::ofstream log;
  if (write_artifacts) log = detail::open_output(out_dir / "train_log.jsonl");
  const EpochObserver on_epoch = [&](const EpochRecord& r) {
    if (!write_artifacts) return;
    json j{{"epoch", r.epoch},
           {"loss", r.loss},
           {"val_hits1", r.val_hits1 ? json(*r.val_hits1) : json(nullptr)},
           {"seed_counts", {{"pre", r.seeds_pre}, {"init", r.seeds_init}, {"iter", r.seeds_iter}}},
           {"wall_ms", r.wall_ms}};
    log << j.dump() << '\n';
  };
  const auto make_checkpoint = [&](const IterationState& it, const ModelParams& params,
                                   const OptimizerState& opt) {
    Checkpoint c;
    c.depth = static_cast<std::uint32_t>(cfg.depth);
    c.k = static_cast<std::uint32_t>(cfg.topk_k);
    c.q = static_cast<std::uint32_t>(cfg.csls_q);
    c.left_count = model.graph.left_count();
    c.epoch = it.epoch;
    c.updates = it.updates;
    c.params = params;
    c.optimizer = opt;
    c.seeds = it.seeds;
    return c;
  };
  const UpdateObserver on_update = [&](const IterationState& it, const ModelParams& params,
                                       const OptimizerState& opt) {
    if (!write_artifacts) return;
    save_checkpoint(out_dir / ("checkpoint_update" + std::to_string(it.updates) + ".bin"),
                    make_checkpoint(it, params, opt));
  };

  run.state = run_iterative(model.params, model.optimizer, model.graph, model.neighbors,
                            run.expansion.seeds, cfg.train_config(), cfg.tnecs_config(), validator,
                            on_epoch, on_update);

  if (write_artifacts) {
    save_checkpoint(out_dir / "checkpoint.bin",
                    make_checkpoint(run.state, model.params, model.optimizer));
    json hist = json::array();
    for (const UpdateRecord& u : run.state.history) {
      hist.push_back(json{{"update", u.update},
                          {"epoch", u.epoch},
                          {"optimized", u.optimized},
                          {"expanded", u.expanded},
                          {"val_hits1", u.val_hits1 ? json(*u.val_hits1) : json(nullptr)}});
    }
    write_text(out_dir / "tnecs-history.json", hist.dump(2) + "\n");
    write_text(out_dir / "config.txt", format_config(cfg));
  }
  return run;
}

Model restore_model(const DatasetBundle& data, const Checkpoint& ckpt) {
  Model m;
  m.graph = UnifiedGraph(data.kg1, data.kg2);
  if (ckpt.left_count != m.graph.left_count() ||
      ckpt.params.entity_base.rows() != m.graph.num_entities() ||
      ckpt.params.relation_emb.rows() != m.graph.num_relation_slots()) {
    throw Error(ErrorKind::kDimMismatch, "checkpoint does not match dataset: " +
                                             std::to_string(ckpt.params.entity_base.rows()) +
                                             " entities in checkpoint, " +
                                             std::to_string(m.graph.num_entities()) + " in dataset");
  }
  m.neighbors = global_neighbors(stack_tables(data.sem1, data.sem2), ckpt.k, ckpt.q);
  m.params = ckpt.params;
  m.optimizer = ckpt.optimizer;
  return m;
}

void write_report(const fs::path& out_dir, const EvalReport& report, const RunConfig& cfg) {
  write_text(out_dir / "report.json", report_to_json(report, cfg));
  write_text(out_dir / "report.csv", report_csv_header({}) + report_to_csv_row(report, cfg, {}));
}

PipelineResult run_pipeline(const RunConfig& cfg, bool write_artifacts) {
  validate(cfg);
  apply_threads(cfg);
  const DatasetBundle data = load_dataset(cfg);
  TrainingRun run = run_training(data, cfg, write_artifacts);

  PipelineResult result;
  result.report = evaluate_model(run.model, data, cfg, data.splits.test);
  result.report_json = report_to_json(result.report, cfg);
  result.expansion = std::move(run.expansion);
  result.state = std::move(run.state);
  if (write_artifacts) write_report(cfg.out_dir, result.report, cfg);
  return result;
}

}  // namespace seedalign

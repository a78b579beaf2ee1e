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

#include "seedalign/config.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "seedalign/error.hpp"
#include "seedalign/rng.hpp"
#include "text_io.hpp"

namespace seedalign {

namespace {

std::string to_text(const std::string& v) { return v; }
std::string to_text(std::size_t v) { return std::to_string(v); }
std::string to_text(double v) { return detail::format_double(v); }
std::string to_text(bool v) { return v ? "true" : "false"; }

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorKind::kConfig,
              "bad value \"" + std::string(value) + "\" for key \"" + std::string(key) + "\"");
}

void from_text(std::string_view key, std::string_view s, std::string& out) { (void)key; out = s; }

void from_text(std::string_view key, std::string_view s, std::size_t& out) {
  const auto v = detail::parse_number<std::size_t>(s);
  if (!v) bad_value(key, s);
  out = *v;
}

void from_text(std::string_view key, std::string_view s, double& out) {
  const auto v = detail::parse_number<double>(s);
  if (!v || !std::isfinite(*v)) bad_value(key, s);
  out = *v;
}

void from_text(std::string_view key, std::string_view s, bool& out) {
  if (s == "true" || s == "1" || s == "on" || s == "yes") {
    out = true;
  } else if (s == "false" || s == "0" || s == "off" || s == "no") {
    out = false;
  } else {
    bad_value(key, s);
  }
}

struct Field {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

template <typename T>
Field plain(std::string key, T RunConfig::*member) {
  return Field{key, [member](const RunConfig& c) { return to_text(c.*member); },
               [key, member](RunConfig& c, std::string_view v) { from_text(key, v, c.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(plain("dataset_dir", &RunConfig::dataset_dir));
    f.push_back(plain("out_dir", &RunConfig::out_dir));
    f.push_back(Field{
        "sem_source",
        [](const RunConfig& c) {
          return std::string(c.sem_source == SemanticSource::kFile ? "file" : "pseudo");
        },
        [](RunConfig& c, std::string_view v) {
          if (v == "file") {
            c.sem_source = SemanticSource::kFile;
          } else if (v == "pseudo") {
            c.sem_source = SemanticSource::kPseudo;
          } else {
            bad_value("sem_source", v);
          }
        }});
    f.push_back(plain("sem_dim", &RunConfig::sem_dim));
    f.push_back(plain("dim", &RunConfig::dim));
    f.push_back(plain("depth", &RunConfig::depth));
    f.push_back(plain("csls_q", &RunConfig::csls_q));
    f.push_back(plain("topk_k", &RunConfig::topk_k));
    f.push_back(plain("epsilon", &RunConfig::epsilon));
    f.push_back(plain("theta_sem", &RunConfig::theta_sem));
    f.push_back(plain("theta_fin", &RunConfig::theta_fin));
    f.push_back(plain("lr", &RunConfig::lr));
    f.push_back(plain("rho", &RunConfig::rho));
    f.push_back(plain("rms_eps", &RunConfig::rms_eps));
    f.push_back(plain("interval", &RunConfig::interval));
    f.push_back(plain("max_updates", &RunConfig::max_updates));
    f.push_back(plain("final_epochs", &RunConfig::final_epochs));
    f.push_back(plain("gamma", &RunConfig::gamma));
    f.push_back(plain("lambda", &RunConfig::lambda));
    f.push_back(Field{
        "neg_mode",
        [](const RunConfig& c) {
          return std::string(c.neg_mode == NegativeMode::kFull ? "full" : "sampled");
        },
        [](RunConfig& c, std::string_view v) {
          if (v == "full") {
            c.neg_mode = NegativeMode::kFull;
          } else if (v == "sampled") {
            c.neg_mode = NegativeMode::kSampled;
          } else {
            bad_value("neg_mode", v);
          }
        }});
    f.push_back(plain("neg_samples", &RunConfig::neg_samples));
    f.push_back(Field{"rng_seed", [](const RunConfig& c) { return std::to_string(c.rng_seed); },
                      [](RunConfig& c, std::string_view v) {
                        const auto x = detail::parse_number<std::uint64_t>(v);
                        if (!x) bad_value("rng_seed", v);
                        c.rng_seed = *x;
                      }});
    f.push_back(plain("train_frac", &RunConfig::train_frac));
    f.push_back(plain("valid_frac", &RunConfig::valid_frac));
    f.push_back(plain("test_frac", &RunConfig::test_frac));
    f.push_back(plain("patience", &RunConfig::patience));
    f.push_back(plain("eval_every", &RunConfig::eval_every));
    f.push_back(plain("seed_expansion", &RunConfig::seed_expansion));
    f.push_back(plain("embedding_correction", &RunConfig::embedding_correction));
    f.push_back(plain("cumulative_seeds", &RunConfig::cumulative_seeds));
    f.push_back(Field{"eval_direction",
                      [](const RunConfig& c) { return std::string(direction_name(c.eval_direction)); },
                      [](RunConfig& c, std::string_view v) {
                        if (v == "l2r") {
                          c.eval_direction = Direction::kLeftToRight;
                        } else if (v == "r2l") {
                          c.eval_direction = Direction::kRightToLeft;
                        } else if (v == "mean") {
                          c.eval_direction = Direction::kMean;
                        } else {
                          bad_value("eval_direction", v);
                        }
                      }});
    f.push_back(plain("eval_raw_cosine", &RunConfig::eval_raw_cosine));
    f.push_back(plain("eval_exclude_seeds", &RunConfig::eval_exclude_seeds));
    f.push_back(plain("threads", &RunConfig::threads));
    return f;
  }();
  return table;
}

const Field& field(std::string_view key) {
  for (const Field& f : fields()) {
    if (f.key == key) return f;
  }
  throw Error(ErrorKind::kConfig, "unknown config key \"" + std::string(key) + "\"");
}

}  // namespace

SeedExpansionConfig RunConfig::seed_expansion_config() const {
  return SeedExpansionConfig{epsilon, theta_sem, csls_q};
}

TrainConfig RunConfig::train_config() const {
  TrainConfig t;
  t.loss = LossConfig{gamma, lambda, neg_mode, neg_samples, mix64(rng_seed, 0x1055)};
  t.depth = depth;
  t.patience = patience;
  t.eval_every = eval_every;
  return t;
}

TnecsConfig RunConfig::tnecs_config() const {
  TnecsConfig t;
  t.theta_fin = theta_fin;
  t.interval = interval;
  t.max_updates = max_updates;
  t.q = csls_q;
  t.final_epochs = final_epochs;
  t.correction = embedding_correction;
  t.cumulative = cumulative_seeds;
  t.rng_seed = mix64(rng_seed, 0x7ec5);
  return t;
}

RmspropConfig RunConfig::optimizer_config() const { return RmspropConfig{lr, rho, rms_eps}; }

SplitFractions RunConfig::split_fractions() const {
  return SplitFractions{train_frac, valid_frac, test_frac};
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Field& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
  field(key).set(cfg, detail::trim(value));
}

std::string get_config_value(const RunConfig& cfg, std::string_view key) {
  return field(key).get(cfg);
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorKind::kConfig, "override must be key=value: " + std::string(assignment));
  }
  set_config_value(cfg, detail::trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.find('=') == std::string_view::npos) {
      throw Error(ErrorKind::kConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_override(cfg, line);
  }
  return cfg;
}

std::string format_config(const RunConfig& cfg) {
  std::ostringstream out;
  for (const Field& f : fields()) out << f.key << " = " << f.get(cfg) << '\n';
  return out.str();
}

RunConfig load_config(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const RunConfig& cfg) {
  const auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::kConfig, what);
  };
  require(cfg.dim >= 1, "dim must be >= 1");
  require(cfg.depth >= 1, "depth must be >= 1");
  require(cfg.csls_q >= 1, "csls_q must be >= 1");
  require(cfg.epsilon >= 0.0 && cfg.epsilon <= 1.0, "epsilon must lie in [0, 1]");
  require(cfg.lr > 0.0, "lr must be > 0");
  require(cfg.rho >= 0.0 && cfg.rho < 1.0, "rho must lie in [0, 1)");
  require(cfg.rms_eps >= 0.0, "rms_eps must be >= 0");
  require(cfg.interval >= 1, "interval must be >= 1");
  require(cfg.final_epochs >= 1, "final_epochs must be >= 1");
  require(cfg.gamma > 0.0, "gamma must be > 0");
  require(cfg.lambda >= 0.0, "lambda must be >= 0");
  require(cfg.neg_mode == NegativeMode::kFull || cfg.neg_samples >= 1,
          "neg_samples must be >= 1");
  require(cfg.eval_every >= 1, "eval_every must be >= 1");
  for (double f : {cfg.train_frac, cfg.valid_frac, cfg.test_frac}) {
    require(f >= 0.0 && f <= 1.0, "split fractions must lie in [0, 1]");
  }
  require(std::abs(cfg.train_frac + cfg.valid_frac + cfg.test_frac - 1.0) <= 1e-9,
          "split fractions must sum to 1");
  require(cfg.test_frac > 0.0, "test_frac must be > 0");
  require(!cfg.dataset_dir.empty(), "dataset_dir is required");
  require(cfg.sem_source == SemanticSource::kFile || cfg.sem_dim >= 1,
          "pseudo semantics need sem_dim >= 1");
}

}  // namespace seedalign

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

#include "seedalign/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "seedalign/error.hpp"
#include "seedalign/rng.hpp"

namespace seedalign {

void validate(const LossConfig& cfg) {
  if (!(cfg.gamma > 0.0)) throw Error(ErrorKind::kConfig, "gamma must be > 0");
  if (!(cfg.lambda >= 0.0)) throw Error(ErrorKind::kConfig, "lambda must be >= 0");
  if (cfg.neg_mode == NegativeMode::kSampled && cfg.neg_samples < 1) {
    throw Error(ErrorKind::kConfig, "sampled negatives need neg_samples >= 1");
  }
}

double pair_distance(const ForwardTrace& trace, std::size_t i, std::size_t j) {
  const auto a = trace.final_embedding.row(i);
  const auto b = trace.final_embedding.row(j);
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double diff = a[c] - b[c];
    s += diff * diff;
  }
  return std::sqrt(s);
}

namespace {

// dL/d dist(u, v) for one distance appearing in the loss.
struct DistanceGrad {
  std::uint32_t u;
  std::uint32_t v;
  double coef;
};

struct PairTerms {
  double loss = 0.0;
  std::vector<DistanceGrad> grads;
};

// Candidate negatives on one side: a contiguous unified index range minus the
// aligned partner.
struct Side {
  std::size_t begin;
  std::size_t count;
};

std::vector<std::uint32_t> draw_negatives(const Side& side, std::size_t partner,
                                          const LossConfig& cfg, Rng& rng) {
  std::vector<std::uint32_t> out;
  if (side.count <= 1) return out;
  if (cfg.neg_mode == NegativeMode::kFull) {
    out.reserve(side.count - 1);
    for (std::size_t c = side.begin; c < side.begin + side.count; ++c) {
      if (c != partner) out.push_back(static_cast<std::uint32_t>(c));
    }
    return out;
  }
  out.reserve(cfg.neg_samples);
  for (std::size_t s = 0; s < cfg.neg_samples; ++s) {
    std::size_t c = side.begin + rng.below(side.count - 1);
    if (c >= partner) ++c;
    out.push_back(static_cast<std::uint32_t>(c));
  }
  return out;
}

// log(1 + sum_k exp(x_k)) and its weights dL/dx_k.
double log1p_sum_exp(const std::vector<double>& x, std::vector<double>& weights) {
  double m = 0.0;
  for (double v : x) m = std::max(m, v);
  double denom = std::exp(-m);
  weights.resize(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    weights[k] = std::exp(x[k] - m);
    denom += weights[k];
  }
  for (double& w : weights) w /= denom;
  return m + std::log(denom);
}

// One side of one seed pair: anchor is fixed, negatives replace `replaced`.
void side_terms(const ForwardTrace& trace, std::size_t anchor, std::size_t replaced,
                double d_pos, const std::vector<std::uint32_t>& negatives, const LossConfig& cfg,
                bool want_grads, PairTerms& terms) {
  if (negatives.empty()) return;
  std::vector<double> x(negatives.size());
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    x[k] = cfg.gamma * (cfg.lambda + d_pos - pair_distance(trace, anchor, negatives[k]));
  }
  std::vector<double> w;
  terms.loss += log1p_sum_exp(x, w);
  if (!want_grads) return;
  double pos_coef = 0.0;
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    pos_coef += cfg.gamma * w[k];
    terms.grads.push_back({static_cast<std::uint32_t>(anchor), negatives[k], -cfg.gamma * w[k]});
  }
  terms.grads.push_back(
      {static_cast<std::uint32_t>(anchor), static_cast<std::uint32_t>(replaced), pos_coef});
}

PairTerms pair_terms(const ForwardTrace& trace, const UnifiedGraph& graph, const SeedPair& pair,
                     std::size_t pair_index, const LossConfig& cfg, std::uint64_t epoch,
                     bool want_grads) {
  const std::size_t a = graph.left(pair.e1);
  const std::size_t b = graph.right(pair.e2);
  if (a >= graph.left_count() || b >= graph.num_entities()) {
    throw Error(ErrorKind::kOutOfRangeId, "seed pair outside the graphs");
  }
  Rng rng(mix64(mix64(cfg.rng_seed, epoch), pair_index));
  const Side right{graph.left_count(), graph.right_count()};
  const Side left{0, graph.left_count()};
  const auto neg2 = draw_negatives(right, b, cfg, rng);
  const auto neg1 = draw_negatives(left, a, cfg, rng);
  const double d_pos = pair_distance(trace, a, b);

  PairTerms terms;
  // First sum: replace the G2 side, d(e_i, e_j').
  side_terms(trace, a, b, d_pos, neg2, cfg, want_grads, terms);
  // Second sum: replace the G1 side, d(e_i', e_j); distance is symmetric.
  side_terms(trace, b, a, d_pos, neg1, cfg, want_grads, terms);
  return terms;
}

constexpr std::size_t kPairBlock = 64;

// Loss over all seeds; if `d_final` is non-null also dL/dF. Pairs are
// evaluated in parallel per block and reduced in seed order.
double loss_impl(const ForwardTrace& trace, const UnifiedGraph& graph, const SeedSet& seeds,
                 const LossConfig& cfg, std::uint64_t epoch, Matrix* d_final) {
  if (seeds.empty()) throw Error(ErrorKind::kEmptySeeds, "no seed pairs to train on");
  validate(cfg);
  const auto& pairs = seeds.pairs();
  const std::size_t width = trace.final_embedding.cols();
  double total = 0.0;
  std::vector<PairTerms> block;
  for (std::size_t start = 0; start < pairs.size(); start += kPairBlock) {
    const std::size_t stop = std::min(pairs.size(), start + kPairBlock);
    block.assign(stop - start, PairTerms{});
    const auto count = static_cast<std::ptrdiff_t>(stop - start);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      const std::size_t p = start + static_cast<std::size_t>(k);
      block[static_cast<std::size_t>(k)] =
          pair_terms(trace, graph, pairs[p], p, cfg, epoch, d_final != nullptr);
    }
    for (const PairTerms& terms : block) {
      total += terms.loss;
      if (d_final == nullptr) continue;
      for (const DistanceGrad& g : terms.grads) {
        const auto fu = trace.final_embedding.row(g.u);
        const auto fv = trace.final_embedding.row(g.v);
        const double dist = pair_distance(trace, g.u, g.v);
        if (dist == 0.0) continue;  // subgradient 0 at coincident points
        const double scale = g.coef / dist;
        auto du = d_final->row(g.u);
        auto dv = d_final->row(g.v);
        for (std::size_t c = 0; c < width; ++c) {
          const double diff = scale * (fu[c] - fv[c]);
          du[c] += diff;
          dv[c] -= diff;
        }
      }
    }
  }
  return total;
}

// Backprop through one local layer. Adds to d_in and the parameter grads.
void local_layer_backward(const Matrix& h_in, const Matrix& h_out, const Matrix& d_out,
                          const ModelParams& params, const UnifiedGraph& graph, Matrix& d_in,
                          Gradients& grads) {
  const std::size_t d = params.dim();
  std::vector<double> dz(d);
  std::vector<double> dm(d);
  for (std::size_t i = 0; i < graph.num_entities(); ++i) {
    const auto edges = graph.adjacency(i);
    const auto g_out = d_out.row(i);
    if (edges.empty()) {
      axpy(1.0, g_out, d_in.row(i));
      continue;
    }
    const auto o = h_out.row(i);
    for (std::size_t c = 0; c < d; ++c) dz[c] = g_out[c] * (1.0 - o[c] * o[c]);
    const std::vector<double> alpha = local_attention(params, graph, i);
    std::vector<double> d_alpha(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto h = h_in.row(edges[k].neighbor);
      const auto r = params.relation_emb.row(edges[k].relation);
      const double proj = dot(r, h);
      double da = 0.0;
      for (std::size_t c = 0; c < d; ++c) da += dz[c] * (h[c] - 2.0 * proj * r[c]);
      d_alpha[k] = da;
      for (std::size_t c = 0; c < d; ++c) dm[c] = alpha[k] * dz[c];
      const double r_dm = dot(r, dm);
      auto g_h = d_in.row(edges[k].neighbor);
      auto g_r = grads.relation_emb.row(edges[k].relation);
      for (std::size_t c = 0; c < d; ++c) {
        g_h[c] += dm[c] - 2.0 * r_dm * r[c];
        g_r[c] += -2.0 * (h[c] * r_dm + proj * dm[c]);
      }
    }
    double mean_da = 0.0;
    for (std::size_t k = 0; k < edges.size(); ++k) mean_da += alpha[k] * d_alpha[k];
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const double ds = alpha[k] * (d_alpha[k] - mean_da);
      const auto r = params.relation_emb.row(edges[k].relation);
      axpy(ds, r, grads.v1);
      axpy(ds, params.v1, grads.relation_emb.row(edges[k].relation));
    }
  }
}

void global_layer_backward(const Matrix& h_in, const Matrix& h_out, const Matrix& d_out,
                           const ModelParams& params, const HighOrderNeighbors& neighbors,
                           Matrix& d_in, Gradients& grads) {
  const std::size_t d = params.dim();
  std::vector<double> dz(d);
  for (std::size_t i = 0; i < h_in.rows(); ++i) {
    const auto& list = neighbors.lists[i];
    const auto g_out = d_out.row(i);
    if (list.empty()) {
      axpy(1.0, g_out, d_in.row(i));
      continue;
    }
    const auto o = h_out.row(i);
    for (std::size_t c = 0; c < d; ++c) dz[c] = g_out[c] * (1.0 - o[c] * o[c]);
    const std::vector<double> beta = global_attention(h_in, params, neighbors, i);
    std::vector<double> d_beta(list.size());
    double mean_db = 0.0;
    for (std::size_t k = 0; k < list.size(); ++k) {
      d_beta[k] = dot(dz, h_in.row(list[k]));
      mean_db += beta[k] * d_beta[k];
      axpy(beta[k], dz, d_in.row(list[k]));
    }
    for (std::size_t k = 0; k < list.size(); ++k) {
      const double dt = beta[k] * (d_beta[k] - mean_db);
      axpy(dt, h_in.row(list[k]), grads.v2);
      axpy(dt, params.v2, d_in.row(list[k]));
    }
  }
}

// Copies slot `slot` (width d) of every row of d_final into a fresh matrix.
Matrix slot_of(const Matrix& d_final, std::size_t slot, std::size_t d) {
  Matrix out(d_final.rows(), d);
  for (std::size_t i = 0; i < d_final.rows(); ++i) {
    const auto src = d_final.row(i).subspan(slot * d, d);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

void add_into(Matrix& dst, const Matrix& src) {
  for (std::size_t k = 0; k < dst.size(); ++k) dst.values()[k] += src.values()[k];
}

}  // namespace

double alignment_loss(const ForwardTrace& trace, const UnifiedGraph& graph, const SeedSet& seeds,
                      const LossConfig& cfg, std::uint64_t epoch) {
  return loss_impl(trace, graph, seeds, cfg, epoch, nullptr);
}

Gradients Gradients::zeros_like(const ModelParams& params) {
  Gradients g;
  g.entity_base = Matrix(params.entity_base.rows(), params.entity_base.cols());
  g.relation_emb = Matrix(params.relation_emb.rows(), params.relation_emb.cols());
  g.v1.assign(params.v1.size(), 0.0);
  g.v2.assign(params.v2.size(), 0.0);
  return g;
}

bool Gradients::all_finite() const {
  const auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(entity_base.values().begin(), entity_base.values().end(), finite) &&
         std::all_of(relation_emb.values().begin(), relation_emb.values().end(), finite) &&
         std::all_of(v1.begin(), v1.end(), finite) && std::all_of(v2.begin(), v2.end(), finite);
}

LossAndGradients gradients(const ModelParams& params, const UnifiedGraph& graph,
                           const HighOrderNeighbors& neighbors, const SeedSet& seeds,
                           const LossConfig& cfg, std::size_t depth, std::uint64_t epoch) {
  const ForwardTrace trace = forward(params, graph, neighbors, depth);
  const std::size_t n = graph.num_entities();
  const std::size_t d = params.dim();

  LossAndGradients out;
  out.grads = Gradients::zeros_like(params);
  Matrix d_final(n, trace.width());
  out.loss = loss_impl(trace, graph, seeds, cfg, epoch, &d_final);

  // Slots: [h0 | local 1..l | h0 | global 1..l]
  Matrix d_h0 = slot_of(d_final, 0, d);
  add_into(d_h0, slot_of(d_final, depth + 1, d));

  Matrix d_cur = slot_of(d_final, depth, d);
  for (std::size_t t = depth; t >= 1; --t) {
    const Matrix& in = t == 1 ? trace.h0 : trace.local[t - 2];
    Matrix d_in(n, d);
    local_layer_backward(in, trace.local[t - 1], d_cur, params, graph, d_in, out.grads);
    if (t == 1) {
      add_into(d_h0, d_in);
    } else {
      d_cur = slot_of(d_final, t - 1, d);
      add_into(d_cur, d_in);
    }
  }
  d_cur = slot_of(d_final, 2 * depth + 1, d);
  for (std::size_t t = depth; t >= 1; --t) {
    const Matrix& in = t == 1 ? trace.h0 : trace.global[t - 2];
    Matrix d_in(n, d);
    global_layer_backward(in, trace.global[t - 1], d_cur, params, neighbors, d_in, out.grads);
    if (t == 1) {
      add_into(d_h0, d_in);
    } else {
      d_cur = slot_of(d_final, depth + t, d);
      add_into(d_cur, d_in);
    }
  }

  // h0 = mean neighbour base + mean incident relation (own base if isolated).
  for (std::size_t i = 0; i < n; ++i) {
    const auto g = d_h0.row(i);
    const auto edges = graph.adjacency(i);
    if (edges.empty()) {
      axpy(1.0, g, out.grads.entity_base.row(i));
      continue;
    }
    const double inv = 1.0 / static_cast<double>(edges.size());
    for (const Edge& e : edges) {
      axpy(inv, g, out.grads.entity_base.row(e.neighbor));
      axpy(inv, g, out.grads.relation_emb.row(e.relation));
    }
  }

  if (!std::isfinite(out.loss) || !out.grads.all_finite()) {
    throw Error(ErrorKind::kNonFiniteGradient,
                "loss or gradient overflowed (gamma=" + std::to_string(cfg.gamma) +
                    ", lambda=" + std::to_string(cfg.lambda) + ")");
  }
  return out;
}

OptimizerState make_optimizer_state(const ModelParams& params, const RmspropConfig& cfg) {
  OptimizerState s;
  s.cfg = cfg;
  s.acc_entity = Matrix(params.entity_base.rows(), params.entity_base.cols());
  s.acc_relation = Matrix(params.relation_emb.rows(), params.relation_emb.cols());
  s.acc_v1.assign(params.v1.size(), 0.0);
  s.acc_v2.assign(params.v2.size(), 0.0);
  return s;
}

void rmsprop_update(std::span<double> params, std::span<const double> grads,
                    std::span<double> acc, const RmspropConfig& cfg) {
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grads[k];
    acc[k] = cfg.rho * acc[k] + (1.0 - cfg.rho) * g * g;
    params[k] -= cfg.lr * g / (std::sqrt(acc[k]) + cfg.eps);
  }
}

void rmsprop_step(ModelParams& params, const Gradients& grads, OptimizerState& state) {
  if (grads.entity_base.size() != params.entity_base.size() ||
      grads.relation_emb.size() != params.relation_emb.size() ||
      state.acc_entity.size() != params.entity_base.size() ||
      state.acc_relation.size() != params.relation_emb.size()) {
    throw Error(ErrorKind::kDimMismatch, "gradient/optimizer shapes do not match parameters");
  }
  rmsprop_update(params.entity_base.values(), grads.entity_base.values(),
                 state.acc_entity.values(), state.cfg);
  rmsprop_update(params.relation_emb.values(), grads.relation_emb.values(),
                 state.acc_relation.values(), state.cfg);
  rmsprop_update(params.v1, grads.v1, state.acc_v1, state.cfg);
  rmsprop_update(params.v2, grads.v2, state.acc_v2, state.cfg);
  ++state.steps;
}

TrainResult train_epochs(ModelParams& params, OptimizerState& state, const UnifiedGraph& graph,
                         const HighOrderNeighbors& neighbors, const SeedSet& seeds,
                         const TrainConfig& cfg, std::size_t epochs, std::size_t first_epoch,
                         const Validator& validator, const EpochObserver& observer) {
  if (epochs < 1) throw Error(ErrorKind::kInvalidArgument, "epochs must be >= 1");
  if (seeds.empty()) throw Error(ErrorKind::kEmptySeeds, "no seed pairs to train on");
  using Clock = std::chrono::steady_clock;

  TrainResult result;
  double best = -1.0;
  std::size_t stale = 0;
  const std::size_t eval_every = std::max<std::size_t>(1, cfg.eval_every);
  for (std::size_t e = 0; e < epochs; ++e) {
    const auto start = Clock::now();
    EpochRecord rec;
    rec.epoch = first_epoch + e;
    rec.seeds_pre = seeds.count(Provenance::kPre);
    rec.seeds_init = seeds.count(Provenance::kInit);
    rec.seeds_iter = seeds.count(Provenance::kIter);

    const LossAndGradients lg =
        gradients(params, graph, neighbors, seeds, cfg.loss, cfg.depth, rec.epoch);
    rec.loss = lg.loss;
    rmsprop_step(params, lg.grads, state);

    bool stop = false;
    if (validator && (e + 1) % eval_every == 0) {
      const double hits = validator(forward(params, graph, neighbors, cfg.depth));
      rec.val_hits1 = hits;
      if (hits > best) {
        best = hits;
        stale = 0;
      } else if (cfg.patience > 0 && ++stale >= cfg.patience) {
        stop = true;
      }
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    result.history.push_back(rec);
    if (observer) observer(rec);
    if (stop) {
      result.early_stopped = true;
      break;
    }
  }
  return result;
}

}  // namespace seedalign

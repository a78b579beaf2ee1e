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

#include "seedalign/simcore.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>

#include "seedalign/error.hpp"
#include "text_io.hpp"

namespace seedalign {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Unit-normalised copy; `valid` records rows that can take part in scoring.
RowMajor normalized_rows(const Matrix& m, std::span<const std::uint8_t> missing,
                         std::vector<std::uint8_t>& valid) {
  RowMajor out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  valid.assign(m.rows(), 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    const double norm = l2_norm(row);
    const bool flagged = !missing.empty() && missing[r] != 0;
    if (flagged || norm == 0.0 || !std::isfinite(norm)) {
      valid[r] = 0;
      out.row(static_cast<Eigen::Index>(r)).setZero();
      continue;
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c] / norm;
    }
  }
  return out;
}

// Mean of the q largest values, summed in descending order.
double top_mean(std::vector<double>& values, std::size_t q) {
  if (values.empty()) return 0.0;
  const std::size_t take = std::min(q, values.size());
  std::partial_sort(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(take),
                    values.end(), std::greater<>());
  double sum = 0.0;
  for (std::size_t k = 0; k < take; ++k) sum += values[k];
  return sum / static_cast<double>(take);
}

void check_q(const SimilarityMatrix& m, const CslsParams& params) {
  if (params.q < 1 || params.q > std::min(m.rows(), m.cols())) {
    throw Error(ErrorKind::kQOutOfRange, "Q=" + std::to_string(params.q) + " for a " +
                                             std::to_string(m.rows()) + "x" +
                                             std::to_string(m.cols()) + " matrix");
  }
}

}  // namespace

SimilarityMatrix cosine_matrix(const Matrix& a, const Matrix& b,
                               std::span<const std::uint8_t> a_missing,
                               std::span<const std::uint8_t> b_missing) {
  if (a.cols() != b.cols()) {
    throw Error(ErrorKind::kDimMismatch,
                "found " + std::to_string(b.cols()) + ", expected " + std::to_string(a.cols()));
  }
  std::vector<std::uint8_t> a_valid;
  std::vector<std::uint8_t> b_valid;
  const RowMajor an = normalized_rows(a, a_missing, a_valid);
  const RowMajor bn = normalized_rows(b, b_missing, b_valid);

  SimilarityMatrix out(a.rows(), b.rows());
  Eigen::Map<RowMajor> dst(out.data(), static_cast<Eigen::Index>(a.rows()),
                           static_cast<Eigen::Index>(b.rows()));
  if (a.rows() > 0 && b.rows() > 0) dst.noalias() = an * bn.transpose();

  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      if (!a_valid[i] || !b_valid[j]) out(i, j) = kExcludedScore;
    }
  }
  return out;
}

SimilarityMatrix cosine_matrix(const EmbeddingTable& a, const EmbeddingTable& b) {
  return cosine_matrix(a.vectors, b.vectors, a.missing, b.missing);
}

CslsMeans csls_means(const SimilarityMatrix& m, const CslsParams& params, bool self_similarity) {
  check_q(m, params);
  if (self_similarity && m.rows() != m.cols()) {
    throw Error(ErrorKind::kInvalidArgument, "self-similarity matrix must be square");
  }
  const auto rows = static_cast<std::ptrdiff_t>(m.rows());
  const auto cols = static_cast<std::ptrdiff_t>(m.cols());
  CslsMeans means{std::vector<double>(m.rows()), std::vector<double>(m.cols())};

#pragma omp parallel
  {
    std::vector<double> buf;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
      buf.clear();
      for (std::ptrdiff_t j = 0; j < cols; ++j) {
        if (self_similarity && i == j) continue;
        const double v = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        if (!is_excluded(v)) buf.push_back(v);
      }
      means.row[static_cast<std::size_t>(i)] = top_mean(buf, params.q);
    }
#pragma omp for schedule(static)
    for (std::ptrdiff_t j = 0; j < cols; ++j) {
      buf.clear();
      for (std::ptrdiff_t i = 0; i < rows; ++i) {
        if (self_similarity && i == j) continue;
        const double v = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        if (!is_excluded(v)) buf.push_back(v);
      }
      means.col[static_cast<std::size_t>(j)] = top_mean(buf, params.q);
    }
  }
  return means;
}

SimilarityMatrix csls_adjust(const SimilarityMatrix& m, const CslsParams& params,
                             bool self_similarity) {
  const CslsMeans means = csls_means(m, params, self_similarity);
  SimilarityMatrix out(m.rows(), m.cols());
  const auto rows = static_cast<std::ptrdiff_t>(m.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      out(i, j) = is_excluded(v) ? kExcludedScore : 2.0 * v - means.row[i] - means.col[j];
    }
  }
  return out;
}

std::vector<ScoredPair> mutual_nearest_pairs(const SimilarityMatrix& m, double threshold,
                                             const SeedSet& excluded) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  // Unique argmax per row and column; kNone on ties or empty.
  std::vector<std::size_t> row_best(m.rows(), kNone);
  std::vector<std::size_t> col_best(m.cols(), kNone);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = kNone;
    bool tie = false;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (v > best) {
        best = v;
        arg = j;
        tie = false;
      } else if (v == best) {
        tie = true;
      }
    }
    row_best[i] = tie ? kNone : arg;
  }
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = kNone;
    bool tie = false;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const double v = m(i, j);
      if (v > best) {
        best = v;
        arg = i;
        tie = false;
      } else if (v == best) {
        tie = true;
      }
    }
    col_best[j] = tie ? kNone : arg;
  }

  std::vector<ScoredPair> candidates;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const std::size_t j = row_best[i];
    if (j == kNone || col_best[j] != i) continue;
    const double score = m(i, j);
    if (is_excluded(score) || !(score > threshold)) continue;
    const auto ei = static_cast<EntityId>(i);
    const auto ej = static_cast<EntityId>(j);
    if (excluded.has_left(ei) && excluded.has_right(ej)) continue;
    candidates.push_back({ei, ej, score});
  }

  // Greedy one-to-one reduction by descending score.
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].score > candidates[b].score;
  });
  SeedSet taken;
  std::vector<ScoredPair> out;
  for (std::size_t k : order) {
    const auto& c = candidates[k];
    if (taken.try_add({c.i, c.j, Provenance::kIter})) out.push_back(c);
  }
  std::sort(out.begin(), out.end(),
            [](const ScoredPair& a, const ScoredPair& b) { return a.i < b.i; });
  return out;
}

std::vector<std::vector<std::uint32_t>> topk_rows(const SimilarityMatrix& m, std::size_t k,
                                                  bool self_similarity) {
  const std::size_t available = self_similarity ? (m.cols() == 0 ? 0 : m.cols() - 1) : m.cols();
  if (k > available) {
    throw Error(ErrorKind::kKOutOfRange,
                "K=" + std::to_string(k) + " with " + std::to_string(available) + " candidates");
  }
  std::vector<std::vector<std::uint32_t>> out(m.rows());
  const auto rows = static_cast<std::ptrdiff_t>(m.rows());
#pragma omp parallel
  {
    std::vector<std::uint32_t> idx;
#pragma omp for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      idx.clear();
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (self_similarity && i == j) continue;
        if (is_excluded(m(i, j))) continue;
        idx.push_back(static_cast<std::uint32_t>(j));
      }
      const std::size_t take = std::min(k, idx.size());
      std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end(),
                        [&](std::uint32_t a, std::uint32_t b) {
                          const double va = m(i, a);
                          const double vb = m(i, b);
                          return va > vb || (va == vb && a < b);
                        });
      out[i].assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take));
    }
  }
  return out;
}

namespace {
constexpr char kMatrixMagic[8] = {'S', 'A', 'M', 'A', 'T', '0', '0', '1'};
}  // namespace

void write_matrix_dump(const std::filesystem::path& path, const SimilarityMatrix& m) {
  auto out = detail::open_output(path, std::ios::out | std::ios::binary);
  out.write(kMatrixMagic, sizeof kMatrixMagic);
  const std::uint64_t rows = m.rows();
  const std::uint64_t cols = m.cols();
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  std::vector<float> buf(m.size());
  std::transform(m.values().begin(), m.values().end(), buf.begin(), [](double v) {
    return is_excluded(v) ? -std::numeric_limits<float>::max() : static_cast<float>(v);
  });
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
}

SimilarityMatrix read_matrix_dump(const std::filesystem::path& path) {
  auto in = detail::open_input(path, std::ios::in | std::ios::binary);
  char magic[8] = {};
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&rows), sizeof rows);
  in.read(reinterpret_cast<char*>(&cols), sizeof cols);
  if (!in || std::memcmp(magic, kMatrixMagic, sizeof magic) != 0) {
    throw Error(ErrorKind::kCorruptChecksum, path.string() + " is not a matrix dump");
  }
  std::vector<float> buf(rows * cols);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!in) throw Error(ErrorKind::kCorruptChecksum, path.string() + " is truncated");
  SimilarityMatrix m(rows, cols);
  std::transform(buf.begin(), buf.end(), m.values().begin(), [](float v) {
    return v == -std::numeric_limits<float>::max() ? kExcludedScore : static_cast<double>(v);
  });
  return m;
}

}  // namespace seedalign

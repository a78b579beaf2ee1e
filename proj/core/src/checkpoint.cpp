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

#include "seedalign/checkpoint.hpp"

#include <zlib.h>

#include <cstring>
#include <iterator>
#include <type_traits>

#include "seedalign/error.hpp"
#include "text_io.hpp"

namespace seedalign {

namespace {

constexpr char kMagic[8] = {'S', 'A', 'C', 'K', 'P', 'T', '\0', '\0'};
constexpr std::size_t kHeaderSize = sizeof kMagic + sizeof(std::uint32_t);

class Writer {
 public:
  template <typename T>
    requires std::is_arithmetic_v<T>
  void put(T v) {
    const auto* p = reinterpret_cast<const char*>(&v);
    bytes_.insert(bytes_.end(), p, p + sizeof v);
  }
  void put(std::span<const double> values) {
    for (double v : values) put(v);
  }
  std::vector<char>& bytes() { return bytes_; }

 private:
  std::vector<char> bytes_;
};

class Reader {
 public:
  Reader(const char* data, std::size_t size) : data_(data), size_(size) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > size_) throw Error(ErrorKind::kCorruptChecksum, "checkpoint truncated");
    T v;
    std::memcpy(&v, data_ + pos_, sizeof v);
    pos_ += sizeof v;
    return v;
  }
  void get(std::span<double> out) {
    for (double& v : out) v = get<double>();
  }
  bool done() const { return pos_ == size_; }

 private:
  const char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(const char* data, std::size_t size) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(data), static_cast<uInt>(size)));
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  const ModelParams& p = ckpt.params;
  const OptimizerState& o = ckpt.optimizer;
  Writer w;
  w.put<std::uint64_t>(p.entity_base.rows());
  w.put<std::uint64_t>(p.relation_emb.rows());
  w.put<std::uint32_t>(static_cast<std::uint32_t>(p.dim()));
  w.put<std::uint32_t>(ckpt.depth);
  w.put<std::uint32_t>(ckpt.k);
  w.put<std::uint32_t>(ckpt.q);
  w.put<std::uint64_t>(ckpt.left_count);
  w.put<std::uint64_t>(ckpt.epoch);
  w.put<std::uint64_t>(ckpt.updates);
  w.put(p.entity_base.values());
  w.put(p.relation_emb.values());
  w.put(p.v1);
  w.put(p.v2);
  w.put(o.cfg.lr);
  w.put(o.cfg.rho);
  w.put(o.cfg.eps);
  w.put<std::uint64_t>(o.steps);
  w.put(o.acc_entity.values());
  w.put(o.acc_relation.values());
  w.put(o.acc_v1);
  w.put(o.acc_v2);
  w.put<std::uint64_t>(ckpt.seeds.size());
  for (const SeedPair& s : ckpt.seeds.pairs()) {
    w.put<std::uint32_t>(s.e1);
    w.put<std::uint32_t>(s.e2);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(s.provenance));
  }
  const std::uint32_t crc = crc_of(w.bytes().data(), w.bytes().size());

  auto out = detail::open_output(path, std::ios::out | std::ios::binary);
  out.write(kMagic, sizeof kMagic);
  const std::uint32_t version = kCheckpointVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  out.write(reinterpret_cast<const char*>(&crc), sizeof crc);
  if (!out) throw Error(ErrorKind::kIo, "failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  auto in = detail::open_input(path, std::ios::in | std::ios::binary);
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw Error(ErrorKind::kCorruptChecksum, path.string() + " is not a checkpoint");
  }
  std::uint32_t version = 0;
  std::memcpy(&version, bytes.data() + sizeof kMagic, sizeof version);
  if (version != kCheckpointVersion) {
    throw Error(ErrorKind::kVersionMismatch, "checkpoint version " + std::to_string(version) +
                                                 ", expected " +
                                                 std::to_string(kCheckpointVersion));
  }
  if (bytes.size() < kHeaderSize + sizeof(std::uint32_t)) {
    throw Error(ErrorKind::kCorruptChecksum, path.string() + " is truncated");
  }
  const char* payload = bytes.data() + kHeaderSize;
  const std::size_t payload_size = bytes.size() - kHeaderSize - sizeof(std::uint32_t);
  std::uint32_t stored = 0;
  std::memcpy(&stored, payload + payload_size, sizeof stored);
  if (crc_of(payload, payload_size) != stored) {
    throw Error(ErrorKind::kCorruptChecksum, path.string() + " failed its checksum");
  }

  Reader r(payload, payload_size);
  Checkpoint c;
  const auto entities = r.get<std::uint64_t>();
  const auto slots = r.get<std::uint64_t>();
  const auto dim = r.get<std::uint32_t>();
  c.depth = r.get<std::uint32_t>();
  c.k = r.get<std::uint32_t>();
  c.q = r.get<std::uint32_t>();
  c.left_count = r.get<std::uint64_t>();
  c.epoch = r.get<std::uint64_t>();
  c.updates = r.get<std::uint64_t>();
  if (entities * dim > payload_size || slots * dim > payload_size) {
    throw Error(ErrorKind::kCorruptChecksum, "checkpoint dimensions exceed the payload");
  }
  c.params.entity_base = Matrix(entities, dim);
  c.params.relation_emb = Matrix(slots, dim);
  c.params.v1.resize(dim);
  c.params.v2.resize(dim);
  r.get(c.params.entity_base.values());
  r.get(c.params.relation_emb.values());
  r.get(c.params.v1);
  r.get(c.params.v2);
  c.optimizer = make_optimizer_state(c.params);
  c.optimizer.cfg.lr = r.get<double>();
  c.optimizer.cfg.rho = r.get<double>();
  c.optimizer.cfg.eps = r.get<double>();
  c.optimizer.steps = r.get<std::uint64_t>();
  r.get(c.optimizer.acc_entity.values());
  r.get(c.optimizer.acc_relation.values());
  r.get(c.optimizer.acc_v1);
  r.get(c.optimizer.acc_v2);
  const auto n_seeds = r.get<std::uint64_t>();
  for (std::uint64_t k = 0; k < n_seeds; ++k) {
    SeedPair s;
    s.e1 = r.get<std::uint32_t>();
    s.e2 = r.get<std::uint32_t>();
    const auto prov = r.get<std::uint8_t>();
    if (prov > 2) throw Error(ErrorKind::kCorruptChecksum, "bad provenance tag");
    s.provenance = static_cast<Provenance>(prov);
    c.seeds.add(s);
  }
  if (!r.done()) throw Error(ErrorKind::kCorruptChecksum, "trailing bytes in checkpoint");
  return c;
}

}  // namespace seedalign

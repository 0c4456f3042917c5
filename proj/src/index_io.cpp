// Copyright 2026 The sbprune Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <zlib.h>

#include "sbp/block_index.hpp"

namespace sbp {

// Layout (little-endian):
//   header   magic "SBPI", u32 version, u32 b, u32 c, u64 N, u64 S, u64 num_docs,
//            u64 vocab_size, f64 quantization scale
//   section  block-max table: vocab * N bytes, term-major
//   section  superblock table: vocab * S max bytes, then vocab * S u16 child sums
//   section  forward index: five length-prefixed arrays
//   section  manifest: ordering permutation, external ids, vocabulary terms
//   trailer  u32 CRC32 of every preceding byte

namespace {

class Writer {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    out_.insert(out_.end(), p, p + n);
  }
  template <typename T>
  void scalar(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    bytes(raw, sizeof(T));
  }
  template <typename T>
  void array(const std::vector<T>& v) {
    scalar<std::uint64_t>(v.size());
    if constexpr (sizeof(T) == 1 || std::endian::native == std::endian::little) {
      bytes(v.data(), v.size() * sizeof(T));
    } else {
      for (const T& x : v) scalar(x);
    }
  }
  void string(const std::string& s) {
    scalar<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  std::vector<std::uint8_t>& buffer() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  void bytes(void* out, std::size_t n) {
    if (n > in_.size() - pos_) throw IndexFormatError("index file truncated");
    std::memcpy(out, in_.data() + pos_, n);
    pos_ += n;
  }
  template <typename T>
  T scalar() {
    std::uint8_t raw[sizeof(T)];
    bytes(raw, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
  }
  template <typename T>
  std::vector<T> array(std::uint64_t expected = UINT64_MAX) {
    const auto n = scalar<std::uint64_t>();
    if (expected != UINT64_MAX && n != expected) throw IndexFormatError("section length mismatch");
    if (n > (in_.size() - pos_) / sizeof(T)) throw IndexFormatError("index file truncated");
    std::vector<T> v(n);
    if constexpr (sizeof(T) == 1 || std::endian::native == std::endian::little) {
      bytes(v.data(), n * sizeof(T));
    } else {
      for (auto& x : v) x = scalar<T>();
    }
    return v;
  }
  std::string string() {
    const auto n = scalar<std::uint32_t>();
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(std::span<const std::uint8_t> data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in chunks.
  constexpr std::size_t kChunk = 1u << 30;
  for (std::size_t off = 0; off < data.size(); off += kChunk) {
    const std::size_t n = std::min(kChunk, data.size() - off);
    crc = crc32(crc, data.data() + off, static_cast<uInt>(n));
  }
  return static_cast<std::uint32_t>(crc);
}

constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 4 + 8 * 4 + 8;

}  // namespace

std::vector<std::uint8_t> serialize_index(const BlockIndex& index) {
  const auto& g = index.geometry;
  Writer w;
  w.bytes(kIndexMagic, sizeof(kIndexMagic));
  w.scalar<std::uint32_t>(kIndexFormatVersion);
  w.scalar<std::uint32_t>(g.block_size);
  w.scalar<std::uint32_t>(g.superblock_size);
  w.scalar<std::uint64_t>(g.num_blocks);
  w.scalar<std::uint64_t>(g.num_superblocks);
  w.scalar<std::uint64_t>(g.num_docs);
  w.scalar<std::uint64_t>(index.manifest.vocab_size);
  w.scalar<double>(index.manifest.quantization.scale);

  w.array(index.block_max.values);
  w.array(index.superblocks.max_weight);
  w.array(index.superblocks.child_sum);

  w.array(index.forward.block_offsets);
  w.array(index.forward.terms);
  w.array(index.forward.term_offsets);
  w.array(index.forward.slots);
  w.array(index.forward.impacts);

  w.array(index.ordering.permutation);
  for (const auto& id : index.manifest.external_ids) w.string(id);
  for (const auto& term : index.vocab.terms()) w.string(term);

  auto& buf = w.buffer();
  const std::uint32_t crc = crc_of(buf);
  w.scalar<std::uint32_t>(crc);
  return std::move(buf);
}

BlockIndex deserialize_index(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof(kIndexMagic) || std::memcmp(bytes.data(), kIndexMagic, sizeof(kIndexMagic)) != 0) {
    throw IndexFormatError("bad magic: not an index file");
  }
  if (bytes.size() < kHeaderBytes + 4) throw IndexFormatError("index file truncated");

  Reader r(bytes.first(bytes.size() - 4));
  char magic[4];
  r.bytes(magic, 4);
  if (const auto version = r.scalar<std::uint32_t>(); version != kIndexFormatVersion) {
    throw IndexFormatError("unsupported index format version " + std::to_string(version));
  }
  const auto stored_crc = Reader(bytes.last(4)).scalar<std::uint32_t>();
  if (crc_of(bytes.first(bytes.size() - 4)) != stored_crc) {
    throw IndexFormatError("checksum mismatch (corrupt or truncated index file)");
  }

  BlockIndex index;
  auto& g = index.geometry;
  g.block_size = r.scalar<std::uint32_t>();
  g.superblock_size = r.scalar<std::uint32_t>();
  g.num_blocks = r.scalar<std::uint64_t>();
  g.num_superblocks = r.scalar<std::uint64_t>();
  g.num_docs = r.scalar<std::uint64_t>();
  const auto vocab_size = r.scalar<std::uint64_t>();
  const auto scale = r.scalar<double>();
  try {
    if (PartitionGeometry::make(g.num_docs, g.block_size, g.superblock_size) != g) {
      throw IndexFormatError("inconsistent partition geometry in header");
    }
  } catch (const std::invalid_argument& e) {
    throw IndexFormatError(e.what());
  }

  index.block_max.num_blocks = g.num_blocks;
  index.block_max.values = r.array<Impact>(vocab_size * g.num_blocks);
  index.superblocks.num_superblocks = g.num_superblocks;
  index.superblocks.max_weight = r.array<Impact>(vocab_size * g.num_superblocks);
  index.superblocks.child_sum = r.array<std::uint16_t>(vocab_size * g.num_superblocks);

  auto& f = index.forward;
  f.block_offsets = r.array<std::uint64_t>(g.num_blocks + 1);
  f.terms = r.array<TermId>();
  f.term_offsets = r.array<std::uint64_t>(f.terms.size() + 1);
  f.slots = r.array<std::uint16_t>();
  f.impacts = r.array<Impact>(f.slots.size());
  if (f.block_offsets.back() != f.terms.size() || f.term_offsets.back() != f.slots.size()) {
    throw IndexFormatError("forward index offsets out of range");
  }

  index.ordering.permutation = r.array<DocId>(g.num_docs);
  try {
    index.ordering.validate(g.num_docs);
  } catch (const std::invalid_argument& e) {
    throw IndexFormatError(e.what());
  }
  index.manifest.num_docs = g.num_docs;
  index.manifest.vocab_size = vocab_size;
  index.manifest.quantization.scale = scale;
  index.manifest.external_ids.reserve(g.num_docs);
  for (std::uint64_t i = 0; i < g.num_docs; ++i) index.manifest.external_ids.push_back(r.string());
  std::vector<std::string> terms;
  terms.reserve(vocab_size);
  for (std::uint64_t i = 0; i < vocab_size; ++i) terms.push_back(r.string());
  try {
    index.vocab = Vocabulary(std::move(terms));
  } catch (const std::invalid_argument& e) {
    throw IndexFormatError(e.what());
  }
  if (r.remaining() != 0) throw IndexFormatError("trailing bytes before checksum");

  index.finalize();
  return index;
}

void save_index(const BlockIndex& index, const std::string& path) {
  const auto bytes = serialize_index(index);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

BlockIndex load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_index(bytes);
}

}  // namespace sbp

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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sbp/corpus.hpp"

namespace sbp {

inline constexpr std::uint32_t kMaxSuperblockSize = 256;
inline constexpr std::uint32_t kMaxBlockSize = 65536;
inline constexpr std::uint32_t kDefaultBlockSize = 8;
inline constexpr std::uint32_t kDefaultSuperblockSize = 64;
/// Tie rank of padding slots; larger than any real document's rank.
inline constexpr std::uint32_t kNoRank = UINT32_MAX;

enum class Execution { kSerial, kParallel };

struct PartitionGeometry {
  std::uint32_t block_size = kDefaultBlockSize;            // b
  std::uint32_t superblock_size = kDefaultSuperblockSize;  // c
  std::uint64_t num_blocks = 0;                            // N = ceil(num_docs / b)
  std::uint64_t num_superblocks = 0;                       // S = ceil(N / c)
  std::uint64_t num_docs = 0;

  /// Throws std::invalid_argument for b == 0, b > 65536, c == 0 or c > 256.
  static PartitionGeometry make(std::uint64_t num_docs, std::uint32_t b, std::uint32_t c);

  std::uint64_t first_block(std::uint64_t superblock) const { return superblock * superblock_size; }
  /// Number of materialized child blocks; only the final superblock can have fewer than c.
  std::uint32_t child_count(std::uint64_t superblock) const;
  /// Number of real (non-padding) documents in a block.
  std::uint32_t docs_in_block(std::uint64_t block) const;

  friend bool operator==(const PartitionGeometry&, const PartitionGeometry&) = default;
};

/// permutation[position] = original document id.
struct DocOrdering {
  std::vector<DocId> permutation;

  static DocOrdering identity(std::size_t num_docs);
  /// Throws std::invalid_argument unless permutation is a bijection on [0, n).
  void validate(std::size_t num_docs) const;
  std::vector<std::uint32_t> inverse() const;

  friend bool operator==(const DocOrdering&, const DocOrdering&) = default;
};

enum class OrderingStrategy { kIdentity, kGreedySimilarity };

/// "identity" or "greedy"; throws std::invalid_argument otherwise.
OrderingStrategy parse_ordering_strategy(std::string_view name);

/// identity keeps input order. greedy-similarity starts at document 0 and
/// repeatedly appends the unplaced document sharing the most terms with the
/// last placed one, ties broken by ascending original id.
DocOrdering order_documents(const Corpus& corpus, OrderingStrategy strategy);

/// W_{B,t}: term-major, values[t * N + B].
struct BlockMaxTable {
  std::uint64_t num_blocks = 0;
  std::vector<Impact> values;

  std::span<const Impact> row(TermId t) const { return {values.data() + t * num_blocks, num_blocks}; }
  std::span<Impact> row(TermId t) { return {values.data() + t * num_blocks, num_blocks}; }

  friend bool operator==(const BlockMaxTable&, const BlockMaxTable&) = default;
};

/// W_{X,t} and the exact sum of the child block maxima, both term-major.
/// The average of the child maxima is child_sum / c; it is never rounded.
struct SuperblockTable {
  std::uint64_t num_superblocks = 0;
  std::vector<Impact> max_weight;
  std::vector<std::uint16_t> child_sum;

  std::span<const Impact> max_row(TermId t) const {
    return {max_weight.data() + t * num_superblocks, num_superblocks};
  }
  std::span<const std::uint16_t> sum_row(TermId t) const {
    return {child_sum.data() + t * num_superblocks, num_superblocks};
  }

  friend bool operator==(const SuperblockTable&, const SuperblockTable&) = default;
};

/// Per-block term-grouped postings in CSR form.
///
/// Block B owns terms[block_offsets[B] .. block_offsets[B+1]) in increasing
/// order; the j-th of those terms owns postings
/// [term_offsets[j] .. term_offsets[j+1]) of (slot, impact) pairs.
struct ForwardBlockIndex {
  std::vector<std::uint64_t> block_offsets;
  std::vector<TermId> terms;
  std::vector<std::uint64_t> term_offsets;
  std::vector<std::uint16_t> slots;
  std::vector<Impact> impacts;

  friend bool operator==(const ForwardBlockIndex&, const ForwardBlockIndex&) = default;
};

struct BlockIndex {
  PartitionGeometry geometry;
  BlockMaxTable block_max;
  SuperblockTable superblocks;
  ForwardBlockIndex forward;
  CorpusManifest manifest;
  Vocabulary vocab;
  DocOrdering ordering;

  // Derived from manifest and ordering; rebuilt on load, never serialized.
  // A document's tie rank is the position of its external id in sorted order,
  // so that equal scores break ties by ascending external id.
  std::vector<std::uint32_t> tie_rank;             // per position, padded to N * b
  std::vector<std::uint32_t> block_min_rank;       // per block
  std::vector<std::uint32_t> superblock_min_rank;  // per superblock
  std::uint64_t corpus_fingerprint = 0;

  /// Recomputes the derived tie-rank arrays.
  void finalize();

  std::size_t vocab_size() const { return manifest.vocab_size; }
  DocId doc_at(std::uint64_t position) const { return ordering.permutation[position]; }

  friend bool operator==(const BlockIndex& a, const BlockIndex& b) {
    return a.geometry == b.geometry && a.block_max == b.block_max && a.superblocks == b.superblocks &&
           a.forward == b.forward && a.manifest == b.manifest && a.vocab == b.vocab && a.ordering == b.ordering;
  }
};

/// Throws std::invalid_argument for an empty corpus, an invalid ordering or
/// an invalid geometry (c > 256 would overflow the 16-bit child sums).
BlockIndex build_index(const Corpus& corpus, const DocOrdering& ordering, std::uint32_t b, std::uint32_t c,
                       Execution exec = Execution::kParallel);

/// Rebuilds the quantized corpus (input order) from the forward index.
Corpus reconstruct_corpus(const BlockIndex& index);

class IndexFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr char kIndexMagic[4] = {'S', 'B', 'P', 'I'};
inline constexpr std::uint32_t kIndexFormatVersion = 1;

std::vector<std::uint8_t> serialize_index(const BlockIndex& index);
BlockIndex deserialize_index(std::span<const std::uint8_t> bytes);
void save_index(const BlockIndex& index, const std::string& path);
BlockIndex load_index(const std::string& path);

struct SpaceReport {
  std::uint64_t superblock_table_bytes = 0;
  std::uint64_t block_table_bytes = 0;
  std::uint64_t forward_bytes = 0;
};

/// 1 byte max + 2 bytes child sum per term per superblock.
constexpr std::uint64_t superblock_table_bytes(std::uint64_t vocab_size, std::uint64_t num_blocks,
                                               std::uint64_t superblock_size) {
  return vocab_size * ((num_blocks + superblock_size - 1) / superblock_size) * 3;
}

SpaceReport index_space_report(const BlockIndex& index);

}  // namespace sbp

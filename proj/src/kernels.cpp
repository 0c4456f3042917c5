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

#include "sbp/kernels.hpp"

#include <algorithm>
#include <stdexcept>

namespace sbp::kernels {

namespace {

void prepare_block_table(const PartitionGeometry& geometry, std::size_t vocab_size, BlockMaxTable& out) {
  out.num_blocks = geometry.num_blocks;
  out.values.assign(vocab_size * geometry.num_blocks, 0);
}

inline void accumulate_block(const Corpus& corpus, const DocOrdering& ordering, const PartitionGeometry& geometry,
                             std::uint64_t block, BlockMaxTable& out) {
  const std::uint64_t first = block * geometry.block_size;
  const std::uint64_t last = std::min<std::uint64_t>(first + geometry.block_size, geometry.num_docs);
  const std::uint64_t n = out.num_blocks;
  Impact* table = out.values.data();
  for (std::uint64_t pos = first; pos < last; ++pos) {
    for (const auto& e : corpus.docs[ordering.permutation[pos]].entries) {
      Impact& cell = table[e.term * n + block];
      cell = std::max(cell, e.impact);
    }
  }
}

void prepare_superblock_table(const PartitionGeometry& geometry, std::size_t vocab_size, SuperblockTable& out) {
  out.num_superblocks = geometry.num_superblocks;
  out.max_weight.assign(vocab_size * geometry.num_superblocks, 0);
  out.child_sum.assign(vocab_size * geometry.num_superblocks, 0);
}

inline void reduce_term(const BlockMaxTable& blocks, const PartitionGeometry& geometry, TermId t,
                        SuperblockTable& out) {
  const std::uint64_t n_blocks = blocks.num_blocks;
  const std::uint64_t n_super = out.num_superblocks;
  const Impact* row = blocks.values.data() + t * n_blocks;
  Impact* max_row = out.max_weight.data() + t * n_super;
  std::uint16_t* sum_row = out.child_sum.data() + t * n_super;
  const std::uint32_t c = geometry.superblock_size;
  for (std::uint64_t x = 0; x < n_super; ++x) {
    const std::uint64_t begin = x * c;
    const std::uint64_t end = std::min<std::uint64_t>(begin + c, n_blocks);
    Impact m = 0;
    std::uint32_t s = 0;
    for (std::uint64_t b = begin; b < end; ++b) {
      m = std::max(m, row[b]);
      s += row[b];
    }
    max_row[x] = m;
    sum_row[x] = static_cast<std::uint16_t>(s);
  }
}

void check_dense(const Corpus& corpus, std::span<const QueryWeight> dense_query, std::span<Score> out) {
  if (dense_query.size() < corpus.vocab.size() || out.size() < corpus.num_docs()) {
    throw std::invalid_argument("exhaustive_scores: buffer too small");
  }
}

inline Score score_doc(const QuantizedVector& doc, std::span<const QueryWeight> dense_query) {
  Score s = 0;
  for (const auto& e : doc.entries) s += static_cast<Score>(dense_query[e.term]) * e.impact;
  return s;
}

}  // namespace

void block_maxima_serial(const Corpus& corpus, const DocOrdering& ordering, const PartitionGeometry& geometry,
                         BlockMaxTable& out) {
  prepare_block_table(geometry, corpus.vocab.size(), out);
  for (std::uint64_t b = 0; b < geometry.num_blocks; ++b) accumulate_block(corpus, ordering, geometry, b, out);
}

void block_maxima_parallel(const Corpus& corpus, const DocOrdering& ordering, const PartitionGeometry& geometry,
                           BlockMaxTable& out) {
  prepare_block_table(geometry, corpus.vocab.size(), out);
  const auto n = static_cast<std::int64_t>(geometry.num_blocks);
  // Each iteration writes only column b of the table.
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < n; ++b) accumulate_block(corpus, ordering, geometry, static_cast<std::uint64_t>(b), out);
}

void superblock_tables_serial(const BlockMaxTable& blocks, const PartitionGeometry& geometry, std::size_t vocab_size,
                              SuperblockTable& out) {
  prepare_superblock_table(geometry, vocab_size, out);
  for (std::size_t t = 0; t < vocab_size; ++t) reduce_term(blocks, geometry, static_cast<TermId>(t), out);
}

void superblock_tables_parallel(const BlockMaxTable& blocks, const PartitionGeometry& geometry,
                                std::size_t vocab_size, SuperblockTable& out) {
  prepare_superblock_table(geometry, vocab_size, out);
  const auto n = static_cast<std::int64_t>(vocab_size);
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < n; ++t) reduce_term(blocks, geometry, static_cast<TermId>(t), out);
}

void exhaustive_scores_serial(const Corpus& corpus, std::span<const QueryWeight> dense_query, std::span<Score> out) {
  check_dense(corpus, dense_query, out);
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) out[d] = score_doc(corpus.docs[d], dense_query);
}

void exhaustive_scores_parallel(const Corpus& corpus, std::span<const QueryWeight> dense_query,
                                std::span<Score> out) {
  check_dense(corpus, dense_query, out);
  const auto n = static_cast<std::int64_t>(corpus.num_docs());
#pragma omp parallel for schedule(static, 1024)
  for (std::int64_t d = 0; d < n; ++d) out[d] = score_doc(corpus.docs[d], dense_query);
}

}  // namespace sbp::kernels

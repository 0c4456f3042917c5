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

// Data-parallel kernels. Each has an OpenMP version and a serial reference
// kept for equivalence tests and benchmarking; both produce identical output.

#include <span>

#include "sbp/block_index.hpp"

namespace sbp::kernels {

/// Fills out.values (resized to vocab * N) with per-block term maxima.
void block_maxima_serial(const Corpus& corpus, const DocOrdering& ordering, const PartitionGeometry& geometry,
                         BlockMaxTable& out);
void block_maxima_parallel(const Corpus& corpus, const DocOrdering& ordering, const PartitionGeometry& geometry,
                           BlockMaxTable& out);

/// Derives superblock maxima and exact child sums from the block table.
void superblock_tables_serial(const BlockMaxTable& blocks, const PartitionGeometry& geometry,
                              std::size_t vocab_size, SuperblockTable& out);
void superblock_tables_parallel(const BlockMaxTable& blocks, const PartitionGeometry& geometry,
                                std::size_t vocab_size, SuperblockTable& out);

/// out[d] = sum over entries of doc d of dense_query[t] * w_{t,d}.
/// dense_query is indexed by term id and must cover the vocabulary.
void exhaustive_scores_serial(const Corpus& corpus, std::span<const QueryWeight> dense_query, std::span<Score> out);
void exhaustive_scores_parallel(const Corpus& corpus, std::span<const QueryWeight> dense_query,
                                std::span<Score> out);

inline void block_maxima(Execution exec, const Corpus& corpus, const DocOrdering& ordering,
                         const PartitionGeometry& geometry, BlockMaxTable& out) {
  exec == Execution::kParallel ? block_maxima_parallel(corpus, ordering, geometry, out)
                               : block_maxima_serial(corpus, ordering, geometry, out);
}

inline void superblock_tables(Execution exec, const BlockMaxTable& blocks, const PartitionGeometry& geometry,
                              std::size_t vocab_size, SuperblockTable& out) {
  exec == Execution::kParallel ? superblock_tables_parallel(blocks, geometry, vocab_size, out)
                               : superblock_tables_serial(blocks, geometry, vocab_size, out);
}

}  // namespace sbp::kernels

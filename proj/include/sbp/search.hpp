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
#include <string_view>
#include <vector>

#include "sbp/block_index.hpp"
#include "sbp/corpus.hpp"
#include "sbp/fingerprint.hpp"
#include "sbp/ratio.hpp"
#include "sbp/topk.hpp"

namespace sbp {

enum class LoopOrder {
  kSuperblockAtATime,  // for each superblock: for each term: all child blocks
  kTermAtATime,        // for each term: for each superblock: all child blocks
};

enum class TraversalMode {
  kInterleaved,  // superblock stream merged with a live block pool
  kTwoPhase,     // superblock filter at theta = 0, then sorted block scoring
};

LoopOrder parse_loop_order(std::string_view name);  // "saat" | "taat"
TraversalMode parse_traversal_mode(std::string_view name);  // "interleaved" | "two-phase"
std::string_view to_string(LoopOrder order);
std::string_view to_string(TraversalMode mode);

struct SearchParams {
  std::size_t k = 10;
  Ratio mu{1};
  Ratio eta{1};
  Ratio beta{1};
  LoopOrder loop_order = LoopOrder::kSuperblockAtATime;
  TraversalMode mode = TraversalMode::kInterleaved;

  /// Requires k >= 1, 0 < mu <= eta <= 1 and 0 < beta <= 1.
  void validate() const;
};

struct SuperblockBounds {
  std::vector<Score> sbmax;            // sum_t q_t * W_{X,t}
  std::vector<Score> child_sum_score;  // sum_t q_t * child_sum[X][t] = c * average bound
};

struct BlockCandidate {
  std::uint64_t block_id = 0;
  Score bound = 0;
  friend bool operator==(const BlockCandidate&, const BlockCandidate&) = default;
};

struct TraversalStats {
  std::uint64_t superblocks_pruned = 0;
  std::uint64_t superblocks_visited = 0;
  std::uint64_t blocks_pruned = 0;
  std::uint64_t blocks_scored = 0;
  std::uint64_t docs_scored = 0;

  TraversalStats& operator+=(const TraversalStats& o);
  friend bool operator==(const TraversalStats&, const TraversalStats&) = default;
};

struct SearchHit {
  DocId doc = 0;  // input-order document id
  Score score = 0;
  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

struct SearchResult {
  std::vector<SearchHit> hits;  // score descending, then external id ascending
  TraversalStats stats;
  RankingFingerprint fingerprint;
};

enum class PruneDecision { kPrune, kVisit };

/// Out-of-vocabulary terms contribute zero.
SuperblockBounds superblock_bounds(const BlockIndex& index, const QueryVector& query);

/// Prune iff mu * sbmax <= theta and eta * child_sum_score <= c * theta,
/// decided exactly. Throws std::invalid_argument unless 0 < mu <= eta <= 1.
PruneDecision superblock_prune_decision(Score sbmax, Score child_sum_score, Score theta, const Ratio& mu,
                                        const Ratio& eta, std::uint32_t c);

/// BoundSum of every child block of the listed superblocks, in list order
/// and then block order. Both loop orders return identical values.
std::vector<BlockCandidate> block_boundsums(const BlockIndex& index, const QueryVector& query,
                                            std::span<const std::uint64_t> superblock_ids, LoopOrder order);

/// Scores every slot of a block through the forward index and offers each
/// real document to the accumulator. Returns the number of documents scored.
std::size_t score_block(const BlockIndex& index, const QueryVector& query, std::uint64_t block_id,
                        TopKAccumulator& acc);

/// Per-query engine over a shared immutable index. Holds scratch buffers, so
/// one Searcher must not run two queries at once; use one per thread.
class Searcher {
 public:
  explicit Searcher(const BlockIndex& index);

  SearchResult search(const QueryVector& query, const SearchParams& params);

 private:
  struct Run;
  void interleaved(Run& run);
  void two_phase(Run& run);
  void compute_bounds(const QueryVector& query, std::span<const std::uint64_t> superblocks, LoopOrder order,
                      std::vector<BlockCandidate>& out);

  const BlockIndex* index_;
  SuperblockBounds bounds_;
  std::vector<std::uint64_t> superblock_order_;
  std::vector<BlockCandidate> pool_;
  std::vector<BlockCandidate> children_;
  std::vector<Score> accum_;
  std::vector<Score> slot_scores_;
};

SearchResult search(const BlockIndex& index, const QueryVector& query, const SearchParams& params);

/// Runs queries independently; the parallel version shards them across
/// OpenMP threads with one Searcher per thread. Output order matches input.
std::vector<SearchResult> search_batch_serial(const BlockIndex& index, std::span<const QueryVector> queries,
                                              const SearchParams& params);
std::vector<SearchResult> search_batch_parallel(const BlockIndex& index, std::span<const QueryVector> queries,
                                                const SearchParams& params, int threads = 0);

}  // namespace sbp

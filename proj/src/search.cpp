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

#include "sbp/search.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace sbp {

LoopOrder parse_loop_order(std::string_view name) {
  if (name == "saat" || name == "superblock-at-a-time") return LoopOrder::kSuperblockAtATime;
  if (name == "taat" || name == "term-at-a-time") return LoopOrder::kTermAtATime;
  throw std::invalid_argument("unknown loop order '" + std::string(name) + "' (expected saat|taat)");
}

TraversalMode parse_traversal_mode(std::string_view name) {
  if (name == "interleaved") return TraversalMode::kInterleaved;
  if (name == "two-phase") return TraversalMode::kTwoPhase;
  throw std::invalid_argument("unknown traversal mode '" + std::string(name) + "' (expected interleaved|two-phase)");
}

std::string_view to_string(LoopOrder order) {
  return order == LoopOrder::kSuperblockAtATime ? "saat" : "taat";
}

std::string_view to_string(TraversalMode mode) {
  return mode == TraversalMode::kInterleaved ? "interleaved" : "two-phase";
}

namespace {

void check_mu_eta(const Ratio& mu, const Ratio& eta) {
  if (!(Ratio(0) < mu && mu <= eta && eta <= Ratio(1))) {
    throw std::invalid_argument("pruning parameters must satisfy 0 < mu <= eta <= 1 (mu=" + mu.to_string() +
                                ", eta=" + eta.to_string() + ")");
  }
}

/// Drops terms the index has never seen; they contribute zero everywhere.
QueryVector in_vocabulary(const QueryVector& q, std::size_t vocab_size) {
  QueryVector out;
  out.entries.reserve(q.entries.size());
  for (const auto& e : q.entries) {
    if (e.term < vocab_size && e.weight > 0) out.entries.push_back(e);
  }
  return out;
}

void boundsums_into(const BlockIndex& index, const QueryVector& query, std::span<const std::uint64_t> superblocks,
                    LoopOrder order, std::vector<Score>& accum, std::vector<BlockCandidate>& out) {
  const auto& g = index.geometry;
  const std::uint32_t c = g.superblock_size;
  out.clear();
  for (std::uint64_t x : superblocks) {
    const std::uint64_t first = g.first_block(x);
    for (std::uint32_t j = 0; j < g.child_count(x); ++j) out.push_back({first + j, 0});
  }

  if (order == LoopOrder::kTermAtATime) {
    // Option 1: stream each term's row across every listed superblock.
    for (const auto& [term, weight] : query.entries) {
      const Impact* row = index.block_max.row(term).data();
      const Score w = weight;
      std::size_t offset = 0;
      for (std::uint64_t x : superblocks) {
        const std::uint64_t first = g.first_block(x);
        const std::uint32_t n = g.child_count(x);
        BlockCandidate* dst = out.data() + offset;
        for (std::uint32_t j = 0; j < n; ++j) dst[j].bound += w * row[first + j];
        offset += n;
      }
    }
    return;
  }

  // Option 2: finish one superblock for all terms in a c-wide accumulator.
  accum.resize(c);
  std::size_t offset = 0;
  for (std::uint64_t x : superblocks) {
    const std::uint64_t first = g.first_block(x);
    const std::uint32_t n = g.child_count(x);
    Score* acc = accum.data();
    std::fill(acc, acc + n, Score{0});
    for (const auto& [term, weight] : query.entries) {
      const Impact* row = index.block_max.row(term).data() + first;
      const Score w = weight;
      for (std::uint32_t j = 0; j < n; ++j) acc[j] += w * row[j];
    }
    for (std::uint32_t j = 0; j < n; ++j) out[offset + j].bound = acc[j];
    offset += n;
  }
}

std::size_t score_block_into(const BlockIndex& index, const QueryVector& query, std::uint64_t block,
                             TopKAccumulator& acc, std::vector<Score>& slot_scores) {
  const auto& fwd = index.forward;
  const std::uint32_t b = index.geometry.block_size;
  slot_scores.assign(b, 0);

  const TermId* terms = fwd.terms.data();
  std::uint64_t it = fwd.block_offsets[block];
  const std::uint64_t end = fwd.block_offsets[block + 1];
  for (const auto& [term, weight] : query.entries) {
    it = static_cast<std::uint64_t>(std::lower_bound(terms + it, terms + end, term) - terms);
    if (it == end) break;
    if (terms[it] != term) continue;
    const Score w = weight;
    for (std::uint64_t p = fwd.term_offsets[it]; p < fwd.term_offsets[it + 1]; ++p) {
      slot_scores[fwd.slots[p]] += w * fwd.impacts[p];
    }
  }

  const std::uint32_t count = index.geometry.docs_in_block(block);
  const std::uint64_t base = block * b;
  for (std::uint32_t s = 0; s < count; ++s) {
    acc.offer(slot_scores[s], index.tie_rank[base + s], static_cast<std::uint32_t>(base + s));
  }
  return count;
}

}  // namespace

void SearchParams::validate() const {
  if (k == 0) throw std::invalid_argument("k must be positive");
  check_mu_eta(mu, eta);
  if (!(Ratio(0) < beta && beta <= Ratio(1))) throw std::invalid_argument("beta must lie in (0, 1]");
}

TraversalStats& TraversalStats::operator+=(const TraversalStats& o) {
  superblocks_pruned += o.superblocks_pruned;
  superblocks_visited += o.superblocks_visited;
  blocks_pruned += o.blocks_pruned;
  blocks_scored += o.blocks_scored;
  docs_scored += o.docs_scored;
  return *this;
}

SuperblockBounds superblock_bounds(const BlockIndex& index, const QueryVector& query) {
  const std::uint64_t s = index.geometry.num_superblocks;
  SuperblockBounds bounds;
  bounds.sbmax.assign(s, 0);
  bounds.child_sum_score.assign(s, 0);
  Score* sbmax = bounds.sbmax.data();
  Score* sums = bounds.child_sum_score.data();
  for (const auto& [term, weight] : query.entries) {
    if (term >= index.vocab_size()) continue;
    const Impact* max_row = index.superblocks.max_row(term).data();
    const std::uint16_t* sum_row = index.superblocks.sum_row(term).data();
    const Score w = weight;
    for (std::uint64_t x = 0; x < s; ++x) {
      sbmax[x] += w * max_row[x];
      sums[x] += w * sum_row[x];
    }
  }
  return bounds;
}

PruneDecision superblock_prune_decision(Score sbmax, Score child_sum_score, Score theta, const Ratio& mu,
                                        const Ratio& eta, std::uint32_t c) {
  check_mu_eta(mu, eta);
  // sbmax <= theta / mu  and  child_sum_score / c <= theta / eta
  using u128 = unsigned __int128;
  const bool max_ok = scaled_le(mu, sbmax, theta);
  const bool avg_ok = static_cast<u128>(eta.num()) * child_sum_score <= static_cast<u128>(eta.den()) * c * theta;
  return max_ok && avg_ok ? PruneDecision::kPrune : PruneDecision::kVisit;
}

std::vector<BlockCandidate> block_boundsums(const BlockIndex& index, const QueryVector& query,
                                            std::span<const std::uint64_t> superblock_ids, LoopOrder order) {
  std::vector<Score> accum;
  std::vector<BlockCandidate> out;
  boundsums_into(index, in_vocabulary(query, index.vocab_size()), superblock_ids, order, accum, out);
  return out;
}

std::size_t score_block(const BlockIndex& index, const QueryVector& query, std::uint64_t block_id,
                        TopKAccumulator& acc) {
  if (block_id >= index.geometry.num_blocks) throw std::out_of_range("score_block: no such block");
  std::vector<Score> scratch;
  return score_block_into(index, in_vocabulary(query, index.vocab_size()), block_id, acc, scratch);
}

struct Searcher::Run {
  const SearchParams& params;
  QueryVector query;
  TopKAccumulator acc;
  TraversalStats stats;
};

Searcher::Searcher(const BlockIndex& index) : index_(&index) {}

void Searcher::compute_bounds(const QueryVector& query, std::span<const std::uint64_t> superblocks, LoopOrder order,
                              std::vector<BlockCandidate>& out) {
  boundsums_into(*index_, query, superblocks, order, accum_, out);
}

namespace {

// Pruning tests against the live threshold. Both follow the stated rules;
// the only refinement is at exact equality with a full heap, where a
// document scoring exactly theta may still displace the k-th entry through
// the external-id tie-break, so the region is kept if it holds a better-ranked
// document.
bool block_prunable(const BlockIndex& index, const BlockCandidate& cand, const TopKAccumulator& acc,
                    const Ratio& eta) {
  const Score theta = acc.theta();
  if (!scaled_le(eta, cand.bound, theta)) return false;
  if (!acc.full() || scaled_lt(eta, cand.bound, theta)) return true;
  return index.block_min_rank[cand.block_id] > acc.worst_rank();
}

bool superblock_prunable(const BlockIndex& index, std::uint64_t x, const SuperblockBounds& bounds,
                         const TopKAccumulator& acc, const SearchParams& params) {
  const Score theta = acc.theta();
  const Score sbmax = bounds.sbmax[x];
  if (superblock_prune_decision(sbmax, bounds.child_sum_score[x], theta, params.mu, params.eta,
                                index.geometry.superblock_size) == PruneDecision::kVisit) {
    return false;
  }
  if (!acc.full() || scaled_lt(params.mu, sbmax, theta)) return true;
  return index.superblock_min_rank[x] > acc.worst_rank();
}

// Max-heap on bound; among equal bounds the lower block id surfaces first.
bool pool_less(const BlockCandidate& a, const BlockCandidate& b) {
  return a.bound != b.bound ? a.bound < b.bound : a.block_id > b.block_id;
}

}  // namespace

SearchResult Searcher::search(const QueryVector& query, const SearchParams& params) {
  params.validate();
  Run run{params, prune_query(in_vocabulary(query, index_->vocab_size()), params.beta), TopKAccumulator(params.k), {}};
  bounds_ = superblock_bounds(*index_, run.query);

  if (params.mode == TraversalMode::kInterleaved) {
    interleaved(run);
  } else {
    two_phase(run);
  }

  SearchResult result;
  result.stats = run.stats;
  result.fingerprint = {index_->corpus_fingerprint, query_fingerprint(query), params.k};
  for (const auto& e : run.acc.sorted()) result.hits.push_back({index_->doc_at(e.position), e.score});
  return result;
}

void Searcher::interleaved(Run& run) {
  const auto& g = index_->geometry;
  const Ratio& eta = run.params.eta;
  auto& acc = run.acc;
  auto& stats = run.stats;

  superblock_order_.resize(g.num_superblocks);
  for (std::uint64_t x = 0; x < g.num_superblocks; ++x) superblock_order_[x] = x;
  std::sort(superblock_order_.begin(), superblock_order_.end(), [&](std::uint64_t a, std::uint64_t b) {
    return bounds_.sbmax[a] != bounds_.sbmax[b] ? bounds_.sbmax[a] > bounds_.sbmax[b] : a < b;
  });

  pool_.clear();
  std::size_t cursor = 0;
  const std::size_t total = superblock_order_.size();
  while (cursor < total || !pool_.empty()) {
    const bool take_superblock =
        cursor < total && (pool_.empty() || bounds_.sbmax[superblock_order_[cursor]] > pool_.front().bound);

    if (take_superblock) {
      const std::uint64_t x = superblock_order_[cursor++];
      // Sorted stream: once eta * sbmax < theta, every later superblock also
      // satisfies both pruning inequalities (avg <= max, mu <= eta).
      if (acc.full() && scaled_lt(eta, bounds_.sbmax[x], acc.theta())) {
        stats.superblocks_pruned += 1 + (total - cursor);
        cursor = total;
        continue;
      }
      if (superblock_prunable(*index_, x, bounds_, acc, run.params)) {
        ++stats.superblocks_pruned;
        continue;
      }
      ++stats.superblocks_visited;
      compute_bounds(run.query, std::span<const std::uint64_t>(&x, 1), run.params.loop_order, children_);
      for (const auto& child : children_) {
        if (block_prunable(*index_, child, acc, eta)) {
          ++stats.blocks_pruned;
        } else {
          pool_.push_back(child);
          std::push_heap(pool_.begin(), pool_.end(), pool_less);
        }
      }
      continue;
    }

    std::pop_heap(pool_.begin(), pool_.end(), pool_less);
    const BlockCandidate cand = pool_.back();
    pool_.pop_back();
    if (block_prunable(*index_, cand, acc, eta)) {
      if (scaled_lt(eta, cand.bound, acc.theta())) {
        // Everything left in the pool has a bound no larger than this one.
        stats.blocks_pruned += 1 + pool_.size();
        pool_.clear();
      } else {
        ++stats.blocks_pruned;
      }
      continue;
    }
    stats.docs_scored += score_block_into(*index_, run.query, cand.block_id, acc, slot_scores_);
    ++stats.blocks_scored;
  }
}

void Searcher::two_phase(Run& run) {
  const auto& g = index_->geometry;
  const Ratio& eta = run.params.eta;
  auto& acc = run.acc;
  auto& stats = run.stats;

  // Phase 1: superblock filtering with theta = 0.
  superblock_order_.clear();
  for (std::uint64_t x = 0; x < g.num_superblocks; ++x) {
    if (superblock_prune_decision(bounds_.sbmax[x], bounds_.child_sum_score[x], 0, run.params.mu, eta,
                                  g.superblock_size) == PruneDecision::kVisit) {
      superblock_order_.push_back(x);
    }
  }
  stats.superblocks_visited = superblock_order_.size();
  stats.superblocks_pruned = g.num_superblocks - superblock_order_.size();

  // Phase 2: BoundSums of every surviving block, then descending-bound scoring.
  compute_bounds(run.query, superblock_order_, run.params.loop_order, pool_);
  const auto zero = std::partition(pool_.begin(), pool_.end(), [](const BlockCandidate& c) { return c.bound > 0; });
  stats.blocks_pruned += static_cast<std::uint64_t>(pool_.end() - zero);
  pool_.erase(zero, pool_.end());
  std::sort(pool_.begin(), pool_.end(),
            [](const BlockCandidate& a, const BlockCandidate& b) { return pool_less(b, a); });

  for (std::size_t i = 0; i < pool_.size(); ++i) {
    const auto& cand = pool_[i];
    if (block_prunable(*index_, cand, acc, eta)) {
      if (scaled_lt(eta, cand.bound, acc.theta())) {
        stats.blocks_pruned += pool_.size() - i;
        break;
      }
      ++stats.blocks_pruned;
      continue;
    }
    stats.docs_scored += score_block_into(*index_, run.query, cand.block_id, acc, slot_scores_);
    ++stats.blocks_scored;
  }
}

SearchResult search(const BlockIndex& index, const QueryVector& query, const SearchParams& params) {
  Searcher searcher(index);
  return searcher.search(query, params);
}

std::vector<SearchResult> search_batch_serial(const BlockIndex& index, std::span<const QueryVector> queries,
                                              const SearchParams& params) {
  params.validate();
  Searcher searcher(index);
  std::vector<SearchResult> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(searcher.search(q, params));
  return out;
}

std::vector<SearchResult> search_batch_parallel(const BlockIndex& index, std::span<const QueryVector> queries,
                                                const SearchParams& params, int threads) {
  params.validate();
  std::vector<SearchResult> out(queries.size());
  const int n_threads = threads > 0 ? threads : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(queries.size());
#pragma omp parallel num_threads(n_threads)
  {
    Searcher searcher(index);
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < n; ++i) out[i] = searcher.search(queries[i], params);
  }
  return out;
}

}  // namespace sbp

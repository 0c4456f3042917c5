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

#include <random>

#include <gtest/gtest.h>

#include "sbp/oracle.hpp"
#include "sbp/search.hpp"
#include "test_util.hpp"

namespace sbp {
namespace {

using testing::make_corpus;
using testing::make_query;
using testing::running_example;

class RunningExample : public ::testing::Test {
 protected:
  BlockIndex idx = build_index(running_example(), DocOrdering::identity(4), 2, 2);
  QueryVector q = make_query({{0, 1}, {1, 2}});
};

TEST_F(RunningExample, SuperblockBounds) {
  const auto b = superblock_bounds(idx, q);
  EXPECT_EQ(b.sbmax, (std::vector<Score>{34}));
  EXPECT_EQ(b.child_sum_score, (std::vector<Score>{44}));
  const auto empty = superblock_bounds(idx, QueryVector{});
  EXPECT_EQ(empty.sbmax, (std::vector<Score>{0}));
  EXPECT_EQ(empty.child_sum_score, (std::vector<Score>{0}));
}

TEST_F(RunningExample, UnknownTermsContributeNothing) {
  const auto b = superblock_bounds(idx, make_query({{0, 1}, {1, 2}, {7, 100}}));
  EXPECT_EQ(b.sbmax, (std::vector<Score>{34}));
}

TEST(PruneDecision, Examples) {
  EXPECT_EQ(superblock_prune_decision(34, 44, 18, Ratio(1), Ratio(1), 2), PruneDecision::kVisit);
  EXPECT_EQ(superblock_prune_decision(34, 44, 40, Ratio(1), Ratio(1), 2), PruneDecision::kPrune);
  // 0.5 * 34 <= 18 holds, but the average 22 exceeds 18.
  EXPECT_EQ(superblock_prune_decision(34, 44, 18, Ratio(1, 2), Ratio(1), 2), PruneDecision::kVisit);
}

TEST(PruneDecision, BoundariesAreInclusive) {
  EXPECT_EQ(superblock_prune_decision(34, 44, 34, Ratio(1), Ratio(1), 2), PruneDecision::kPrune);
  EXPECT_EQ(superblock_prune_decision(34, 68, 34, Ratio(1), Ratio(1), 2), PruneDecision::kPrune);
  EXPECT_EQ(superblock_prune_decision(34, 69, 34, Ratio(1), Ratio(1), 2), PruneDecision::kVisit);
  EXPECT_EQ(superblock_prune_decision(0, 0, 0, Ratio(1), Ratio(1), 2), PruneDecision::kPrune);
}

TEST(PruneDecision, RejectsBadParameters) {
  EXPECT_THROW(superblock_prune_decision(1, 1, 1, Ratio(0), Ratio(1), 2), std::invalid_argument);
  EXPECT_THROW(superblock_prune_decision(1, 1, 1, Ratio(4, 5), Ratio(3, 5), 2), std::invalid_argument);
  EXPECT_THROW(superblock_prune_decision(1, 1, 1, Ratio(1), Ratio(6, 5), 2), std::invalid_argument);
}

TEST_F(RunningExample, BlockBoundSums) {
  const std::vector<std::uint64_t> xs{0};
  const std::vector<BlockCandidate> expected{{0, 18}, {1, 26}};
  EXPECT_EQ(block_boundsums(idx, q, xs, LoopOrder::kSuperblockAtATime), expected);
  EXPECT_EQ(block_boundsums(idx, q, xs, LoopOrder::kTermAtATime), expected);
  EXPECT_TRUE(block_boundsums(idx, q, {}, LoopOrder::kTermAtATime).empty());
}

TEST_F(RunningExample, ScoreBlocks) {
  TopKAccumulator acc(2);
  EXPECT_EQ(score_block(idx, q, 1, acc), 2u);
  auto top = acc.sorted();
  ASSERT_EQ(top.size(), 2u);
  EXPECT_EQ(top[0].score, 24u);
  EXPECT_EQ(idx.doc_at(top[0].position), 2u);
  EXPECT_EQ(top[1].score, 6u);
  EXPECT_EQ(idx.doc_at(top[1].position), 3u);
  EXPECT_EQ(acc.theta(), 6u);

  score_block(idx, q, 0, acc);
  top = acc.sorted();
  EXPECT_EQ(idx.doc_at(top[0].position), 2u);
  EXPECT_EQ(idx.doc_at(top[1].position), 0u);
  EXPECT_EQ(top[1].score, 18u);
  EXPECT_EQ(acc.theta(), 18u);
}

TEST_F(RunningExample, BlockWithoutQueryTermsChangesNothing) {
  TopKAccumulator acc(2);
  score_block(idx, make_query({{2, 5}}), 1, acc);
  const Score theta = acc.theta();
  const std::size_t size = acc.size();
  score_block(idx, make_query({{9, 5}}), 0, acc);
  EXPECT_EQ(acc.size(), size);
  EXPECT_EQ(acc.theta(), theta);
}

TEST_F(RunningExample, SafeSearch) {
  SearchParams p;
  p.k = 2;
  for (auto mode : {TraversalMode::kInterleaved, TraversalMode::kTwoPhase}) {
    for (auto order : {LoopOrder::kSuperblockAtATime, LoopOrder::kTermAtATime}) {
      p.mode = mode;
      p.loop_order = order;
      const SearchResult r = search(idx, q, p);
      EXPECT_EQ(r.hits, (std::vector<SearchHit>{{2, 24}, {0, 18}}));
      EXPECT_EQ(r.stats.superblocks_visited, 1u);
      EXPECT_EQ(r.stats.blocks_scored + r.stats.blocks_pruned, 2u);
    }
  }
}

TEST(Search, LowSuperblockIsSkipped) {
  // Running example plus a second superblock of tiny weights: its sbmax of 15
  // cannot beat theta = 18 once both heavy blocks are scored.
  const Corpus c = make_corpus({{{0, 10}, {1, 4}},
                                {{0, 6}, {2, 8}},
                                {{1, 12}},
                                {{0, 2}, {1, 2}, {2, 2}},
                                {{0, 1}, {1, 1}},
                                {{0, 1}},
                                {{1, 7}},
                                {{0, 1}, {1, 2}}},
                               3);
  const BlockIndex idx = build_index(c, DocOrdering::identity(8), 2, 2);
  const QueryVector q = make_query({{0, 1}, {1, 2}});
  ASSERT_EQ(superblock_bounds(idx, q).sbmax[1], 15u);
  SearchParams p;
  p.k = 2;
  const SearchResult r = search(idx, q, p);
  EXPECT_EQ(r.hits, (std::vector<SearchHit>{{2, 24}, {0, 18}}));
  EXPECT_GE(r.stats.superblocks_pruned, 1u);
  EXPECT_EQ(r.stats.blocks_scored, 2u);
  EXPECT_EQ(r.stats.docs_scored, 4u);
}

TEST(Search, LargeKReturnsEveryNonzeroDocument) {
  std::mt19937_64 rng(8);
  const Corpus c = testing::random_corpus(rng, 120, 20, 4, 3);
  const BlockIndex idx = build_index(c, DocOrdering::identity(c.num_docs()), 4, 4);
  const QueryVector q = testing::random_query(rng, 20, 3, 4);
  SearchParams p;
  p.k = 500;
  const SearchResult r = search(idx, q, p);
  const ExactRanking exact = exact_topk(c, q, 500);
  ASSERT_EQ(r.hits.size(), exact.entries.size());
  for (std::size_t i = 0; i < r.hits.size(); ++i) {
    EXPECT_EQ(r.hits[i].doc, exact.entries[i].doc);
    EXPECT_EQ(r.hits[i].score, exact.entries[i].score);
  }
}

TEST(Search, TiesBreakByExternalId) {
  // Every document scores the same; the winners are the smallest ids.
  std::vector<testing::DocSpec> docs(40, testing::DocSpec{{0, 3}});
  Corpus c = make_corpus(docs, 1);
  for (std::size_t d = 0; d < 40; ++d) c.manifest.external_ids[d] = "doc" + std::to_string(900 - d);
  const BlockIndex idx = build_index(c, DocOrdering::identity(40), 4, 2);
  SearchParams p;
  p.k = 3;
  for (auto mode : {TraversalMode::kInterleaved, TraversalMode::kTwoPhase}) {
    p.mode = mode;
    const SearchResult r = search(idx, make_query({{0, 2}}), p);
    EXPECT_EQ(r.hits, (std::vector<SearchHit>{{39, 6}, {38, 6}, {37, 6}}));
  }
}

TEST(Search, EmptyAndUnmatchedQueries) {
  const BlockIndex idx = build_index(running_example(), DocOrdering::identity(4), 2, 2);
  SearchParams p;
  EXPECT_TRUE(search(idx, QueryVector{}, p).hits.empty());
  const SearchResult r = search(idx, make_query({{40, 3}}), p);
  EXPECT_TRUE(r.hits.empty());
  EXPECT_EQ(r.stats.superblocks_pruned, 1u);
  EXPECT_EQ(r.stats.docs_scored, 0u);
}

TEST(Search, BetaPrunesQueryTerms) {
  const BlockIndex idx = build_index(running_example(), DocOrdering::identity(4), 2, 2);
  SearchParams p;
  p.k = 4;
  p.beta = Ratio(1, 2);
  // {t0:1, t1:3}: keeping t1 alone reaches half the weight.
  const SearchResult r = search(idx, make_query({{0, 1}, {1, 3}}), p);
  EXPECT_EQ(r.hits, (std::vector<SearchHit>{{2, 36}, {0, 12}, {3, 6}}));
}

TEST(Search, ParamsValidated) {
  const BlockIndex idx = build_index(running_example(), DocOrdering::identity(4), 2, 2);
  const QueryVector q = make_query({{0, 1}});
  SearchParams p;
  p.k = 0;
  EXPECT_THROW(search(idx, q, p), std::invalid_argument);
  p = {};
  p.mu = Ratio(9, 10);
  p.eta = Ratio(1, 2);
  EXPECT_THROW(search(idx, q, p), std::invalid_argument);
  p = {};
  p.beta = Ratio(0);
  EXPECT_THROW(search(idx, q, p), std::invalid_argument);
}

TEST(Search, ParseNames) {
  EXPECT_EQ(parse_loop_order("saat"), LoopOrder::kSuperblockAtATime);
  EXPECT_EQ(parse_loop_order("taat"), LoopOrder::kTermAtATime);
  EXPECT_EQ(parse_traversal_mode("two-phase"), TraversalMode::kTwoPhase);
  EXPECT_EQ(to_string(TraversalMode::kInterleaved), "interleaved");
  EXPECT_THROW(parse_loop_order("daat"), std::invalid_argument);
}

TEST(TopK, ThetaAndAdmission) {
  TopKAccumulator acc(2);
  EXPECT_EQ(acc.theta(), 0u);
  EXPECT_FALSE(acc.offer(0, 0, 0));
  EXPECT_TRUE(acc.offer(5, 3, 0));
  EXPECT_EQ(acc.theta(), 0u);
  EXPECT_TRUE(acc.offer(7, 4, 1));
  EXPECT_EQ(acc.theta(), 5u);
  EXPECT_FALSE(acc.offer(5, 9, 2));  // tie, worse id
  EXPECT_TRUE(acc.offer(5, 1, 3));   // tie, better id
  EXPECT_EQ(acc.worst_rank(), 1u);
  EXPECT_FALSE(acc.offer(4, 0, 4));
  EXPECT_THROW(TopKAccumulator(0), std::invalid_argument);
}

TEST(Stats, Accumulate) {
  TraversalStats a{1, 2, 3, 4, 5};
  a += TraversalStats{1, 1, 1, 1, 1};
  EXPECT_EQ(a, (TraversalStats{2, 3, 4, 5, 6}));
}

}  // namespace
}  // namespace sbp

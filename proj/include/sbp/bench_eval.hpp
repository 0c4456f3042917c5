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
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sbp/block_index.hpp"
#include "sbp/corpus.hpp"
#include "sbp/metrics.hpp"
#include "sbp/search.hpp"

namespace sbp {

/// One query's ranked external doc ids with scores.
struct QueryRun {
  std::string query_id;
  std::vector<std::string> docs;
  std::vector<Score> scores;
};

/// TREC run format: "query_id Q0 doc_id rank score tag", tab separated.
void write_trec_run(std::ostream& out, std::span<const QueryRun> runs, const std::string& tag);
std::vector<QueryRun> parse_trec_run(std::istream& in);

struct MeanStats {
  double superblocks_pruned = 0;
  double superblocks_visited = 0;
  double blocks_pruned = 0;
  double blocks_scored = 0;
  double docs_scored = 0;
  /// Percentages of S and N, the way pruning rates are usually reported.
  double superblocks_pruned_pct = 0;
  double blocks_pruned_pct = 0;
};

struct MetricReport {
  std::size_t num_queries = 0;
  std::size_t k = 0;
  bool has_metrics = false;
  double mrr_at_10 = 0;
  double recall_at_k = 0;
  double ndcg_at_10 = 0;
  std::size_t queries_without_relevant = 0;
  std::vector<double> per_query_mrr;
  std::vector<double> per_query_recall;
  std::vector<double> per_query_ndcg;
  bool has_stats = false;
  MeanStats stats;
  double mean_latency_ms = 0;
  std::size_t timed_passes = 0;
};

/// Metrics of a set of runs against qrels. Throws std::invalid_argument when
/// a run's query has no qrels entry.
MetricReport evaluate_runs(std::span<const QueryRun> runs, const Qrels& qrels, std::size_t k);

MeanStats mean_stats(std::span<const TraversalStats> stats, const PartitionGeometry& geometry);

QueryRun to_query_run(const BlockIndex& index, const std::string& query_id, const SearchResult& result);

struct BenchmarkOptions {
  std::size_t repetitions = 5;
  /// 1 = single-threaded; > 1 shards queries across threads.
  int threads = 1;
  /// Score with the exhaustive oracle instead of the pruned search.
  bool oracle = false;
};

/// Runs every query `repetitions` times, discards the first two passes and
/// reports the mean per-query latency over the rest. Metrics and traversal
/// statistics come from the final pass. Throws std::invalid_argument for
/// repetitions < 3 or when qrels are given but miss a query.
MetricReport run_benchmark(const BlockIndex& index, std::span<const QueryRecord> queries,
                           const SearchParams& params, const BenchmarkOptions& options,
                           const Qrels* qrels = nullptr);

std::string to_json(const MetricReport& report, bool include_per_query = false);

}  // namespace sbp

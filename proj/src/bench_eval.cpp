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

#include "sbp/bench_eval.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

#include <json.hpp>
#include <omp.h>

#include "sbp/oracle.hpp"

namespace sbp {

void write_trec_run(std::ostream& out, std::span<const QueryRun> runs, const std::string& tag) {
  for (const auto& run : runs) {
    for (std::size_t i = 0; i < run.docs.size(); ++i) {
      out << run.query_id << "\tQ0\t" << run.docs[i] << '\t' << (i + 1) << '\t' << run.scores[i] << '\t' << tag
          << '\n';
    }
  }
}

std::vector<QueryRun> parse_trec_run(std::istream& in) {
  struct Row {
    std::size_t rank;
    std::string doc;
    Score score;
  };
  std::map<std::string, std::vector<Row>> rows;
  std::vector<std::string> order;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    std::string qid, q0, doc, tag;
    std::size_t rank = 0;
    double score = 0;
    if (!(ss >> qid >> q0 >> doc >> rank >> score)) {
      throw std::runtime_error("run line " + std::to_string(line_number) + ": expected 'qid Q0 doc rank score tag'");
    }
    if (!rows.contains(qid)) order.push_back(qid);
    rows[qid].push_back({rank, doc, static_cast<Score>(score < 0 ? 0 : score)});
  }
  std::vector<QueryRun> runs;
  for (const auto& qid : order) {
    auto& r = rows[qid];
    std::stable_sort(r.begin(), r.end(), [](const Row& a, const Row& b) { return a.rank < b.rank; });
    QueryRun run;
    run.query_id = qid;
    for (const auto& row : r) {
      run.docs.push_back(row.doc);
      run.scores.push_back(row.score);
    }
    runs.push_back(std::move(run));
  }
  return runs;
}

MetricReport evaluate_runs(std::span<const QueryRun> runs, const Qrels& qrels, std::size_t k) {
  MetricReport report;
  report.num_queries = runs.size();
  report.k = k;
  report.has_metrics = true;
  for (const auto& run : runs) {
    auto it = qrels.find(run.query_id);
    if (it == qrels.end()) throw std::invalid_argument("no qrels for query '" + run.query_id + "'");
    const double mrr = mrr_at_10(run.docs, it->second);
    const RecallValue recall = recall_at_k(run.docs, it->second, k);
    const double ndcg = ndcg_at_10(run.docs, it->second);
    report.per_query_mrr.push_back(mrr);
    report.per_query_recall.push_back(recall.value);
    report.per_query_ndcg.push_back(ndcg);
    report.queries_without_relevant += recall.no_relevant;
    report.mrr_at_10 += mrr;
    report.recall_at_k += recall.value;
    report.ndcg_at_10 += ndcg;
  }
  if (!runs.empty()) {
    const auto n = static_cast<double>(runs.size());
    report.mrr_at_10 /= n;
    report.recall_at_k /= n;
    report.ndcg_at_10 /= n;
  }
  return report;
}

MeanStats mean_stats(std::span<const TraversalStats> stats, const PartitionGeometry& geometry) {
  MeanStats m;
  if (stats.empty()) return m;
  for (const auto& s : stats) {
    m.superblocks_pruned += static_cast<double>(s.superblocks_pruned);
    m.superblocks_visited += static_cast<double>(s.superblocks_visited);
    m.blocks_pruned += static_cast<double>(s.blocks_pruned);
    m.blocks_scored += static_cast<double>(s.blocks_scored);
    m.docs_scored += static_cast<double>(s.docs_scored);
  }
  const auto n = static_cast<double>(stats.size());
  m.superblocks_pruned /= n;
  m.superblocks_visited /= n;
  m.blocks_pruned /= n;
  m.blocks_scored /= n;
  m.docs_scored /= n;
  // Blocks skipped inside pruned superblocks count as pruned blocks too.
  if (geometry.num_superblocks > 0) {
    m.superblocks_pruned_pct = 100.0 * m.superblocks_pruned / static_cast<double>(geometry.num_superblocks);
  }
  if (geometry.num_blocks > 0) {
    m.blocks_pruned_pct = 100.0 * (1.0 - m.blocks_scored / static_cast<double>(geometry.num_blocks));
  }
  return m;
}

QueryRun to_query_run(const BlockIndex& index, const std::string& query_id, const SearchResult& result) {
  QueryRun run;
  run.query_id = query_id;
  for (const auto& hit : result.hits) {
    run.docs.push_back(index.manifest.external_ids[hit.doc]);
    run.scores.push_back(hit.score);
  }
  return run;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Pass {
  std::vector<QueryRun> runs;
  std::vector<TraversalStats> stats;
  double total_ms = 0;
};

Pass run_pass(const BlockIndex& index, const Corpus* corpus, std::span<const QueryRecord> queries,
              const SearchParams& params, int threads) {
  Pass pass;
  pass.runs.resize(queries.size());
  pass.stats.resize(queries.size());
  std::vector<double> ms(queries.size(), 0.0);
  const auto n = static_cast<std::int64_t>(queries.size());
#pragma omp parallel num_threads(std::max(threads, 1))
  {
    Searcher searcher(index);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto& q = queries[i];
      const auto start = Clock::now();
      if (corpus) {
        const ExactRanking exact = exact_topk(*corpus, q.vector, params.k);
        const auto stop = Clock::now();
        ms[i] = std::chrono::duration<double, std::milli>(stop - start).count();
        QueryRun run;
        run.query_id = q.id;
        for (const auto& e : exact.entries) {
          run.docs.push_back(corpus->manifest.external_ids[e.doc]);
          run.scores.push_back(e.score);
        }
        pass.runs[i] = std::move(run);
        pass.stats[i].docs_scored = corpus->num_docs();
      } else {
        const SearchResult result = searcher.search(q.vector, params);
        const auto stop = Clock::now();
        ms[i] = std::chrono::duration<double, std::milli>(stop - start).count();
        pass.runs[i] = to_query_run(index, q.id, result);
        pass.stats[i] = result.stats;
      }
    }
  }
  for (double v : ms) pass.total_ms += v;
  return pass;
}

}  // namespace

MetricReport run_benchmark(const BlockIndex& index, std::span<const QueryRecord> queries, const SearchParams& params,
                           const BenchmarkOptions& options, const Qrels* qrels) {
  if (options.repetitions < 3) throw std::invalid_argument("run_benchmark: repetitions must be at least 3");
  params.validate();
  if (qrels) {
    for (const auto& q : queries) {
      if (!qrels->contains(q.id)) throw std::invalid_argument("no qrels for query '" + q.id + "'");
    }
  }
  std::optional<Corpus> corpus;
  if (options.oracle) corpus = reconstruct_corpus(index);

  double timed_ms = 0;
  Pass last;
  for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
    last = run_pass(index, corpus ? &*corpus : nullptr, queries, params, options.threads);
    if (rep >= 2) timed_ms += last.total_ms;  // the first two passes warm up
  }

  MetricReport report = qrels ? evaluate_runs(last.runs, *qrels, params.k) : MetricReport{};
  report.num_queries = queries.size();
  report.k = params.k;
  report.has_stats = true;
  report.stats = mean_stats(last.stats, index.geometry);
  report.timed_passes = options.repetitions - 2;
  if (!queries.empty()) {
    report.mean_latency_ms = timed_ms / static_cast<double>(report.timed_passes * queries.size());
  }
  return report;
}

std::string to_json(const MetricReport& r, bool include_per_query) {
  nlohmann::ordered_json j;
  j["num_queries"] = r.num_queries;
  j["k"] = r.k;
  if (r.has_metrics) {
    j["mrr_at_10"] = r.mrr_at_10;
    j["recall_at_k"] = r.recall_at_k;
    j["ndcg_at_10"] = r.ndcg_at_10;
    j["queries_without_relevant"] = r.queries_without_relevant;
    if (include_per_query) {
      j["per_query"] = {{"mrr_at_10", r.per_query_mrr}, {"recall_at_k", r.per_query_recall},
                        {"ndcg_at_10", r.per_query_ndcg}};
    }
  }
  if (r.has_stats) {
    j["stats"] = {{"superblocks_pruned", r.stats.superblocks_pruned},
                  {"superblocks_visited", r.stats.superblocks_visited},
                  {"blocks_pruned", r.stats.blocks_pruned},
                  {"blocks_scored", r.stats.blocks_scored},
                  {"docs_scored", r.stats.docs_scored},
                  {"superblocks_pruned_pct", r.stats.superblocks_pruned_pct},
                  {"blocks_pruned_pct", r.stats.blocks_pruned_pct}};
  }
  if (r.timed_passes > 0) {
    j["mean_latency_ms"] = r.mean_latency_ms;
    j["timed_passes"] = r.timed_passes;
  }
  return j.dump(2);
}

}  // namespace sbp

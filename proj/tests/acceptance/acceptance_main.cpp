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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. Pass criterion names as arguments to
// run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>
#include <zlib.h>

#include "sbp/bench_eval.hpp"
#include "sbp/block_index.hpp"
#include "sbp/kernels.hpp"
#include "sbp/metrics.hpp"
#include "sbp/oracle.hpp"
#include "sbp/search.hpp"
#include "sbp/synthetic.hpp"

namespace {

using namespace sbp;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared corpora: 50 seeded clustered collections, 20 queries each.

struct CorpusCase {
  SyntheticCorpusSpec spec;
  Corpus corpus;
  std::vector<QueryVector> queries;
};

SyntheticCorpusSpec corpus_spec(std::size_t i, std::mt19937_64& rng) {
  const auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  SyntheticCorpusSpec s;
  s.num_docs = pick(1000, 20000);
  s.vocab_size = pick(500, 5000);
  s.num_clusters = std::min(pick(4, 64), s.vocab_size / 8);
  s.terms_per_doc = std::min<std::size_t>(32, s.vocab_size / s.num_clusters);
  s.terms_per_query = std::min<std::size_t>(pick(3, 10), s.terms_per_doc);
  s.intra_cluster_term_overlap = std::uniform_real_distribution<double>(0.5, 0.95)(rng);
  s.weights = WeightDistribution::kZipf;
  s.zipf_s = std::uniform_real_distribution<double>(0.8, 1.4)(rng);
  s.num_queries = 20;
  s.shuffle = i % 2 == 0;
  s.seed = rng();
  s.qrels_depth = 0;
  return s;
}

CorpusCase materialize(const SyntheticCorpusSpec& spec) {
  const SyntheticData data = generate_synthetic(spec);
  CorpusCase c{spec, quantize_collection(collect_records(data.documents)), {}};
  for (const auto& q : data.queries) c.queries.push_back(resolve_query(q, c.corpus.vocab).vector);
  return c;
}

const std::vector<CorpusCase>& shared_corpora() {
  static const std::vector<CorpusCase> cases = [] {
    std::mt19937_64 rng(20250101);
    std::vector<CorpusCase> out;
    for (std::size_t i = 0; i < 50; ++i) out.push_back(materialize(corpus_spec(i, rng)));
    return out;
  }();
  return cases;
}

constexpr std::uint32_t kBlockSizes[] = {4, 8, 16};
constexpr std::uint32_t kSuperblockSizes[] = {8, 64};
constexpr std::size_t kDepths[] = {10, 100};

// ---------------------------------------------------------------------------

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  const auto& cases = shared_corpora();
  std::size_t comparisons = 0, mismatches = 0;
  std::string first_bad;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto& cc = cases[ci];
    std::vector<std::vector<ExactRanking>> exact(std::size(kDepths));
    for (std::size_t ki = 0; ki < std::size(kDepths); ++ki) {
      for (const auto& q : cc.queries) exact[ki].push_back(exact_topk(cc.corpus, q, kDepths[ki]));
    }
    for (std::uint32_t b : kBlockSizes) {
      for (std::uint32_t c : kSuperblockSizes) {
        const BlockIndex index = build_index(cc.corpus, DocOrdering::identity(cc.corpus.num_docs()), b, c);
        Searcher searcher(index);
        for (std::size_t ki = 0; ki < std::size(kDepths); ++ki) {
          for (auto mode : {TraversalMode::kInterleaved, TraversalMode::kTwoPhase}) {
            SearchParams p;
            p.k = kDepths[ki];
            p.mode = mode;
            for (std::size_t qi = 0; qi < cc.queries.size(); ++qi) {
              const SearchResult r = searcher.search(cc.queries[qi], p);
              const ExactRanking& e = exact[ki][qi];
              bool same = r.fingerprint == e.fingerprint && r.hits.size() == e.entries.size();
              for (std::size_t i = 0; same && i < r.hits.size(); ++i) {
                same = r.hits[i].doc == e.entries[i].doc && r.hits[i].score == e.entries[i].score;
              }
              ++comparisons;
              if (!same) {
                if (mismatches++ == 0) {
                  first_bad = fmt(" first: corpus %zu b=%u c=%u k=%zu query %zu", ci, b, c, p.k, qi);
                }
              }
            }
          }
        }
      }
    }
  }
  const double secs = seconds_since(start);
  return {mismatches == 0 && secs < 120.0,
          fmt("%zu top-k lists over 50 corpora, %zu mismatches, %.1fs (limit 120s)", comparisons, mismatches, secs) +
              first_bad};
}

Outcome mu_competitiveness() {
  const std::pair<Ratio, Ratio> grid[] = {{Ratio(2, 5), Ratio(1)},
                                          {Ratio(3, 5), Ratio(1)},
                                          {Ratio(4, 5), Ratio(1)},
                                          {Ratio(2, 5), Ratio(3, 5)},
                                          {Ratio(3, 5), Ratio(4, 5)}};
  const auto& cases = shared_corpora();
  std::size_t trials = 0, failures = 0;
  Ratio worst(1);
  for (const auto& cc : cases) {
    std::vector<ExactRanking> exact;
    for (const auto& q : cc.queries) exact.push_back(exact_topk(cc.corpus, q, 100));
    for (std::uint32_t b : kBlockSizes) {
      for (std::uint32_t c : kSuperblockSizes) {
        const BlockIndex index = build_index(cc.corpus, DocOrdering::identity(cc.corpus.num_docs()), b, c);
        Searcher searcher(index);
        for (std::size_t k : kDepths) {
          for (const auto& [mu, eta] : grid) {
            SearchParams p;
            p.k = k;
            p.mu = mu;
            p.eta = eta;
            for (std::size_t qi = 0; qi < cc.queries.size(); ++qi) {
              const SearchResult r = searcher.search(cc.queries[qi], p);
              ExactRanking e = exact[qi];
              if (e.entries.size() > k) e.entries.resize(k);
              e.fingerprint.k = k;
              std::vector<Score> got;
              for (const auto& h : r.hits) got.push_back(h.score);
              const auto report = competitiveness_report(got, r.fingerprint, e, mu, k);
              ++trials;
              failures += !report.ok;
              if (report.worst_ratio) worst = std::min(worst, *report.worst_ratio);
            }
          }
        }
      }
    }
  }
  return {failures == 0, fmt("%zu trials over 5 (mu, eta) pairs, %zu failures, smallest Avg ratio %.4f", trials,
                             failures, worst.to_double())};
}

QueryVector random_query(std::mt19937_64& rng, std::size_t vocab) {
  const std::size_t terms = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
  std::vector<TermWeight> entries;
  for (std::size_t i = 0; i < terms; ++i) {
    entries.push_back({static_cast<TermId>(rng() % vocab), static_cast<QueryWeight>(1 + rng() % 100)});
  }
  return QueryVector::from_unsorted(std::move(entries));
}

Outcome bound_dominance() {
  const auto& cases = shared_corpora();
  std::mt19937_64 rng(31337);
  std::size_t indexes = 0, checks = 0, violations = 0;
  for (const auto& cc : cases) {
    const std::size_t n = cc.corpus.num_docs();
    std::vector<QueryVector> queries;
    std::vector<std::vector<Score>> scores;
    std::vector<QueryWeight> dense(cc.corpus.vocab.size());
    for (int i = 0; i < 100; ++i) {
      queries.push_back(random_query(rng, cc.corpus.vocab.size()));
      std::fill(dense.begin(), dense.end(), 0);
      for (const auto& e : queries.back().entries) dense[e.term] = e.weight;
      scores.emplace_back(n);
      kernels::exhaustive_scores_parallel(cc.corpus, dense, scores.back());
    }
    for (std::uint32_t b : kBlockSizes) {
      for (std::uint32_t c : kSuperblockSizes) {
        const BlockIndex index = build_index(cc.corpus, DocOrdering::identity(n), b, c);
        const auto& g = index.geometry;
        std::vector<std::uint64_t> all(g.num_superblocks);
        std::iota(all.begin(), all.end(), 0);
        ++indexes;
        for (std::size_t qi = 0; qi < queries.size(); ++qi) {
          const SuperblockBounds sb = superblock_bounds(index, queries[qi]);
          const auto blocks = block_boundsums(index, queries[qi], all, LoopOrder::kTermAtATime);
          for (std::uint64_t x = 0; x < g.num_superblocks; ++x) {
            Score child_total = 0;
            Score score_total = 0;
            for (std::uint64_t blk = g.first_block(x); blk < g.first_block(x) + g.child_count(x); ++blk) {
              const Score bound = blocks[blk].bound;
              violations += bound > sb.sbmax[x];
              child_total += bound;
              for (std::uint32_t s = 0; s < g.docs_in_block(blk); ++s) {
                const Score score = scores[qi][index.doc_at(blk * b + s)];
                violations += score > bound;
                score_total += score;
              }
              checks += 2;
            }
            violations += child_total != sb.child_sum_score[x];
            // Mean over the superblock's c * b slots, padding slots scoring
            // zero, against child_sum / c: cross-multiplied by c * b.
            violations += score_total > sb.child_sum_score[x] * b;
            checks += 2;
          }
        }
      }
    }
  }
  return {violations == 0,
          fmt("%zu indexes x 100 queries, %zu checks, %zu violations", indexes, checks, violations)};
}

Outcome loop_order_equivalence() {
  const auto& cases = shared_corpora();
  std::mt19937_64 rng(4242);
  std::size_t pairs = 0, bound_mismatches = 0, search_mismatches = 0;
  for (const auto& cc : cases) {
    for (std::uint32_t b : kBlockSizes) {
      for (std::uint32_t c : kSuperblockSizes) {
        const BlockIndex index = build_index(cc.corpus, DocOrdering::identity(cc.corpus.num_docs()), b, c);
        std::vector<std::uint64_t> all(index.geometry.num_superblocks);
        std::iota(all.begin(), all.end(), 0);
        for (int i = 0; i < 4; ++i) {
          const QueryVector q =
              i % 2 ? cc.queries[rng() % cc.queries.size()] : random_query(rng, cc.corpus.vocab.size());
          std::vector<std::uint64_t> subset;
          for (auto x : all) {
            if (rng() % 3) subset.push_back(x);
          }
          ++pairs;
          bound_mismatches += block_boundsums(index, q, all, LoopOrder::kTermAtATime) !=
                              block_boundsums(index, q, all, LoopOrder::kSuperblockAtATime);
          bound_mismatches += block_boundsums(index, q, subset, LoopOrder::kTermAtATime) !=
                              block_boundsums(index, q, subset, LoopOrder::kSuperblockAtATime);
          for (const auto& [mu, eta] : {std::pair{Ratio(1), Ratio(1)}, std::pair{Ratio(1, 2), Ratio(4, 5)}}) {
            SearchParams p;
            p.k = i < 2 ? 10 : 100;
            p.mode = TraversalMode::kTwoPhase;
            p.mu = mu;
            p.eta = eta;
            p.loop_order = LoopOrder::kTermAtATime;
            const SearchResult taat = search(index, q, p);
            p.loop_order = LoopOrder::kSuperblockAtATime;
            const SearchResult saat = search(index, q, p);
            search_mismatches += !(taat.hits == saat.hits && taat.stats == saat.stats);
          }
        }
      }
    }
  }
  return {pairs >= 1000 && bound_mismatches == 0 && search_mismatches == 0,
          fmt("%zu (index, query) pairs, %zu BoundSum mismatches, %zu two-phase result mismatches", pairs,
              bound_mismatches, search_mismatches)};
}

Outcome predicate_monotonicity() {
  std::mt19937_64 rng(9001);
  const auto upto = [&](std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(1, hi)(rng); };
  std::size_t pruned = 0, violations = 0;
  constexpr std::int64_t kDen = 1000;
  for (int i = 0; i < 10000; ++i) {
    const std::uint32_t c = static_cast<std::uint32_t>(upto(256));
    const Score sbmax = static_cast<Score>(rng() % 100000);
    const Score css = std::uniform_int_distribution<Score>(0, sbmax * c)(rng);
    const Score theta = static_cast<Score>(rng() % 100000);
    const std::int64_t eta = upto(kDen), mu = upto(eta), eta2 = upto(eta), mu2 = upto(std::min(mu, eta2));
    if (superblock_prune_decision(sbmax, css, theta, Ratio(mu, kDen), Ratio(eta, kDen), c) == PruneDecision::kPrune) {
      ++pruned;
      violations += superblock_prune_decision(sbmax, css, theta, Ratio(mu2, kDen), Ratio(eta2, kDen), c) !=
                    PruneDecision::kPrune;
    }
  }
  return {violations == 0,
          fmt("10000 tuples, %zu pruned at (mu, eta), %zu not pruned at (mu', eta')", pruned, violations)};
}

Outcome pruning_trend() {
  SyntheticCorpusSpec spec;
  spec.num_docs = 20000;
  spec.vocab_size = 4096;
  spec.num_clusters = 64;
  spec.terms_per_doc = 32;
  spec.terms_per_query = 8;
  spec.intra_cluster_term_overlap = 0.85;
  spec.num_queries = 200;
  spec.shuffle = true;
  spec.seed = 77;
  spec.qrels_depth = 10;
  const SyntheticData data = generate_synthetic(spec);
  const Corpus corpus = quantize_collection(collect_records(data.documents));
  const BlockIndex index = build_index(corpus, order_documents(corpus, OrderingStrategy::kGreedySimilarity), 8, 64);
  std::vector<QueryRecord> queries;
  for (const auto& q : data.queries) queries.push_back(resolve_query(q, corpus.vocab));

  BenchmarkOptions options;
  options.repetitions = 3;
  std::string rows;
  std::vector<MetricReport> reports;
  for (const Ratio mu : {Ratio(1), Ratio(4, 5), Ratio(3, 5), Ratio(2, 5)}) {
    SearchParams p;
    p.k = 10;
    p.mu = mu;
    reports.push_back(run_benchmark(index, queries, p, options, &data.qrels));
    const auto& r = reports.back();
    rows += fmt(" | mu=%s SuB %.1f%% Bsc %.1f Re %.4f", mu.to_string().c_str(), r.stats.superblocks_pruned_pct,
                r.stats.blocks_scored, r.recall_at_k);
  }
  const MetricReport& safe = reports.front();
  const MetricReport& low = reports.back();
  const bool more_pruning = low.stats.superblocks_pruned > safe.stats.superblocks_pruned;
  const bool recall_ok = safe.recall_at_k - low.recall_at_k <= 0.02;
  const auto superblocks = static_cast<unsigned long long>(index.geometry.num_superblocks);
  return {more_pruning && recall_ok, fmt("S=%llu superblocks, 200 queries, k=10", superblocks) + rows};
}

Outcome probabilistic_eta() {
  std::mt19937_64 rng(555);
  const std::size_t k = 10;
  double sum_main = 0.0, sum_low_mu = 0.0;
  std::size_t trials = 0;
  for (std::size_t ci = 0; trials < 500; ++ci) {
    SyntheticCorpusSpec spec;
    spec.num_docs = 4000;
    spec.vocab_size = 1600;
    spec.num_clusters = 16;
    spec.terms_per_doc = 24;
    spec.terms_per_query = 6;
    spec.num_queries = 25;
    spec.qrels_depth = 0;
    spec.seed = 1000 + ci;
    const CorpusCase cc = materialize(spec);
    // Uniformly random superblock membership.
    const DocOrdering ordering = [&] {
      DocOrdering o = DocOrdering::identity(cc.corpus.num_docs());
      std::shuffle(o.permutation.begin(), o.permutation.end(), rng);
      return o;
    }();
    const BlockIndex index = build_index(cc.corpus, ordering, 8, 16);
    Searcher searcher(index);
    for (const auto& q : cc.queries) {
      const ExactRanking exact = exact_topk(cc.corpus, q, k);
      if (exact.entries.size() < k || trials >= 500) continue;
      const Ratio oracle_avg = avg_topk(exact, k);
      const auto ratio = [&](const Ratio& mu) {
        SearchParams p;
        p.k = k;
        p.mu = mu;
        p.eta = Ratio(4, 5);
        const SearchResult r = searcher.search(q, p);
        Score total = 0;
        for (const auto& h : r.hits) total += h.score;  // missing entries count as zero
        return (static_cast<double>(total) / static_cast<double>(k)) / oracle_avg.to_double();
      };
      sum_main += ratio(Ratio(4, 5));
      sum_low_mu += ratio(Ratio(2, 5));
      ++trials;
    }
  }
  const double mean = sum_main / static_cast<double>(trials);
  return {mean >= 0.78, fmt("%zu trials, eta=0.8: mean Avg(k) ratio %.4f at mu=0.8 (required >= 0.78); %.4f at mu=0.4",
                            trials, mean, sum_low_mu / static_cast<double>(trials))};
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome index_round_trip() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("sbp_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::size_t indexes = 0, problems = 0;
  std::string notes;
  for (std::size_t ci = 0; ci < 6; ++ci) {
    const auto& cc = shared_corpora()[ci];
    for (std::uint32_t b : kBlockSizes) {
      for (std::uint32_t c : kSuperblockSizes) {
        const BlockIndex index = build_index(cc.corpus, order_documents(cc.corpus, OrderingStrategy::kIdentity), b, c);
        const std::string p1 = (dir / "a.sbpi").string(), p2 = (dir / "b.sbpi").string();
        save_index(index, p1);
        save_index(index, p2);
        const auto bytes1 = read_file(p1), bytes2 = read_file(p2);
        ++indexes;
        if (bytes1 != bytes2 || bytes1 != serialize_index(index)) ++problems, notes += " [files differ]";

        // The trailer is the CRC-32 of everything before it, little endian.
        const uLong crc = crc32(crc32(0L, Z_NULL, 0), bytes1.data(), static_cast<uInt>(bytes1.size() - 4));
        std::uint32_t stored = 0;
        for (int i = 0; i < 4; ++i) stored |= static_cast<std::uint32_t>(bytes1[bytes1.size() - 4 + i]) << (8 * i);
        if (stored != static_cast<std::uint32_t>(crc)) ++problems, notes += " [crc trailer]";

        const BlockIndex back = load_index(p1);
        if (!(back == index) || serialize_index(back) != bytes1) ++problems, notes += " [reload differs]";

        auto damaged = bytes1;
        damaged[damaged.size() / 3] ^= 0x01;
        try {
          deserialize_index(damaged);
          ++problems, notes += " [corruption undetected]";
        } catch (const IndexFormatError&) {
        }

        const std::uint64_t n_blocks = (cc.corpus.num_docs() + b - 1) / b;
        const std::uint64_t expected = (n_blocks + c - 1) / c * cc.corpus.vocab.size() * 3;
        if (index_space_report(index).superblock_table_bytes != expected) ++problems, notes += " [space formula]";
      }
    }
  }
  fs::remove_all(dir);
  const std::uint64_t full_scale = superblock_table_bytes(30522, 1'100'000, 64);
  return {problems == 0,
          fmt("%zu indexes saved twice, reloaded, CRC and space checked, %zu problems", indexes, problems) +
                             notes + fmt("; full-scale superblock tables would take %.2f GB", full_scale / 1e9)};
}

Outcome metric_fixtures() {
  struct Fixture {
    std::vector<std::string> ranking;
    QueryQrels qrels;
    std::size_t k;
    double mrr, recall, ndcg;
  };
  std::vector<std::string> eleven, twelve;
  for (int i = 1; i <= 11; ++i) eleven.push_back("d" + std::to_string(i));
  for (int i = 1; i <= 12; ++i) twelve.push_back("r" + std::to_string(i));
  QueryQrels fifteen;
  for (int i = 1; i <= 15; ++i) fifteen["r" + std::to_string(i)] = 1;

  const std::vector<Fixture> fixtures{
      {{"a", "b", "c"}, {{"a", 1}}, 10, 1.0, 1.0, 1.0},
      {{"x", "y", "a"}, {{"a", 1}}, 10, 1.0 / 3.0, 1.0, 0.5},
      {{"x", "a"}, {{"a", 1}}, 10, 0.5, 1.0, 0.6309297535714575},
      {eleven, {{"d11", 1}}, 10, 0.0, 0.0, 0.0},
      {{"r1", "x", "r2", "y"}, {{"r1", 1}, {"r2", 1}, {"r3", 1}, {"r4", 1}}, 4, 1.0, 0.5, 0.5855700749881525},
      {{"a", "b"}, {{"a", 0}}, 10, 0.0, 1.0, 0.0},
      {{"a", "b", "c"}, {{"a", 1}, {"b", 3}, {"c", 2}}, 10, 1.0, 1.0, 0.7363636171343382},
      {{}, {{"a", 1}}, 10, 0.0, 0.0, 0.0},
      {{"a", "b", "c", "d"}, {{"c", 1}, {"d", 1}}, 3, 1.0 / 3.0, 0.5, 0.5706417189553201},
      {twelve, fifteen, 12, 1.0, 0.8, 1.0},
  };
  std::size_t bad = 0;
  std::string notes;
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    const auto& f = fixtures[i];
    const double mrr = mrr_at_10(f.ranking, f.qrels);
    const double recall = recall_at_k(f.ranking, f.qrels, f.k).value;
    const double ndcg = ndcg_at_10(f.ranking, f.qrels);
    if (std::abs(mrr - f.mrr) > 1e-9 || std::abs(recall - f.recall) > 1e-9 || std::abs(ndcg - f.ndcg) > 1e-9) {
      ++bad;
      notes += fmt(" [fixture %zu: %.12f %.12f %.12f]", i + 1, mrr, recall, ndcg);
    }
  }
  return {bad == 0, fmt("%zu fixtures, %zu outside 1e-9", fixtures.size(), bad) + notes};
}

Outcome latency_smoke() {
  SyntheticCorpusSpec spec;
  spec.num_docs = 100000;
  spec.vocab_size = 5000;
  spec.num_clusters = 64;
  spec.terms_per_doc = 32;
  spec.terms_per_query = 8;
  spec.num_queries = 50;
  spec.shuffle = false;  // documents arrive grouped by cluster
  spec.seed = 100000;
  spec.qrels_depth = 0;
  const SyntheticData data = generate_synthetic(spec);
  const Corpus corpus = quantize_collection(collect_records(data.documents));
  const BlockIndex index = build_index(corpus, DocOrdering::identity(corpus.num_docs()), 8, 64);
  std::vector<QueryRecord> queries;
  for (const auto& q : data.queries) queries.push_back(resolve_query(q, corpus.vocab));

  SearchParams p;
  p.k = 10;
  BenchmarkOptions sp;
  sp.repetitions = 5;
  BenchmarkOptions oracle = sp;
  oracle.oracle = true;
  const MetricReport fast = run_benchmark(index, queries, p, sp);
  const MetricReport slow = run_benchmark(index, queries, p, oracle);
  const double ratio = fast.mean_latency_ms / slow.mean_latency_ms;
  return {ratio <= 0.5, fmt("100000 docs, safe search %.3f ms vs exhaustive %.3f ms per query (ratio %.3f, limit 0.5)",
                            fast.mean_latency_ms, slow.mean_latency_ms, ratio)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"safe_mode_oracle_equivalence", oracle_equivalence},
      {"mu_competitiveness", mu_competitiveness},
      {"bound_dominance_and_average_identity", bound_dominance},
      {"loop_order_equivalence", loop_order_equivalence},
      {"prune_predicate_monotonicity", predicate_monotonicity},
      {"superblock_pruning_trend", pruning_trend},
      {"probabilistic_eta_property", probabilistic_eta},
      {"index_round_trip", index_round_trip},
      {"metric_correctness", metric_fixtures},
      {"latency_smoke", latency_smoke},
  };
  std::set<std::string> only(argv + 1, argv + argc);

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    if (!only.empty() && !only.contains(c.name)) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << '[' << (i + 1) << "/10] " << c.name << " ("
              << fmt("%.1fs", seconds_since(start)) << "): " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}

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

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbp/bench_eval.hpp"
#include "sbp/block_index.hpp"
#include "sbp/corpus.hpp"
#include "sbp/metrics.hpp"
#include "sbp/oracle.hpp"
#include "sbp/search.hpp"
#include "sbp/synthetic.hpp"

namespace {

using nlohmann::ordered_json;

struct SearchOptions {
  std::string index_path;
  std::string queries_path;
  std::size_t k = 10;
  std::string mu = "1";
  std::string eta = "1";
  std::string beta = "1";
  std::string loop_order = "saat";
  std::string mode = "interleaved";
  double query_scale = sbp::kDefaultQueryScale;
  bool oracle = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--index", index_path, "Index file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--queries", queries_path, "Query JSONL file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--k", k, "Result depth")->check(CLI::PositiveNumber);
    cmd->add_option("--mu", mu, "Superblock max threshold factor, e.g. 0.6 or 3/5");
    cmd->add_option("--eta", eta, "Average / block threshold factor");
    cmd->add_option("--beta", beta, "Fraction of query weight to keep");
    cmd->add_option("--loop-order", loop_order, "saat or taat")->check(CLI::IsMember({"saat", "taat"}));
    cmd->add_option("--mode", mode, "interleaved or two-phase")->check(CLI::IsMember({"interleaved", "two-phase"}));
    cmd->add_option("--query-scale", query_scale, "Multiplier applied to query weights before rounding");
    cmd->add_flag("--oracle", oracle, "Score exhaustively instead of with the pruned search");
  }

  sbp::SearchParams params() const {
    sbp::SearchParams p;
    p.k = k;
    p.mu = sbp::Ratio::parse(mu);
    p.eta = sbp::Ratio::parse(eta);
    p.beta = sbp::Ratio::parse(beta);
    p.loop_order = sbp::parse_loop_order(loop_order);
    p.mode = sbp::parse_traversal_mode(mode);
    p.validate();
    return p;
  }
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

int cmd_index_build(const std::string& docs, const std::string& out, std::uint32_t b, std::uint32_t c,
                    const std::string& order) {
  const auto start = std::chrono::steady_clock::now();
  const sbp::Corpus corpus = sbp::load_corpus(docs);
  const sbp::DocOrdering ordering = sbp::order_documents(corpus, sbp::parse_ordering_strategy(order));
  const sbp::BlockIndex index = sbp::build_index(corpus, ordering, b, c);
  sbp::save_index(index, out);
  const sbp::SpaceReport space = sbp::index_space_report(index);

  ordered_json j;
  j["index"] = out;
  j["num_docs"] = index.geometry.num_docs;
  j["vocab_size"] = index.vocab_size();
  j["block_size"] = index.geometry.block_size;
  j["superblock_size"] = index.geometry.superblock_size;
  j["num_blocks"] = index.geometry.num_blocks;
  j["num_superblocks"] = index.geometry.num_superblocks;
  j["ordering"] = order;
  j["quantization_scale"] = index.manifest.quantization.scale;
  j["space_bytes"] = {{"superblock_tables", space.superblock_table_bytes},
                      {"block_table", space.block_table_bytes},
                      {"forward_index", space.forward_bytes}};
  j["build_ms"] = elapsed_ms(start);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_search(const SearchOptions& opt, const std::string& out_path, const std::string& tag) {
  const sbp::SearchParams params = opt.params();
  const sbp::BlockIndex index = sbp::load_index(opt.index_path);
  const auto queries = sbp::load_queries(opt.queries_path, index.vocab, opt.query_scale);

  std::optional<sbp::Corpus> corpus;
  if (opt.oracle) corpus = sbp::reconstruct_corpus(index);

  std::vector<sbp::QueryRun> runs;
  std::vector<sbp::TraversalStats> stats;
  std::size_t oov = 0;
  sbp::Searcher searcher(index);
  const auto start = std::chrono::steady_clock::now();
  for (const auto& q : queries) {
    oov += q.oov_terms;
    if (corpus) {
      const auto exact = sbp::exact_topk(*corpus, q.vector, params.k);
      sbp::QueryRun run{q.id, {}, {}};
      for (const auto& e : exact.entries) {
        run.docs.push_back(corpus->manifest.external_ids[e.doc]);
        run.scores.push_back(e.score);
      }
      runs.push_back(std::move(run));
    } else {
      const auto result = searcher.search(q.vector, params);
      runs.push_back(sbp::to_query_run(index, q.id, result));
      stats.push_back(result.stats);
    }
  }
  const double total_ms = elapsed_ms(start);

  if (out_path.empty() || out_path == "-") {
    sbp::write_trec_run(std::cout, runs, tag);
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  sbp::write_trec_run(out, runs, tag);

  ordered_json j;
  j["run"] = out_path;
  j["num_queries"] = queries.size();
  j["k"] = params.k;
  j["oracle"] = opt.oracle;
  j["oov_terms_dropped"] = oov;
  if (!opt.oracle) {
    const sbp::MeanStats m = sbp::mean_stats(stats, index.geometry);
    j["mean_stats"] = {{"superblocks_pruned", m.superblocks_pruned}, {"superblocks_visited", m.superblocks_visited},
                       {"blocks_pruned", m.blocks_pruned},           {"blocks_scored", m.blocks_scored},
                       {"docs_scored", m.docs_scored}};
  }
  j["total_ms"] = total_ms;
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_eval(const std::string& results, const std::string& qrels_path, std::size_t k, bool per_query) {
  std::ifstream in(results);
  if (!in) throw std::runtime_error("cannot open " + results);
  const auto runs = sbp::parse_trec_run(in);
  const auto qrels = sbp::load_qrels(qrels_path);
  std::cout << sbp::to_json(sbp::evaluate_runs(runs, qrels, k), per_query) << '\n';
  return 0;
}

std::vector<sbp::Ratio> parse_ratio_list(const std::vector<std::string>& items) {
  std::vector<sbp::Ratio> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(sbp::Ratio::parse(part));
    }
  }
  return out;
}

int cmd_bench(const SearchOptions& opt, std::size_t reps, int threads, const std::string& qrels_path,
              const std::vector<std::string>& sweep_mu, const std::vector<std::string>& sweep_eta,
              std::optional<double> budget, bool per_query) {
  const sbp::SearchParams base = opt.params();
  const sbp::BlockIndex index = sbp::load_index(opt.index_path);
  const auto queries = sbp::load_queries(opt.queries_path, index.vocab, opt.query_scale);
  std::optional<sbp::Qrels> qrels;
  if (!qrels_path.empty()) qrels = sbp::load_qrels(qrels_path);
  const sbp::Qrels* qp = qrels ? &*qrels : nullptr;

  sbp::BenchmarkOptions options;
  options.repetitions = reps;
  options.threads = threads;
  options.oracle = opt.oracle;

  if (sweep_mu.empty() && sweep_eta.empty()) {
    if (budget) throw std::invalid_argument("--budget needs a --sweep-mu/--sweep-eta grid");
    std::cout << sbp::to_json(sbp::run_benchmark(index, queries, base, options, qp), per_query) << '\n';
    return 0;
  }

  if (budget && !qp) throw std::invalid_argument("--budget needs --qrels");
  auto mus = parse_ratio_list(sweep_mu);
  auto etas = parse_ratio_list(sweep_eta);
  if (mus.empty()) mus.push_back(base.mu);
  if (etas.empty()) etas.push_back(base.eta);

  ordered_json j;
  j["grid"] = ordered_json::array();
  std::optional<double> safe_recall;
  if (budget) {
    sbp::SearchParams safe = base;
    safe.mu = safe.eta = sbp::Ratio(1);
    const auto report = sbp::run_benchmark(index, queries, safe, options, qp);
    safe_recall = report.recall_at_k;
    j["safe"] = ordered_json::parse(sbp::to_json(report));
    j["budget"] = *budget;
    j["recall_threshold"] = sbp::recall_budget_threshold(*safe_recall, *budget);
  }
  for (const auto& mu : mus) {
    for (const auto& eta : etas) {
      if (eta < mu) continue;  // only mu <= eta is a valid pair
      sbp::SearchParams p = base;
      p.mu = mu;
      p.eta = eta;
      const auto report = sbp::run_benchmark(index, queries, p, options, qp);
      ordered_json entry;
      entry["mu"] = mu.to_string();
      entry["eta"] = eta.to_string();
      entry["report"] = ordered_json::parse(sbp::to_json(report, per_query));
      if (safe_recall) entry["meets_budget"] = sbp::recall_budget_eval(*safe_recall, report.recall_at_k, *budget);
      j["grid"].push_back(std::move(entry));
    }
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& out_dir) {
  std::ifstream in(spec_path);
  if (!in) throw std::runtime_error("cannot open " + spec_path);
  std::stringstream text;
  text << in.rdbuf();
  const sbp::SyntheticCorpusSpec spec = sbp::parse_synthetic_spec(text.str());
  const sbp::SyntheticData data = sbp::generate_synthetic(spec);
  sbp::write_synthetic(data, spec, out_dir);

  ordered_json j;
  j["out"] = out_dir;
  j["num_docs"] = data.documents.size();
  j["num_queries"] = data.queries.size();
  j["qrels_queries"] = data.qrels.size();
  j["seed"] = spec.seed;
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superblock-pruned top-k retrieval over quantized sparse vectors"};
  app.require_subcommand(1);

  auto* index_cmd = app.add_subcommand("index", "Index management");
  index_cmd->require_subcommand(1);
  auto* build_cmd = index_cmd->add_subcommand("build", "Build an index from a JSONL document file");
  std::string docs, index_out, order = "identity";
  std::uint32_t b = sbp::kDefaultBlockSize, c = sbp::kDefaultSuperblockSize;
  build_cmd->add_option("--docs", docs, "Document JSONL file")->required()->check(CLI::ExistingFile);
  build_cmd->add_option("--out", index_out, "Output index file")->required();
  build_cmd->add_option("--b", b, "Documents per block");
  build_cmd->add_option("--c", c, "Blocks per superblock");
  build_cmd->add_option("--order", order, "identity or greedy")->check(CLI::IsMember({"identity", "greedy"}));

  auto* search_cmd = app.add_subcommand("search", "Run a query file, print a TREC run");
  SearchOptions search_opt;
  search_opt.add_to(search_cmd);
  std::string run_out, tag = "sbp";
  search_cmd->add_option("--out", run_out, "Write the run here and print a JSON summary instead");
  search_cmd->add_option("--tag", tag, "Run tag");

  auto* eval_cmd = app.add_subcommand("eval", "Score a TREC run against qrels");
  std::string results, qrels_path;
  std::size_t eval_k = 10;
  bool per_query = false;
  eval_cmd->add_option("--results", results, "TREC run file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--qrels", qrels_path, "Qrels file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--k", eval_k, "Recall depth")->required()->check(CLI::PositiveNumber);
  eval_cmd->add_flag("--per-query", per_query, "Include per-query metric values");

  auto* bench_cmd = app.add_subcommand("bench", "Timed benchmark with optional metrics and grid sweep");
  SearchOptions bench_opt;
  bench_opt.add_to(bench_cmd);
  std::size_t reps = 5;
  int threads = 1;
  std::string bench_qrels;
  std::vector<std::string> sweep_mu, sweep_eta;
  std::optional<double> budget;
  bool bench_per_query = false;
  bench_cmd->add_option("--reps", reps, "Passes over the query set; the first two are warm-up")
      ->check(CLI::Range(std::size_t{3}, std::size_t{1000000}));
  bench_cmd->add_option("--threads", threads, "Shard queries across this many threads")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--qrels", bench_qrels, "Qrels for metrics")->check(CLI::ExistingFile);
  bench_cmd->add_option("--sweep-mu", sweep_mu, "Comma-separated mu values to sweep");
  bench_cmd->add_option("--sweep-eta", sweep_eta, "Comma-separated eta values to sweep");
  bench_cmd->add_option("--budget", budget, "Recall budget in (0, 1] checked against mu = eta = 1");
  bench_cmd->add_flag("--per-query", bench_per_query, "Include per-query metric values");

  auto* synth_cmd = app.add_subcommand("synth", "Generate a clustered synthetic collection");
  std::string spec_path, synth_out;
  synth_cmd->add_option("--spec", spec_path, "JSON generator settings")->required()->check(CLI::ExistingFile);
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build_cmd) return cmd_index_build(docs, index_out, b, c, order);
    if (*search_cmd) return cmd_search(search_opt, run_out, tag);
    if (*eval_cmd) return cmd_eval(results, qrels_path, eval_k, per_query);
    if (*bench_cmd) {
      return cmd_bench(bench_opt, reps, threads, bench_qrels, sweep_mu, sweep_eta, budget, bench_per_query);
    }
    if (*synth_cmd) return cmd_synth(spec_path, synth_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

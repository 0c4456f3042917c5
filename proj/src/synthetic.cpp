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

#include "sbp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "sbp/oracle.hpp"

namespace sbp {

void SyntheticCorpusSpec::validate() const {
  if (num_docs == 0) throw std::invalid_argument("synthetic: num_docs must be positive");
  if (num_clusters == 0) throw std::invalid_argument("synthetic: num_clusters must be positive");
  if (terms_per_doc == 0 || terms_per_query == 0) throw std::invalid_argument("synthetic: empty vectors requested");
  if (vocab_size / num_clusters < std::max(terms_per_doc, terms_per_query)) {
    throw std::invalid_argument("synthetic: vocabulary too small for terms_per_doc (pool of " +
                                std::to_string(vocab_size / num_clusters) + " terms per cluster)");
  }
  if (!(intra_cluster_term_overlap >= 0.0 && intra_cluster_term_overlap <= 1.0)) {
    throw std::invalid_argument("synthetic: intra_cluster_term_overlap must lie in [0, 1]");
  }
  if (!(global_noise >= 0.0 && global_noise <= 1.0)) {
    throw std::invalid_argument("synthetic: global_noise must lie in [0, 1]");
  }
  if (weights == WeightDistribution::kZipf && !(zipf_s > 0.0)) {
    throw std::invalid_argument("synthetic: zipf_s must be positive");
  }
  if (!(query_scale > 0.0)) throw std::invalid_argument("synthetic: query_scale must be positive");
}

SyntheticCorpusSpec parse_synthetic_spec(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  SyntheticCorpusSpec s;
  s.num_docs = j.value("num_docs", s.num_docs);
  s.vocab_size = j.value("vocab_size", s.vocab_size);
  s.terms_per_doc = j.value("terms_per_doc", s.terms_per_doc);
  s.num_clusters = j.value("num_clusters", s.num_clusters);
  s.intra_cluster_term_overlap = j.value("intra_cluster_term_overlap", s.intra_cluster_term_overlap);
  s.global_noise = j.value("global_noise", s.global_noise);
  const std::string dist = j.value("weights", std::string("zipf"));
  if (dist == "uniform") {
    s.weights = WeightDistribution::kUniform;
  } else if (dist == "zipf") {
    s.weights = WeightDistribution::kZipf;
  } else {
    throw std::invalid_argument("synthetic: weights must be \"uniform\" or \"zipf\"");
  }
  s.zipf_s = j.value("zipf_s", s.zipf_s);
  s.num_queries = j.value("num_queries", s.num_queries);
  s.terms_per_query = j.value("terms_per_query", s.terms_per_query);
  s.shuffle = j.value("shuffle", s.shuffle);
  s.seed = j.value("seed", s.seed);
  s.query_scale = j.value("query_scale", s.query_scale);
  s.qrels_depth = j.value("qrels_depth", s.qrels_depth);
  s.validate();
  return s;
}

std::string to_json(const SyntheticCorpusSpec& s) {
  nlohmann::ordered_json j;
  j["num_docs"] = s.num_docs;
  j["vocab_size"] = s.vocab_size;
  j["terms_per_doc"] = s.terms_per_doc;
  j["num_clusters"] = s.num_clusters;
  j["intra_cluster_term_overlap"] = s.intra_cluster_term_overlap;
  j["global_noise"] = s.global_noise;
  j["weights"] = s.weights == WeightDistribution::kUniform ? "uniform" : "zipf";
  j["zipf_s"] = s.zipf_s;
  j["num_queries"] = s.num_queries;
  j["terms_per_query"] = s.terms_per_query;
  j["shuffle"] = s.shuffle;
  j["seed"] = s.seed;
  j["query_scale"] = s.query_scale;
  j["qrels_depth"] = s.qrels_depth;
  return j.dump(2);
}

namespace {

// Distributions are hand-rolled over mt19937_64 so output does not depend on
// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

 private:
  std::mt19937_64 engine_;
};

class WeightSampler {
 public:
  WeightSampler(WeightDistribution dist, double s) : dist_(dist) {
    if (dist_ == WeightDistribution::kZipf) {
      cdf_.resize(kLevels);
      double total = 0.0;
      for (int r = 1; r <= kLevels; ++r) {
        total += 1.0 / std::pow(static_cast<double>(r), s);
        cdf_[r - 1] = total;
      }
      for (auto& v : cdf_) v /= total;
    }
  }

  /// A weight in (0, 1]. Under zipf, small weights are the common ones.
  double operator()(Rng& rng) const {
    if (dist_ == WeightDistribution::kUniform) return 1.0 - rng.uniform();
    const double u = rng.uniform();
    const auto rank = static_cast<int>(std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin()) + 1;
    return (static_cast<double>(std::min(rank, kLevels)) - rng.uniform()) / kLevels;
  }

 private:
  static constexpr int kLevels = 256;
  WeightDistribution dist_;
  std::vector<double> cdf_;
};

std::vector<std::size_t> draw_terms(const SyntheticCorpusSpec& spec, std::size_t cluster, std::size_t count,
                                    Rng& rng) {
  const std::size_t pool = spec.vocab_size / spec.num_clusters;
  const std::size_t core = spec.terms_per_doc;
  const std::size_t base = cluster * pool;
  std::vector<std::size_t> terms;
  std::unordered_set<std::size_t> seen;
  for (std::size_t attempt = 0; terms.size() < count && attempt < 64 * count; ++attempt) {
    std::size_t t;
    if (rng.uniform() < spec.global_noise) {
      t = rng.below(spec.vocab_size);
    } else if (rng.uniform() < spec.intra_cluster_term_overlap) {
      t = base + rng.below(core);
    } else {
      t = base + rng.below(pool);
    }
    if (seen.insert(t).second) terms.push_back(t);
  }
  return terms;
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticCorpusSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  WeightSampler sample_weight(spec.weights, spec.zipf_s);
  SyntheticData data;

  for (std::size_t i = 0; i < spec.num_docs; ++i) {
    const std::size_t cluster = spec.shuffle ? rng.below(spec.num_clusters) : i * spec.num_clusters / spec.num_docs;
    SparseRecord rec;
    rec.id = "d" + std::to_string(i);
    for (std::size_t t : draw_terms(spec, cluster, spec.terms_per_doc, rng)) {
      rec.terms.emplace_back("t" + std::to_string(t), sample_weight(rng));
    }
    data.documents.push_back(std::move(rec));
    data.doc_clusters.push_back(static_cast<std::uint32_t>(cluster));
  }

  for (std::size_t i = 0; i < spec.num_queries; ++i) {
    const std::size_t cluster = rng.below(spec.num_clusters);
    SparseRecord rec;
    rec.id = "q" + std::to_string(i);
    for (std::size_t t : draw_terms(spec, cluster, spec.terms_per_query, rng)) {
      rec.terms.emplace_back("t" + std::to_string(t), 0.1 + 0.9 * rng.uniform());
    }
    data.queries.push_back(std::move(rec));
    data.query_clusters.push_back(static_cast<std::uint32_t>(cluster));
  }

  if (spec.qrels_depth > 0) {
    const Corpus corpus = quantize_collection(collect_records(data.documents));
    for (const auto& qrec : data.queries) {
      const QueryRecord q = resolve_query(qrec, corpus.vocab, spec.query_scale);
      auto& judged = data.qrels[q.id];
      for (const auto& e : exact_topk(corpus, q.vector, spec.qrels_depth).entries) {
        judged[corpus.manifest.external_ids[e.doc]] = 1;
      }
    }
  }
  return data;
}

void write_synthetic(const SyntheticData& data, const SyntheticCorpusSpec& spec, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto write_records = [&](const std::string& name, const std::vector<SparseRecord>& records) {
    std::ofstream out(fs::path(dir) / name);
    if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    for (const auto& r : records) out << format_record(r) << '\n';
  };
  write_records("docs.jsonl", data.documents);
  write_records("queries.jsonl", data.queries);
  std::ofstream qrels(fs::path(dir) / "qrels.tsv");
  write_qrels(qrels, data.qrels);
  std::ofstream(fs::path(dir) / "spec.json") << to_json(spec) << '\n';
}

}  // namespace sbp

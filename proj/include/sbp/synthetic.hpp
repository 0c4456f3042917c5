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
#include <string>
#include <vector>

#include "sbp/corpus.hpp"
#include "sbp/metrics.hpp"

namespace sbp {

enum class WeightDistribution { kUniform, kZipf };

/// Clustered synthetic collection.
///
/// The vocabulary is split into num_clusters disjoint pools of
/// vocab_size / num_clusters terms. Each cluster's first terms_per_doc pool
/// terms are its core. A document (or query) term is drawn from the global
/// vocabulary with probability global_noise, otherwise from the cluster core
/// with probability intra_cluster_term_overlap, otherwise uniformly from the
/// cluster pool.
struct SyntheticCorpusSpec {
  std::size_t num_docs = 10000;
  std::size_t vocab_size = 2000;
  std::size_t terms_per_doc = 32;
  std::size_t num_clusters = 32;
  double intra_cluster_term_overlap = 0.8;
  double global_noise = 0.05;
  WeightDistribution weights = WeightDistribution::kZipf;
  double zipf_s = 1.1;
  std::size_t num_queries = 100;
  std::size_t terms_per_query = 8;
  /// false: documents are emitted grouped by cluster; true: in random order.
  bool shuffle = true;
  std::uint64_t seed = 42;
  double query_scale = kDefaultQueryScale;
  std::size_t qrels_depth = 10;

  /// Throws std::invalid_argument, e.g. when the vocabulary is too small for
  /// terms_per_doc.
  void validate() const;
};

SyntheticCorpusSpec parse_synthetic_spec(const std::string& json_text);
std::string to_json(const SyntheticCorpusSpec& spec);

struct SyntheticData {
  std::vector<SparseRecord> documents;
  std::vector<SparseRecord> queries;
  /// Cluster of each document, aligned with documents.
  std::vector<std::uint32_t> doc_clusters;
  std::vector<std::uint32_t> query_clusters;
  /// Exhaustive top-qrels_depth documents per query, grade 1.
  Qrels qrels;
};

/// Deterministic for a given spec (including seed).
SyntheticData generate_synthetic(const SyntheticCorpusSpec& spec);

/// Writes docs.jsonl, queries.jsonl, qrels.tsv and spec.json into dir.
void write_synthetic(const SyntheticData& data, const SyntheticCorpusSpec& spec, const std::string& dir);

}  // namespace sbp

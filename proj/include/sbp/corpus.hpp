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
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sbp/ratio.hpp"

namespace sbp {

using TermId = std::uint32_t;
/// Document id in input (collection) order.
using DocId = std::uint32_t;
using Impact = std::uint8_t;
using QueryWeight = std::uint32_t;
/// All rank scores and bounds are exact integers over the quantized model.
using Score = std::uint64_t;

inline constexpr int kQuantizationLevels = 256;
inline constexpr Impact kMaxImpact = 255;
inline constexpr double kDefaultQueryScale = 100.0;

struct QuantizationParams {
  /// Weight units per quantization step: global max raw weight / 255.
  double scale = 1.0;

  static QuantizationParams from_max_weight(double max_weight);

  friend bool operator==(const QuantizationParams&, const QuantizationParams&) = default;
};

struct TermImpact {
  TermId term = 0;
  Impact impact = 0;
  friend bool operator==(const TermImpact&, const TermImpact&) = default;
};

/// Sparse document over the 8-bit impact model. Terms strictly increasing,
/// zero impacts are never stored.
struct QuantizedVector {
  std::vector<TermImpact> entries;

  /// Throws std::invalid_argument if an invariant is broken.
  void validate() const;
  friend bool operator==(const QuantizedVector&, const QuantizedVector&) = default;
};

struct TermWeight {
  TermId term = 0;
  QueryWeight weight = 0;
  friend bool operator==(const TermWeight&, const TermWeight&) = default;
};

struct QueryVector {
  std::vector<TermWeight> entries;

  /// Sorts by term, merges duplicates by summing and drops zero weights.
  static QueryVector from_unsorted(std::vector<TermWeight> entries);

  std::uint64_t total_weight() const;
  bool empty() const { return entries.empty(); }
  friend bool operator==(const QueryVector&, const QueryVector&) = default;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> terms);

  /// Returns the existing id or assigns the next one.
  TermId intern(std::string_view term);
  std::optional<TermId> find(std::string_view term) const;
  const std::string& term(TermId id) const { return terms_.at(id); }
  const std::vector<std::string>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.terms_ == b.terms_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, TermId> ids_;
};

struct CorpusManifest {
  std::size_t num_docs = 0;
  std::size_t vocab_size = 0;
  std::vector<std::string> external_ids;
  QuantizationParams quantization;

  friend bool operator==(const CorpusManifest&, const CorpusManifest&) = default;
};

/// One line of a document or query file, before vocabulary resolution.
/// Terms keep the order in which they appear in the record.
struct SparseRecord {
  std::string id;
  std::vector<std::pair<std::string, double>> terms;
};

struct RawEntry {
  TermId term = 0;
  double weight = 0.0;
};
using RawVector = std::vector<RawEntry>;

struct RawCollection {
  CorpusManifest manifest;
  Vocabulary vocab;
  std::vector<RawVector> vectors;
  double max_weight = 0.0;
};

/// The quantized corpus every index and oracle is built from.
struct Corpus {
  CorpusManifest manifest;
  Vocabulary vocab;
  std::vector<QuantizedVector> docs;

  std::size_t num_docs() const { return docs.size(); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses one JSON line {"id": ..., "vector": {term: weight, ...}}.
SparseRecord parse_record(std::string_view line, std::size_t line_number);
std::string format_record(const SparseRecord& record);

/// Resolves term strings to fresh ids in first-seen order. Rejects duplicate
/// ids and negative weights; empty vectors are kept as empty documents.
RawCollection collect_records(std::span<const SparseRecord> records);
RawCollection parse_collection(std::istream& in);

/// round-half-up(raw / scale), clamped to [0, 255]. Throws std::out_of_range
/// when raw exceeds the global maximum the params were derived from.
Impact quantize(double raw_weight, const QuantizationParams& params);

Corpus quantize_collection(const RawCollection& raw);
Corpus load_corpus(const std::string& path);

struct QueryRecord {
  std::string id;
  QueryVector vector;
  /// Terms dropped because they are not in the corpus vocabulary.
  std::size_t oov_terms = 0;
};

/// Real query weights are scaled by `weight_scale` and rounded half-up to
/// integers. Out-of-vocabulary terms are dropped.
QueryRecord resolve_query(const SparseRecord& record, const Vocabulary& vocab,
                          double weight_scale = kDefaultQueryScale);
std::vector<QueryRecord> parse_queries(std::istream& in, const Vocabulary& vocab,
                                       double weight_scale = kDefaultQueryScale);
std::vector<QueryRecord> load_queries(const std::string& path, const Vocabulary& vocab,
                                      double weight_scale = kDefaultQueryScale);

/// Keeps the shortest prefix of terms, ordered by decreasing weight with ties
/// broken by ascending term id, whose cumulative weight reaches
/// beta * total. The result is re-sorted by term id.
QueryVector prune_query(const QueryVector& query, const Ratio& beta);

}  // namespace sbp

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

#include "sbp/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

namespace sbp {

using ordered_json = nlohmann::ordered_json;

QuantizationParams QuantizationParams::from_max_weight(double max_weight) {
  QuantizationParams params;
  params.scale = max_weight > 0.0 ? max_weight / kMaxImpact : 1.0;
  return params;
}

void QuantizedVector::validate() const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].impact == 0) throw std::invalid_argument("QuantizedVector: zero impact stored");
    if (i > 0 && entries[i - 1].term >= entries[i].term) {
      throw std::invalid_argument("QuantizedVector: terms not strictly increasing");
    }
  }
}

QueryVector QueryVector::from_unsorted(std::vector<TermWeight> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const TermWeight& a, const TermWeight& b) { return a.term < b.term; });
  QueryVector q;
  for (const auto& e : entries) {
    if (!q.entries.empty() && q.entries.back().term == e.term) {
      q.entries.back().weight += e.weight;
    } else {
      q.entries.push_back(e);
    }
  }
  std::erase_if(q.entries, [](const TermWeight& e) { return e.weight == 0; });
  return q;
}

std::uint64_t QueryVector::total_weight() const {
  std::uint64_t total = 0;
  for (const auto& e : entries) total += e.weight;
  return total;
}

Vocabulary::Vocabulary(std::vector<std::string> terms) {
  for (auto& t : terms) {
    if (find(t)) throw std::invalid_argument("Vocabulary: duplicate term '" + t + "'");
    intern(t);
  }
}

TermId Vocabulary::intern(std::string_view term) {
  std::string key(term);
  if (auto it = ids_.find(key); it != ids_.end()) return it->second;
  const auto id = static_cast<TermId>(terms_.size());
  ids_.emplace(key, id);
  terms_.push_back(std::move(key));
  return id;
}

std::optional<TermId> Vocabulary::find(std::string_view term) const {
  auto it = ids_.find(std::string(term));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

SparseRecord parse_record(std::string_view line, std::size_t line_number) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(line_number, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(line_number, "record is not a JSON object");
  auto id = j.find("id");
  if (id == j.end() || !id->is_string()) throw ParseError(line_number, "missing string field \"id\"");
  auto vec = j.find("vector");
  if (vec == j.end() || !vec->is_object()) throw ParseError(line_number, "missing object field \"vector\"");

  SparseRecord record;
  record.id = id->get<std::string>();
  record.terms.reserve(vec->size());
  for (auto it = vec->begin(); it != vec->end(); ++it) {
    if (!it.value().is_number()) {
      throw ParseError(line_number, "weight of term '" + it.key() + "' is not a number");
    }
    record.terms.emplace_back(it.key(), it.value().get<double>());
  }
  return record;
}

std::string format_record(const SparseRecord& record) {
  ordered_json vec = ordered_json::object();
  for (const auto& [term, weight] : record.terms) vec[term] = weight;
  ordered_json j;
  j["id"] = record.id;
  j["vector"] = std::move(vec);
  return j.dump();
}

namespace {

template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    fn(line, line_number);
  }
}

RawCollection collect_impl(std::span<const SparseRecord> records, std::span<const std::size_t> lines) {
  RawCollection out;
  std::unordered_set<std::string> seen_ids;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    const std::size_t line = lines.empty() ? i + 1 : lines[i];
    if (!seen_ids.insert(rec.id).second) throw ParseError(line, "duplicate document id '" + rec.id + "'");

    RawVector vec;
    vec.reserve(rec.terms.size());
    for (const auto& [term, weight] : rec.terms) {
      if (!(weight >= 0.0) || !std::isfinite(weight)) {
        throw ParseError(line, "negative or non-finite weight for term '" + term + "'");
      }
      vec.push_back({out.vocab.intern(term), weight});
      out.max_weight = std::max(out.max_weight, weight);
    }
    std::sort(vec.begin(), vec.end(), [](const RawEntry& a, const RawEntry& b) { return a.term < b.term; });
    for (std::size_t k = 1; k < vec.size(); ++k) {
      if (vec[k - 1].term == vec[k].term) throw ParseError(line, "duplicate term in record '" + rec.id + "'");
    }
    out.vectors.push_back(std::move(vec));
    out.manifest.external_ids.push_back(rec.id);
  }
  out.manifest.num_docs = out.vectors.size();
  out.manifest.vocab_size = out.vocab.size();
  out.manifest.quantization = QuantizationParams::from_max_weight(out.max_weight);
  return out;
}

}  // namespace

RawCollection collect_records(std::span<const SparseRecord> records) { return collect_impl(records, {}); }

RawCollection parse_collection(std::istream& in) {
  std::vector<SparseRecord> records;
  std::vector<std::size_t> lines;
  for_each_line(in, [&](const std::string& line, std::size_t n) {
    records.push_back(parse_record(line, n));
    lines.push_back(n);
  });
  return collect_impl(records, lines);
}

Impact quantize(double raw_weight, const QuantizationParams& params) {
  if (!(raw_weight >= 0.0)) throw std::out_of_range("quantize: negative weight");
  const double steps = raw_weight / params.scale;
  // The slack only absorbs the division's representation error at the top level.
  if (steps > kMaxImpact + 1e-9) {
    throw std::out_of_range("quantize: weight exceeds the corpus maximum (stale quantization params)");
  }
  const double rounded = std::floor(steps + 0.5 + 1e-9);
  return static_cast<Impact>(std::clamp(rounded, 0.0, static_cast<double>(kMaxImpact)));
}

Corpus quantize_collection(const RawCollection& raw) {
  Corpus corpus;
  corpus.manifest = raw.manifest;
  corpus.vocab = raw.vocab;
  corpus.docs.reserve(raw.vectors.size());
  for (const auto& vec : raw.vectors) {
    QuantizedVector q;
    q.entries.reserve(vec.size());
    for (const auto& e : vec) {
      if (Impact v = quantize(e.weight, raw.manifest.quantization); v > 0) q.entries.push_back({e.term, v});
    }
    corpus.docs.push_back(std::move(q));
  }
  return corpus;
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return quantize_collection(parse_collection(in));
}

QueryRecord resolve_query(const SparseRecord& record, const Vocabulary& vocab, double weight_scale) {
  QueryRecord out;
  out.id = record.id;
  std::vector<TermWeight> entries;
  for (const auto& [term, weight] : record.terms) {
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
      throw std::invalid_argument("query '" + record.id + "': negative or non-finite weight for '" + term + "'");
    }
    auto id = vocab.find(term);
    if (!id) {
      ++out.oov_terms;
      continue;
    }
    const double scaled = std::floor(weight * weight_scale + 0.5);
    if (scaled > static_cast<double>(UINT32_MAX)) {
      throw std::out_of_range("query '" + record.id + "': scaled weight overflows 32 bits");
    }
    entries.push_back({*id, static_cast<QueryWeight>(scaled)});
  }
  out.vector = QueryVector::from_unsorted(std::move(entries));
  return out;
}

std::vector<QueryRecord> parse_queries(std::istream& in, const Vocabulary& vocab, double weight_scale) {
  std::vector<QueryRecord> out;
  for_each_line(in, [&](const std::string& line, std::size_t n) {
    out.push_back(resolve_query(parse_record(line, n), vocab, weight_scale));
  });
  return out;
}

std::vector<QueryRecord> load_queries(const std::string& path, const Vocabulary& vocab, double weight_scale) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_queries(in, vocab, weight_scale);
}

QueryVector prune_query(const QueryVector& query, const Ratio& beta) {
  if (beta <= Ratio(0) || beta > Ratio(1)) throw std::invalid_argument("beta must lie in (0, 1]");
  if (beta == Ratio(1)) return query;

  std::vector<TermWeight> by_weight = query.entries;
  std::sort(by_weight.begin(), by_weight.end(), [](const TermWeight& a, const TermWeight& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.term < b.term;
  });

  // cumulative >= beta * total  <=>  den * cumulative >= num * total
  using u128 = unsigned __int128;
  const u128 target = static_cast<u128>(beta.num()) * query.total_weight();
  u128 cumulative = 0;
  std::size_t keep = 0;
  while (keep < by_weight.size() && cumulative * static_cast<u128>(beta.den()) < target) {
    cumulative += by_weight[keep++].weight;
  }
  by_weight.resize(keep);
  std::sort(by_weight.begin(), by_weight.end(),
            [](const TermWeight& a, const TermWeight& b) { return a.term < b.term; });
  return QueryVector{std::move(by_weight)};
}

}  // namespace sbp

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

#include "sbp/oracle.hpp"

#include <algorithm>
#include <stdexcept>

#include "sbp/kernels.hpp"

namespace sbp {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

void fnv_u64(std::uint64_t& h, std::uint64_t v) {
  unsigned char raw[8];
  for (int i = 0; i < 8; ++i) raw[i] = static_cast<unsigned char>(v >> (8 * i));
  fnv(h, raw, 8);
}

}  // namespace

std::uint64_t corpus_fingerprint(const CorpusManifest& manifest) {
  std::uint64_t h = kFnvOffset;
  fnv_u64(h, manifest.num_docs);
  fnv_u64(h, manifest.vocab_size);
  for (const auto& id : manifest.external_ids) {
    fnv_u64(h, id.size());
    fnv(h, id.data(), id.size());
  }
  return h;
}

std::uint64_t query_fingerprint(const QueryVector& query) {
  std::uint64_t h = kFnvOffset;
  for (const auto& e : query.entries) {
    fnv_u64(h, e.term);
    fnv_u64(h, e.weight);
  }
  return h;
}

ExactRanking exact_topk(const Corpus& corpus, const QueryVector& query, std::size_t k, Execution exec) {
  if (k == 0) throw std::invalid_argument("exact_topk: k must be positive");
  std::vector<QueryWeight> dense(corpus.vocab.size(), 0);
  for (const auto& e : query.entries) {
    if (e.term < dense.size()) dense[e.term] += e.weight;
  }
  std::vector<Score> scores(corpus.num_docs());
  if (exec == Execution::kParallel) {
    kernels::exhaustive_scores_parallel(corpus, dense, scores);
  } else {
    kernels::exhaustive_scores_serial(corpus, dense, scores);
  }

  std::vector<RankedDoc> all;
  for (DocId d = 0; d < scores.size(); ++d) {
    if (scores[d] > 0) all.push_back({d, scores[d]});
  }
  const auto& ids = corpus.manifest.external_ids;
  const auto order = [&](const RankedDoc& a, const RankedDoc& b) {
    return a.score != b.score ? a.score > b.score : ids[a.doc] < ids[b.doc];
  };
  const std::size_t n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n), all.end(), order);
  all.resize(n);

  ExactRanking ranking;
  ranking.entries = std::move(all);
  ranking.fingerprint = {corpus_fingerprint(corpus.manifest), query_fingerprint(query), k};
  return ranking;
}

ExactRanking exact_topk(const BlockIndex& index, const QueryVector& query, std::size_t k, Execution exec) {
  return exact_topk(reconstruct_corpus(index), query, k, exec);
}

Ratio avg_topk(std::span<const Score> scores, std::size_t k_prime) {
  if (k_prime == 0 || k_prime > scores.size()) {
    throw std::out_of_range("avg_topk: k' = " + std::to_string(k_prime) + " outside [1, " +
                            std::to_string(scores.size()) + "]");
  }
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < k_prime; ++i) sum += static_cast<std::int64_t>(scores[i]);
  return Ratio(sum, static_cast<std::int64_t>(k_prime));
}

Ratio avg_topk(const ExactRanking& ranking, std::size_t k_prime) {
  const auto scores = scores_of(ranking);
  return avg_topk(scores, k_prime);
}

std::vector<Score> scores_of(const ExactRanking& ranking) {
  std::vector<Score> out;
  out.reserve(ranking.entries.size());
  for (const auto& e : ranking.entries) out.push_back(e.score);
  return out;
}

CompetitivenessReport competitiveness_report(std::span<const Score> approx_scores,
                                             std::span<const Score> exact_scores, const Ratio& mu, std::size_t k) {
  CompetitivenessReport report;
  const std::size_t limit = std::min({k, approx_scores.size(), exact_scores.size()});
  std::int64_t approx_sum = 0;
  std::int64_t exact_sum = 0;
  for (std::size_t kp = 1; kp <= limit; ++kp) {
    approx_sum += static_cast<std::int64_t>(approx_scores[kp - 1]);
    exact_sum += static_cast<std::int64_t>(exact_scores[kp - 1]);
    // The 1/k' factors cancel: Avg(k', A) / Avg(k', R) = sum_A / sum_R.
    if (exact_sum > 0) {
      Ratio ratio(approx_sum, exact_sum);
      if (!report.worst_ratio || ratio < *report.worst_ratio) report.worst_ratio = ratio;
    }
    using i128 = __int128;
    const bool holds = static_cast<i128>(approx_sum) * mu.den() >= static_cast<i128>(exact_sum) * mu.num();
    if (!holds && report.ok) {
      report.ok = false;
      report.failing_k_prime = kp;
    }
  }
  return report;
}

CompetitivenessReport competitiveness_report(std::span<const Score> approx_scores,
                                             const RankingFingerprint& approx_fingerprint,
                                             const ExactRanking& exact, const Ratio& mu, std::size_t k) {
  if (!(approx_fingerprint == exact.fingerprint)) {
    throw FingerprintMismatch("competitiveness_report: rankings come from different corpus/query/k");
  }
  return competitiveness_report(approx_scores, scores_of(exact), mu, k);
}

}  // namespace sbp

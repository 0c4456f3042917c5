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
#include <optional>
#include <span>
#include <vector>

#include "sbp/block_index.hpp"
#include "sbp/corpus.hpp"
#include "sbp/fingerprint.hpp"
#include "sbp/ratio.hpp"

namespace sbp {

struct RankedDoc {
  DocId doc = 0;
  Score score = 0;
  friend bool operator==(const RankedDoc&, const RankedDoc&) = default;
};

/// Exhaustive top-k: score desc, then external id asc; zero scores excluded.
struct ExactRanking {
  std::vector<RankedDoc> entries;
  RankingFingerprint fingerprint;
};

/// Scores every document by direct summation. Never touches block structure.
ExactRanking exact_topk(const Corpus& corpus, const QueryVector& query, std::size_t k,
                        Execution exec = Execution::kSerial);
/// Same, over the documents reconstructed from an index's forward postings.
ExactRanking exact_topk(const BlockIndex& index, const QueryVector& query, std::size_t k,
                        Execution exec = Execution::kSerial);

/// Exact mean of the first k_prime scores. Throws std::out_of_range unless
/// 1 <= k_prime <= scores.size().
Ratio avg_topk(std::span<const Score> scores, std::size_t k_prime);
Ratio avg_topk(const ExactRanking& ranking, std::size_t k_prime);

struct CompetitivenessReport {
  bool ok = true;
  /// min over k' of Avg(k', approx) / Avg(k', exact); empty if nothing compared.
  std::optional<Ratio> worst_ratio;
  std::optional<std::size_t> failing_k_prime;
};

class FingerprintMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Checks Avg(k', approx) >= mu * Avg(k', exact) for every
/// k' <= min(k, |approx|, |exact|), in exact arithmetic.
CompetitivenessReport competitiveness_report(std::span<const Score> approx_scores,
                                             std::span<const Score> exact_scores, const Ratio& mu, std::size_t k);
/// As above, after verifying that both fingerprints agree.
CompetitivenessReport competitiveness_report(std::span<const Score> approx_scores,
                                             const RankingFingerprint& approx_fingerprint,
                                             const ExactRanking& exact, const Ratio& mu, std::size_t k);

std::vector<Score> scores_of(const ExactRanking& ranking);

}  // namespace sbp

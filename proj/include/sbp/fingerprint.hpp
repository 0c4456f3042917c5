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

#include "sbp/corpus.hpp"

namespace sbp {

/// Identifies the (corpus, query, k) a ranking was computed for, so that
/// rankings from different inputs are never compared.
struct RankingFingerprint {
  std::uint64_t corpus = 0;
  std::uint64_t query = 0;
  std::size_t k = 0;
  friend bool operator==(const RankingFingerprint&, const RankingFingerprint&) = default;
};

/// FNV-1a over document count, vocabulary size and external ids.
std::uint64_t corpus_fingerprint(const CorpusManifest& manifest);
/// FNV-1a over the (term, weight) entries.
std::uint64_t query_fingerprint(const QueryVector& query);

}  // namespace sbp

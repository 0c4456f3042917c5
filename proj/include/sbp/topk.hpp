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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sbp/corpus.hpp"

namespace sbp {

/// Min-heap of the k best (score, tie rank) pairs seen so far.
///
/// Entries are totally ordered: higher score first, then lower tie rank
/// (ascending external id). theta is the k-th best score, or 0 until the heap
/// holds k entries. Zero scores are never admitted.
class TopKAccumulator {
 public:
  struct Entry {
    Score score = 0;
    std::uint32_t tie_rank = 0;
    std::uint32_t position = 0;
  };

  explicit TopKAccumulator(std::size_t k) : k_(k) {
    if (k == 0) throw std::invalid_argument("k must be positive");
    heap_.reserve(k);
  }

  std::size_t k() const { return k_; }
  std::size_t size() const { return heap_.size(); }
  bool full() const { return heap_.size() == k_; }
  Score theta() const { return full() ? heap_.front().score : 0; }
  /// Tie rank of the current k-th entry; only meaningful when full().
  std::uint32_t worst_rank() const { return full() ? heap_.front().tie_rank : UINT32_MAX; }

  bool would_admit(Score score, std::uint32_t tie_rank) const {
    if (score == 0) return false;
    if (!full()) return true;
    const Entry& w = heap_.front();
    return score > w.score || (score == w.score && tie_rank < w.tie_rank);
  }

  bool offer(Score score, std::uint32_t tie_rank, std::uint32_t position) {
    if (!would_admit(score, tie_rank)) return false;
    if (full()) {
      std::pop_heap(heap_.begin(), heap_.end(), worse_on_top);
      heap_.back() = {score, tie_rank, position};
    } else {
      heap_.push_back({score, tie_rank, position});
    }
    std::push_heap(heap_.begin(), heap_.end(), worse_on_top);
    return true;
  }

  /// Best first.
  std::vector<Entry> sorted() const {
    std::vector<Entry> out = heap_;
    std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return better(a, b); });
    return out;
  }

  void clear() { heap_.clear(); }

 private:
  static bool better(const Entry& a, const Entry& b) {
    return a.score != b.score ? a.score > b.score : a.tie_rank < b.tie_rank;
  }
  // std heap keeps the "largest" on top; we want the worst entry there.
  static bool worse_on_top(const Entry& a, const Entry& b) { return better(a, b); }

  std::size_t k_;
  std::vector<Entry> heap_;
};

}  // namespace sbp

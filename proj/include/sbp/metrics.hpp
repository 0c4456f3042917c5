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
#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace sbp {

/// query id -> (doc id -> relevance grade). Grades >= 1 count as relevant
/// for the binary metrics.
using QueryQrels = std::map<std::string, int>;
using Qrels = std::map<std::string, QueryQrels>;

/// Tab-separated "query_id<TAB>doc_id<TAB>grade" lines. Four-column TREC
/// qrels ("qid 0 docid grade", whitespace separated) are accepted too.
Qrels parse_qrels(std::istream& in);
Qrels load_qrels(const std::string& path);
void write_qrels(std::ostream& out, const Qrels& qrels);

/// Rankings are lists of external doc ids, best first.
double mrr_at_10(std::span<const std::string> ranking, const QueryQrels& qrels);

struct RecallValue {
  double value = 0.0;
  /// Set when the query has no relevant document; value is then 1.
  bool no_relevant = false;
};

RecallValue recall_at_k(std::span<const std::string> ranking, const QueryQrels& qrels, std::size_t k);

/// Gain 2^grade - 1, discount log2(rank + 1), normalized by the ideal DCG@10.
double ndcg_at_10(std::span<const std::string> ranking, const QueryQrels& qrels);

/// achieved >= budget * safe. Values above 1 are read as percentages.
bool recall_budget_eval(double safe_recall, double achieved_recall, double budget);
/// The minimum recall that meets the budget, on the scale of safe_recall.
double recall_budget_threshold(double safe_recall, double budget);

}  // namespace sbp

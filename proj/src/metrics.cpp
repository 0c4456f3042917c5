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

#include "sbp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace sbp {

Qrels parse_qrels(std::istream& in) {
  Qrels qrels;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> fields;
    if (line.find('\t') != std::string::npos) {
      std::stringstream ss(line);
      std::string f;
      while (std::getline(ss, f, '\t')) fields.push_back(f);
    } else {
      std::stringstream ss(line);
      std::string f;
      while (ss >> f) fields.push_back(f);
    }
    if (fields.size() == 4) fields.erase(fields.begin() + 1);
    if (fields.size() != 3) {
      throw std::runtime_error("qrels line " + std::to_string(line_number) + ": expected query_id, doc_id, grade");
    }
    int grade = 0;
    try {
      std::size_t used = 0;
      grade = std::stoi(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::runtime_error("qrels line " + std::to_string(line_number) + ": grade is not an integer");
    }
    if (grade < 0) throw std::runtime_error("qrels line " + std::to_string(line_number) + ": negative grade");
    qrels[fields[0]][fields[1]] = grade;
  }
  return qrels;
}

Qrels load_qrels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_qrels(in);
}

void write_qrels(std::ostream& out, const Qrels& qrels) {
  for (const auto& [qid, docs] : qrels) {
    for (const auto& [doc, grade] : docs) out << qid << '\t' << doc << '\t' << grade << '\n';
  }
}

namespace {

int grade_of(const QueryQrels& qrels, const std::string& doc) {
  auto it = qrels.find(doc);
  return it == qrels.end() ? 0 : it->second;
}

}  // namespace

double mrr_at_10(std::span<const std::string> ranking, const QueryQrels& qrels) {
  const std::size_t depth = std::min<std::size_t>(10, ranking.size());
  for (std::size_t i = 0; i < depth; ++i) {
    if (grade_of(qrels, ranking[i]) >= 1) return 1.0 / static_cast<double>(i + 1);
  }
  return 0.0;
}

RecallValue recall_at_k(std::span<const std::string> ranking, const QueryQrels& qrels, std::size_t k) {
  std::size_t relevant = 0;
  for (const auto& [doc, grade] : qrels) relevant += grade >= 1;
  if (relevant == 0) return {1.0, true};
  std::unordered_set<std::string> seen;
  std::size_t found = 0;
  const std::size_t depth = std::min(k, ranking.size());
  for (std::size_t i = 0; i < depth; ++i) {
    if (grade_of(qrels, ranking[i]) >= 1 && seen.insert(ranking[i]).second) ++found;
  }
  return {static_cast<double>(found) / static_cast<double>(relevant), false};
}

double ndcg_at_10(std::span<const std::string> ranking, const QueryQrels& qrels) {
  const auto gain = [](int grade) { return std::exp2(static_cast<double>(grade)) - 1.0; };
  const auto discount = [](std::size_t rank) { return std::log2(static_cast<double>(rank) + 1.0); };

  double dcg = 0.0;
  const std::size_t depth = std::min<std::size_t>(10, ranking.size());
  for (std::size_t i = 0; i < depth; ++i) dcg += gain(grade_of(qrels, ranking[i])) / discount(i + 1);

  std::vector<int> grades;
  for (const auto& [doc, grade] : qrels) {
    if (grade > 0) grades.push_back(grade);
  }
  std::sort(grades.begin(), grades.end(), std::greater<>());
  double ideal = 0.0;
  for (std::size_t i = 0; i < std::min<std::size_t>(10, grades.size()); ++i) ideal += gain(grades[i]) / discount(i + 1);
  return ideal > 0.0 ? dcg / ideal : 0.0;
}

double recall_budget_threshold(double safe_recall, double budget) {
  if (!(budget > 0.0 && budget <= 1.0)) throw std::invalid_argument("recall budget must lie in (0, 1]");
  return budget * safe_recall;
}

bool recall_budget_eval(double safe_recall, double achieved_recall, double budget) {
  if (!(budget > 0.0 && budget <= 1.0)) throw std::invalid_argument("recall budget must lie in (0, 1]");
  if (safe_recall > 1.0 || achieved_recall > 1.0) {
    safe_recall /= 100.0;
    achieved_recall /= 100.0;
  }
  return achieved_recall >= budget * safe_recall;
}

}  // namespace sbp

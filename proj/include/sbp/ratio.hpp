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

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace sbp {

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
///
/// The pruning parameters (mu, eta, beta) and the competitiveness ratios are
/// held as rationals so that every threshold comparison is decided in integer
/// arithmetic. Comparisons cross-multiply in 128 bits.
class Ratio {
 public:
  constexpr Ratio() = default;
  Ratio(std::int64_t num, std::int64_t den = 1);

  /// Nearest rational with denominator 10^9, reduced. Decimal literals with
  /// at most nine fractional digits convert exactly (0.4 -> 2/5).
  static Ratio from_double(double value);

  /// Accepts "3", "0.75", ".5" or "3/4".
  static Ratio parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  friend bool operator==(const Ratio& a, const Ratio& b) = default;
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// r * lhs <= rhs, exactly.
inline bool scaled_le(const Ratio& r, std::uint64_t lhs, std::uint64_t rhs) {
  using u128 = unsigned __int128;
  return static_cast<u128>(r.num()) * lhs <= static_cast<u128>(r.den()) * rhs;
}

/// r * lhs < rhs, exactly.
inline bool scaled_lt(const Ratio& r, std::uint64_t lhs, std::uint64_t rhs) {
  using u128 = unsigned __int128;
  return static_cast<u128>(r.num()) * lhs < static_cast<u128>(r.den()) * rhs;
}

}  // namespace sbp

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

#include "sbp/ratio.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sbp {

Ratio::Ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("Ratio: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

Ratio Ratio::from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("Ratio: non-finite value");
  constexpr std::int64_t kDen = 1'000'000'000;
  return Ratio(static_cast<std::int64_t>(std::llround(value * static_cast<double>(kDen))), kDen);
}

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("Ratio: cannot parse '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Ratio Ratio::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("Ratio: empty string");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Ratio(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
  }

  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Ratio(parse_int(text, text));

  std::string_view whole = text.substr(0, dot);
  std::string_view frac = text.substr(dot + 1);
  if (frac.size() > 12) throw std::invalid_argument("Ratio: too many fractional digits in '" + std::string(text) + "'");
  bool negative = !whole.empty() && whole.front() == '-';
  if (negative) whole.remove_prefix(1);
  std::int64_t int_part = whole.empty() ? 0 : parse_int(whole, text);
  std::int64_t frac_part = frac.empty() ? 0 : parse_int(frac, text);
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  std::int64_t num = int_part * den + frac_part;
  return Ratio(negative ? -num : num, den);
}

std::string Ratio::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
  const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace sbp

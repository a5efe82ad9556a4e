// Copyright 2026 The SimulStream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "simulstream/rational.hpp"

#include <charconv>

#include "simulstream/error.hpp"

namespace simulstream {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    fail(ErrorCode::kParse, "not a rational number: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) fail(ErrorCode::kParse, "empty rational literal");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = parse_int(text.substr(0, slash), whole);
    const auto den = parse_int(text.substr(slash + 1), whole);
    if (den == 0) fail(ErrorCode::kParse, "zero denominator in '" + std::string(whole) + "'");
    return Rational(num, den);
  }

  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(parse_int(text, whole));

  bool negative = false;
  std::string_view int_part = text.substr(0, dot);
  if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
    negative = int_part.front() == '-';
    int_part.remove_prefix(1);
  }
  std::string_view frac_part = text.substr(dot + 1);
  if ((int_part.empty() && frac_part.empty()) || frac_part.size() > 12 ||
      frac_part.find_first_not_of("0123456789") != std::string_view::npos) {
    fail(ErrorCode::kParse, "not a rational number: '" + std::string(whole) + "'");
  }
  std::int64_t scale = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
  const std::int64_t ip = int_part.empty() ? 0 : parse_int(int_part, whole);
  const std::int64_t fp = frac_part.empty() ? 0 : parse_int(frac_part, whole);
  if (ip < 0) fail(ErrorCode::kParse, "not a rational number: '" + std::string(whole) + "'");
  Rational value(ip * scale + fp, scale);
  return negative ? -value : value;
}

std::int64_t floor_of(const Rational& r) {
  const auto n = r.numerator();
  const auto d = r.denominator();  // boost keeps d > 0
  auto q = n / d;
  if ((n % d != 0) && (n < 0)) --q;
  return q;
}

std::int64_t ceil_of(const Rational& r) { return -floor_of(-r); }

std::int64_t round_half_away(const Rational& r) {
  if (r < 0) return -round_half_away(-r);
  return floor_of(r + Rational(1, 2));
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace simulstream

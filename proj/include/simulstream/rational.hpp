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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

// Boost 1.74's mixed rational/integer comparison templates recurse forever
// under C++20 rewritten comparison candidates. Exact-match overloads for the
// integer types in use take precedence over them.
namespace boost {

#define SIMULSTREAM_RATIONAL_CMP(OP, INT)                                        \
  inline bool operator OP(const rational<std::int64_t>& a, INT b) {              \
    return a OP rational<std::int64_t>(b);                                       \
  }                                                                              \
  inline bool operator OP(INT a, const rational<std::int64_t>& b) {              \
    return rational<std::int64_t>(a) OP b;                                       \
  }
#define SIMULSTREAM_RATIONAL_CMP_ALL(INT)                                        \
  SIMULSTREAM_RATIONAL_CMP(==, INT)                                              \
  SIMULSTREAM_RATIONAL_CMP(!=, INT)                                              \
  SIMULSTREAM_RATIONAL_CMP(<, INT)                                               \
  SIMULSTREAM_RATIONAL_CMP(>, INT)                                               \
  SIMULSTREAM_RATIONAL_CMP(<=, INT)                                              \
  SIMULSTREAM_RATIONAL_CMP(>=, INT)

SIMULSTREAM_RATIONAL_CMP_ALL(int)
SIMULSTREAM_RATIONAL_CMP_ALL(long)
SIMULSTREAM_RATIONAL_CMP_ALL(long long)

#undef SIMULSTREAM_RATIONAL_CMP_ALL
#undef SIMULSTREAM_RATIONAL_CMP

}  // namespace boost

namespace simulstream {

// Exact rate arithmetic. Compensation rates, length ratios and speed factors
// are kept rational so floor(c*t) is bit-reproducible everywhere.
using Rational = boost::rational<std::int64_t>;

// Accepts "3", "-0.25", "1.25", "5/4", "-2/7".
Rational parse_rational(std::string_view text);

std::int64_t floor_of(const Rational& r);
std::int64_t ceil_of(const Rational& r);

// Round half away from zero: round(2.5) = 3, round(-2.5) = -3.
std::int64_t round_half_away(const Rational& r);

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) /
         static_cast<double>(r.denominator());
}

// "2/7", "0", "-1/4", "3".
std::string to_string(const Rational& r);

}  // namespace simulstream

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

#include "simulstream/policy.hpp"

#include <algorithm>

#include "simulstream/error.hpp"

namespace simulstream {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::kDomain, what);
}

}  // namespace

void PolicySpec::validate() const {
  require(k >= 1, "policy k must be >= 1");
  if (kind == PolicyKind::kWaitK) {
    require(c == 0, "wait-k policy carries no compensation rate");
  } else {
    require(c > -1, "compensation rate must be > -1");
  }
}

std::string ActionSchedule::to_string() const {
  std::string out;
  out.reserve(actions.size());
  for (auto a : actions) out.push_back(static_cast<char>(a));
  return out;
}

ActionSchedule ActionSchedule::parse(std::string_view text, int k) {
  ActionSchedule s;
  s.k = k;
  for (char ch : text) {
    if (ch == 'R') {
      s.actions.push_back(Action::kRead);
      ++s.src_len;
    } else if (ch == 'W') {
      s.actions.push_back(Action::kWrite);
      ++s.tgt_len;
    } else if (ch != ' ') {
      fail(ErrorCode::kParse, std::string("bad action '") + ch + "'");
    }
  }
  return s;
}

int wait_k_read_position(int t, int k, int src_len) {
  require(t >= 1 && k >= 1 && src_len >= 1,
          "wait-k read position needs t >= 1, k >= 1, src_len >= 1");
  return std::min(k + t - 1, src_len);
}

int sat_read_position(int t, int k, const Rational& c, int src_len) {
  require(t >= 1 && k >= 1 && src_len >= 1,
          "SAT read position needs t >= 1, k >= 1, src_len >= 1");
  require(c > -1, "compensation rate must be > -1");
  const std::int64_t raw = k + t - 1 - floor_of(c * Rational(t));
  const std::int64_t clamped = std::min<std::int64_t>(raw, src_len);
  return static_cast<int>(std::max<std::int64_t>(clamped, std::min(k, src_len)));
}

Rational compensation_rate(int src_len, int tgt_len, int k) {
  require(k >= 1, "k must be >= 1");
  require(src_len > k, "compensation rate undefined for src_len <= k");
  require(tgt_len >= 1, "tgt_len must be >= 1");
  return Rational(tgt_len - k, src_len - k) - 1;
}

namespace {

ActionSchedule from_read_positions(const std::vector<int>& g, int k, int src_len) {
  ActionSchedule s;
  s.k = k;
  s.src_len = src_len;
  s.tgt_len = static_cast<int>(g.size());
  int read = 0;
  for (int need : g) {
    for (; read < need; ++read) s.actions.push_back(Action::kRead);
    s.actions.push_back(Action::kWrite);
  }
  for (; read < src_len; ++read) s.actions.push_back(Action::kRead);
  return s;
}

}  // namespace

ActionSchedule derive_action_schedule(int k, int src_len, int tgt_len) {
  require(k >= 1 && src_len >= 1 && tgt_len >= 1,
          "schedule needs k, src_len, tgt_len >= 1");
  require(src_len > k, "SAT schedule undefined for src_len <= k; fall back to wait-k");

  const int tail = std::min(k, tgt_len);
  const int middle_writes = tgt_len - tail;
  const int middle_reads = src_len - k;

  // Reads before write t follow k - 1 + ceil(R*t/M), which is
  // k + t - 1 - floor(c'*t) with c' = 1 - R/M: the floor(c*t) spacing of the
  // SAT policy at the reads-per-write rate that lands the last read right
  // before write M + 1. Everything after write M is the tail.
  std::vector<int> g;
  g.reserve(static_cast<std::size_t>(tgt_len));
  for (int t = 1; t <= middle_writes; ++t) {
    const auto reads = ceil_of(Rational(middle_reads) * t / middle_writes);
    g.push_back(static_cast<int>(k - 1 + reads));
  }
  for (int t = middle_writes + 1; t <= tgt_len; ++t) g.push_back(src_len);
  return from_read_positions(g, k, src_len);
}

ActionSchedule wait_k_schedule(int k, int src_len, int tgt_len) {
  require(k >= 1 && src_len >= 1 && tgt_len >= 0,
          "schedule needs k, src_len >= 1 and tgt_len >= 0");
  std::vector<int> g;
  for (int t = 1; t <= tgt_len; ++t) g.push_back(wait_k_read_position(t, k, src_len));
  return from_read_positions(g, k, src_len);
}

std::vector<int> read_positions(const ActionSchedule& s) {
  std::vector<int> g;
  int reads = 0;
  for (auto a : s.actions) {
    if (a == Action::kRead) {
      ++reads;
    } else {
      g.push_back(reads);
    }
  }
  return g;
}

int tail_length(const ActionSchedule& s) {
  int n = 0;
  for (auto it = s.actions.rbegin(); it != s.actions.rend() && *it == Action::kWrite; ++it) ++n;
  return n;
}

std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::kManyToOne: return "many-to-1";
    case StepKind::kOneToOne: return "1-to-1";
    case StepKind::kOneToMany: return "1-to-many";
  }
  return "?";
}

std::vector<StepKind> classify_steps(const ActionSchedule& s) {
  std::vector<StepKind> out;
  int reads_total = 0;
  int since_last = 0;
  bool first = true;
  for (auto a : s.actions) {
    if (a == Action::kRead) {
      ++reads_total;
      ++since_last;
      continue;
    }
    int count = since_last;
    if (first) {
      const int initial = std::min(s.k, reads_total);
      count = initial > 0 ? reads_total - initial + 1 : 0;
      first = false;
    }
    out.push_back(count >= 2 ? StepKind::kManyToOne
                  : count == 1 ? StepKind::kOneToOne
                               : StepKind::kOneToMany);
    since_last = 0;
  }
  return out;
}

}  // namespace simulstream

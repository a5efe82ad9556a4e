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

#include <string>
#include <string_view>
#include <vector>

#include "simulstream/rational.hpp"

namespace simulstream {

enum class PolicyKind { kWaitK, kSatK };

struct PolicySpec {
  PolicyKind kind = PolicyKind::kWaitK;
  int k = 1;
  Rational c{0};  // compensation rate; always 0 for wait-k

  void validate() const;
};

enum class Action : char { kRead = 'R', kWrite = 'W' };

struct ActionSchedule {
  std::vector<Action> actions;
  int k = 1;
  int src_len = 0;
  int tgt_len = 0;

  bool operator==(const ActionSchedule&) const = default;

  std::string to_string() const;  // "RRWRW..."
  static ActionSchedule parse(std::string_view actions, int k);
};

// g(t) of wait-k: min(k + t - 1, src_len). t is the 1-based decode step.
int wait_k_read_position(int t, int k, int src_len);

// g(t) of SAT: min(k + t - 1 - floor(c*t), src_len), never below
// min(k, src_len). Equals wait_k_read_position when c == 0.
int sat_read_position(int t, int k, const Rational& c, int src_len);

// (tgt_len - k) / (src_len - k) - 1. Throws kDomain when src_len <= k.
Rational compensation_rate(int src_len, int tgt_len, int k);

// SAT training schedule for one sentence: initial wait of k reads, a tail of
// exactly min(k, tgt_len) writes after the last read, and the surplus writes
// (or reads) spread evenly over the middle steps. Throws kDomain when
// src_len <= k; use wait_k_schedule then.
ActionSchedule derive_action_schedule(int k, int src_len, int tgt_len);

// Schedule realised by g_wait-k for a sentence of the given lengths.
ActionSchedule wait_k_schedule(int k, int src_len, int tgt_len);

// Number of READs preceding each WRITE, i.e. g(1..tgt_len).
std::vector<int> read_positions(const ActionSchedule& s);

// Trailing WRITEs after the final READ.
int tail_length(const ActionSchedule& s);

enum class StepKind { kManyToOne, kOneToOne, kOneToMany };

std::string_view to_string(StepKind kind);

// Labels each WRITE by the READs since the previous WRITE. The initial wait
// counts as a single read for the first WRITE.
std::vector<StepKind> classify_steps(const ActionSchedule& s);

}  // namespace simulstream

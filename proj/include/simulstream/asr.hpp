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
#include <span>
#include <string>
#include <vector>

#include "simulstream/core.hpp"

namespace simulstream {

struct AsrEvent {
  TimeMs t_ms = 0;
  int sentence_id = 0;
  std::vector<Token> hypothesis;  // full hypothesis from sentence start
  bool is_final = false;

  bool operator==(const AsrEvent&) const = default;
};

struct RevisionModel {
  double revise_prob = 0.0;   // chance a non-final event garbles its last word
  TimeMs latency_ms = 1000;   // recognizer delay added to every event
  TimeMs emit_period_ms = 250;
  std::uint64_t seed = 0;

  void validate() const;
};

// Marker appended to a garbled last word.
inline constexpr char kCorruptionSuffix = '~';

// Periodic growing hypotheses per sentence. A non-final event at audio time
// n*emit_period_ms (delivered latency_ms later) holds every non-pause token
// that has finished by then; the final event is delivered latency_ms after
// the sentence's last token ends and carries the full sentence including
// punctuation. Deterministic for a given seed.
std::vector<AsrEvent> generate_asr_events(const TimedTranscript& t,
                                          const RevisionModel& m);

// Drops the unstable last word of a non-final hypothesis.
std::vector<Token> stabilize(const AsrEvent& e);

struct CommittedDelta {
  std::vector<Token> new_tokens;
  bool revised = false;

  bool operator==(const CommittedDelta&) const = default;
};

CommittedDelta committed_delta(std::span<const Token> prev_stable,
                               std::span<const Token> cur_stable);

std::string join_tokens(std::span<const Token> tokens);

// JSONL with t_ms, sentence_id, is_final, hypothesis (array of strings).
std::string asr_events_to_jsonl(const std::vector<AsrEvent>& events);

}  // namespace simulstream

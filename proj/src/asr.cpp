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

#include "simulstream/asr.hpp"

#include <algorithm>
#include <random>

#include "json.hpp"

#include "simulstream/error.hpp"

namespace simulstream {

void RevisionModel::validate() const {
  if (!(revise_prob >= 0.0 && revise_prob <= 1.0)) {
    fail(ErrorCode::kValidation, "revise_prob must lie in [0, 1]");
  }
  if (latency_ms < 0) fail(ErrorCode::kValidation, "ASR latency_ms must be >= 0");
  if (emit_period_ms < 1) fail(ErrorCode::kValidation, "ASR emit_period_ms must be >= 1");
}

namespace {

// Bernoulli draw from the raw engine output; std distributions are not
// reproducible across standard library implementations.
bool draw(std::mt19937_64& rng, double p) {
  const auto bits = rng() >> 11;
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return static_cast<double>(bits) * 0x1.0p-53 < p;
}

}  // namespace

std::vector<AsrEvent> generate_asr_events(const TimedTranscript& t,
                                          const RevisionModel& m) {
  m.validate();
  std::mt19937_64 rng(m.seed);
  std::vector<AsrEvent> events;
  for (auto sentence : t.sentences()) {
    const int sid = sentence.front().sentence_id;
    const TimeMs begin = sentence.front().start_ms;
    const TimeMs end = sentence.back().end_ms;
    TimeMs tick = (begin / m.emit_period_ms + 1) * m.emit_period_ms;
    for (; tick < end; tick += m.emit_period_ms) {
      AsrEvent e{tick + m.latency_ms, sid, {}, false};
      for (const auto& tt : sentence) {
        if (tt.token.is_pause || tt.end_ms > tick) continue;
        e.hypothesis.push_back(tt.token);
      }
      if (e.hypothesis.empty()) continue;
      if (draw(rng, m.revise_prob)) e.hypothesis.back().text += kCorruptionSuffix;
      events.push_back(std::move(e));
    }
    AsrEvent final_event{end + m.latency_ms, sid, {}, true};
    for (const auto& tt : sentence) final_event.hypothesis.push_back(tt.token);
    events.push_back(std::move(final_event));
  }
  return events;
}

std::vector<Token> stabilize(const AsrEvent& e) {
  std::vector<Token> out = e.hypothesis;
  if (!e.is_final && !out.empty()) out.pop_back();
  return out;
}

CommittedDelta committed_delta(std::span<const Token> prev_stable,
                               std::span<const Token> cur_stable) {
  const auto [p, c] = std::mismatch(prev_stable.begin(), prev_stable.end(),
                                    cur_stable.begin(), cur_stable.end());
  CommittedDelta out;
  out.revised = p != prev_stable.end();
  out.new_tokens.assign(c, cur_stable.end());
  return out;
}

std::string join_tokens(std::span<const Token> tokens) {
  std::string out;
  for (const auto& tok : tokens) {
    if (!out.empty()) out += ' ';
    out += tok.text;
  }
  return out;
}

std::string asr_events_to_jsonl(const std::vector<AsrEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    nlohmann::ordered_json j;
    j["t_ms"] = e.t_ms;
    j["sentence_id"] = e.sentence_id;
    j["is_final"] = e.is_final;
    auto hyp = nlohmann::ordered_json::array();
    for (const auto& tok : e.hypothesis) hyp.push_back(tok.text);
    j["hypothesis"] = std::move(hyp);
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace simulstream

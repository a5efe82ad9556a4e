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

#include "simulstream/core.hpp"

#include <array>
#include <unordered_set>

#include "simulstream/error.hpp"

namespace simulstream {

PunctuationSet::PunctuationSet()
    : marks_{".", ",", "?", "!", "。", "，", "？", "！"} {}

PunctuationSet::PunctuationSet(std::vector<std::string> marks)
    : marks_(marks.begin(), marks.end()) {}

const PunctuationSet& PunctuationSet::standard() {
  static const PunctuationSet kStandard;
  return kStandard;
}

bool PunctuationSet::contains(std::string_view text) const {
  return marks_.find(text) != marks_.end();
}

Token PunctuationSet::make_token(std::string text) const {
  const bool pause = contains(text);
  return Token{std::move(text), pause};
}

std::vector<std::span<const TimedToken>> TimedTranscript::sentences() const {
  std::vector<std::span<const TimedToken>> out;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= tokens.size(); ++i) {
    if (i == tokens.size() || tokens[i].sentence_id != tokens[begin].sentence_id) {
      out.emplace_back(tokens.data() + begin, i - begin);
      begin = i;
    }
  }
  return out;
}

TimeMs spoken_end_ms(std::span<const TimedToken> sentence) {
  for (auto it = sentence.rbegin(); it != sentence.rend(); ++it) {
    if (!it->token.is_pause) return it->end_ms;
  }
  return sentence.empty() ? 0 : sentence.back().end_ms;
}

std::vector<Violation> validate_transcript(const TimedTranscript& t,
                                           const PunctuationSet& punctuation) {
  std::vector<Violation> out;
  auto add = [&](std::size_t i, ViolationKind kind, std::string msg) {
    out.push_back({i, kind, std::move(msg)});
  };
  if (t.tokens.empty()) {
    add(0, ViolationKind::kEmptyTranscript, "transcript has no tokens");
    return out;
  }
  for (std::size_t i = 0; i < t.tokens.size(); ++i) {
    const auto& tt = t.tokens[i];
    if (tt.token.text.empty()) {
      add(i, ViolationKind::kEmptyText, "empty token text");
    } else if (tt.token.text.find_first_of(" \t\r\n") != std::string::npos) {
      add(i, ViolationKind::kWhitespaceInText, "token text contains whitespace");
    }
    if (tt.token.is_pause != punctuation.contains(tt.token.text)) {
      add(i, ViolationKind::kPauseFlagMismatch,
          "is_pause disagrees with the punctuation set for '" + tt.token.text + "'");
    }
    if (tt.start_ms >= tt.end_ms) {
      add(i, ViolationKind::kNonPositiveDuration,
          "start_ms " + std::to_string(tt.start_ms) + " >= end_ms " +
              std::to_string(tt.end_ms));
    }
    if (i > 0) {
      const auto& prev = t.tokens[i - 1];
      if (tt.start_ms < prev.start_ms) {
        add(i, ViolationKind::kUnsorted, "tokens not sorted by start_ms");
      } else if (tt.start_ms < prev.end_ms) {
        add(i, ViolationKind::kOverlap, "token overlaps its predecessor");
      }
      if (tt.sentence_id < prev.sentence_id) {
        add(i, ViolationKind::kSentenceOrder, "sentence_id decreases");
      }
    }
    const bool last_of_sentence =
        i + 1 == t.tokens.size() || t.tokens[i + 1].sentence_id != tt.sentence_id;
    if (last_of_sentence && !tt.token.is_pause) {
      add(i, ViolationKind::kMissingPause,
          "sentence " + std::to_string(tt.sentence_id) +
              " does not end with a pause token");
    }
  }
  return out;
}

TimedTranscript scale_timing(const TimedTranscript& t, std::int64_t num,
                             std::int64_t den) {
  if (num <= 0 || den <= 0) fail(ErrorCode::kInvalidArgument, "timing factor must be positive");
  auto scale = [&](TimeMs v) { return (v * num + den / 2) / den; };
  TimedTranscript out = t;
  for (auto& tt : out.tokens) {
    tt.start_ms = scale(tt.start_ms);
    tt.end_ms = scale(tt.end_ms);
  }
  return out;
}

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 8> kKindNames{{
    {EventKind::kAsrEmitted, "AsrEmitted"},
    {EventKind::kSourceTokenCommitted, "SourceTokenCommitted"},
    {EventKind::kTargetTokenDecoded, "TargetTokenDecoded"},
    {EventKind::kTtsEnqueued, "TtsEnqueued"},
    {EventKind::kPlaybackStarted, "PlaybackStarted"},
    {EventKind::kPlaybackFinished, "PlaybackFinished"},
    {EventKind::kPauseInserted, "PauseInserted"},
    {EventKind::kSentenceBoundary, "SentenceBoundary"},
}};

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

std::vector<const LogEntry*> SimulationLog::of_kind(EventKind kind) const {
  std::vector<const LogEntry*> out;
  for (const auto& e : entries) {
    if (e.kind == kind) out.push_back(&e);
  }
  return out;
}

std::vector<LogViolation> validate_log(const SimulationLog& log) {
  std::vector<LogViolation> out;
  std::unordered_set<int> committed;
  for (std::size_t i = 0; i < log.entries.size(); ++i) {
    const auto& e = log.entries[i];
    if (i > 0 && e.t_ms < log.entries[i - 1].t_ms) {
      out.push_back({i, "timestamp decreases from " +
                            std::to_string(log.entries[i - 1].t_ms) + " to " +
                            std::to_string(e.t_ms)});
    }
    if (e.kind == EventKind::kSourceTokenCommitted) {
      committed.insert(e.sentence);
    } else if (e.kind == EventKind::kTargetTokenDecoded &&
               !committed.contains(e.sentence)) {
      out.push_back({i, "target token decoded for sentence " +
                            std::to_string(e.sentence) +
                            " before any source token was committed"});
    }
  }
  return out;
}

}  // namespace simulstream

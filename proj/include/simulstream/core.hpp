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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace simulstream {

// All simulation time is integer milliseconds on one global timeline from 0.
using TimeMs = std::int64_t;

struct Token {
  std::string text;
  bool is_pause = false;  // punctuation that induces a natural speech pause

  bool operator==(const Token&) const = default;
};

// The configured set of pause-inducing punctuation marks.
class PunctuationSet {
 public:
  // Defaults to . , ? ! and their full-width forms.
  PunctuationSet();
  explicit PunctuationSet(std::vector<std::string> marks);

  static const PunctuationSet& standard();

  bool contains(std::string_view text) const;
  Token make_token(std::string text) const;

 private:
  std::set<std::string, std::less<>> marks_;
};

struct TimedToken {
  Token token;
  TimeMs start_ms = 0;
  TimeMs end_ms = 0;
  int sentence_id = 0;

  bool operator==(const TimedToken&) const = default;
};

struct TimedTranscript {
  std::string talk_id;
  std::vector<TimedToken> tokens;

  bool operator==(const TimedTranscript&) const = default;

  // Consecutive runs of equal sentence_id, in order.
  std::vector<std::span<const TimedToken>> sentences() const;
};

// End of the last non-pause token of a sentence (falls back to the last
// token when the sentence is punctuation only).
TimeMs spoken_end_ms(std::span<const TimedToken> sentence);

enum class ViolationKind {
  kEmptyText,
  kWhitespaceInText,
  kPauseFlagMismatch,
  kNonPositiveDuration,
  kUnsorted,
  kOverlap,
  kSentenceOrder,
  kMissingPause,
  kEmptyTranscript,
};

struct Violation {
  std::size_t index = 0;  // token index the violation refers to
  ViolationKind kind = ViolationKind::kEmptyText;
  std::string message;
};

std::vector<Violation> validate_transcript(
    const TimedTranscript& t,
    const PunctuationSet& punctuation = PunctuationSet::standard());

// Returns a copy with every timestamp multiplied by factor (rounded), used to
// derive slowed or hurried variants of a talk.
TimedTranscript scale_timing(const TimedTranscript& t, std::int64_t num,
                             std::int64_t den);

// --- simulation log -------------------------------------------------------

enum class EventKind {
  kAsrEmitted,
  kSourceTokenCommitted,
  kTargetTokenDecoded,
  kTtsEnqueued,
  kPlaybackStarted,
  kPlaybackFinished,
  kPauseInserted,
  kSentenceBoundary,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

// One log record. Which payload fields are meaningful depends on kind:
//   AsrEmitted            sentence, text = hypothesis, flag = is_final
//   SourceTokenCommitted  sentence, index, text = token, flag = revised
//   TargetTokenDecoded    sentence, index, text = token, mode
//   TtsEnqueued           sentence, index, text = token, value = duration_ms
//   PlaybackStarted/Finished  sentence, index, text = token, flag = is_pause
//   PauseInserted         sentence, index, value = duration_ms
//   SentenceBoundary      sentence, text = talk id, value = source length;
//                         t_ms is the end of the sentence's spoken source
struct LogEntry {
  TimeMs t_ms = 0;
  EventKind kind = EventKind::kAsrEmitted;
  int sentence = 0;
  int index = 0;
  std::string text;
  bool flag = false;
  std::string mode;
  std::int64_t value = 0;

  bool operator==(const LogEntry&) const = default;
};

struct SimulationLog {
  std::vector<LogEntry> entries;

  bool operator==(const SimulationLog&) const = default;

  std::vector<const LogEntry*> of_kind(EventKind kind) const;
};

struct LogViolation {
  std::size_t entry = 0;
  std::string message;
};

// Checks timestamp monotonicity and that no target token of a sentence is
// decoded before some source token of that sentence was committed.
std::vector<LogViolation> validate_log(const SimulationLog& log);

}  // namespace simulstream

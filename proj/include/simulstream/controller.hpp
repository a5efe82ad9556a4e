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
#include <optional>
#include <string_view>
#include <vector>

#include "simulstream/asr.hpp"
#include "simulstream/core.hpp"
#include "simulstream/rational.hpp"
#include "simulstream/translator.hpp"
#include "simulstream/tts.hpp"

namespace simulstream {

enum class Mode { kWaitK, kWaitKSatDecoding, kSatK, kSegmentBased, kFullSentence };

// "waitk", "waitk-sat", "sat", "segment", "full".
std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);

struct ControllerConfig {
  Mode mode = Mode::kSatK;
  int k = 3;
  TimeMs starvation_threshold_ms = 150;
  TimeMs pause_decode_timeout_ms = 1000;
  int filler_budget = 3;
  // Fixed test-time compensation rate. When set, kSatK follows the fixed
  // SAT read schedule instead of adaptive inference.
  std::optional<Rational> compensation;

  void validate() const;
};

// --- adaptive decision step -------------------------------------------------

struct ControllerAction {
  enum class Kind { kConsumeSource, kEmitTarget, kIdle };
  Kind kind = Kind::kIdle;
  int count = 0;                         // kConsumeSource
  DecodeMode mode = DecodeMode::kNormal; // kEmitTarget

  bool operator==(const ControllerAction&) const = default;
};

// What the adaptive controller knows about the sentence being translated.
struct StepState {
  int committed = 0;             // source tokens committed so far
  bool source_complete = false;  // the final hypothesis has been committed
  bool sentence_done = false;
  int fillers_used = 0;
  TimeMs last_commit_ms = 0;
  bool silence_handled = false;  // DecodeToPause already ran for this silence
  bool decoding_to_pause = false;
};

// One evaluation of the decision rules. buffer_size is the number of
// committed tokens not yet read by the translator.
std::vector<ControllerAction> step(TimeMs now_ms, int buffer_size, TimeMs tts_horizon_ms,
                                   const StepState& state, const ControllerConfig& config);

// --- full pipeline ----------------------------------------------------------

// Runs ASR, translation and playback for a whole talk on a logical clock.
// The seed drives the ASR revision noise (it replaces revision_model.seed).
// The returned log is sorted by time and passes validate_log.
SimulationLog run_simulation(const TimedTranscript& transcript, const RevisionModel& revision_model,
                             const OracleSpec& oracle_spec, const DurationModel& duration_model,
                             const ControllerConfig& config, std::uint64_t seed,
                             const PunctuationSet& punctuation = PunctuationSet::standard());

}  // namespace simulstream

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

#include <span>
#include <string>
#include <vector>

#include "simulstream/core.hpp"
#include "simulstream/rational.hpp"

namespace simulstream {

struct DurationModel {
  TimeMs base_ms_per_char = 60;
  TimeMs min_token_ms = 120;
  TimeMs pause_ms = 200;       // silence synthesized for a pause token
  int startup_lag_tokens = 2;  // look-ahead before a sentence starts playing
  TimeMs enqueue_delay_ms = 0; // synthesis time per token

  void validate() const;
};

// Characters are counted as UTF-8 code points.
TimeMs token_duration(const Token& tok, const DurationModel& m);

struct PlaybackItem {
  Token token;
  int sentence_id = 0;
  int index = 0;  // position among the sentence's target tokens
  TimeMs enqueue_ms = 0;
  TimeMs play_start_ms = 0;
  TimeMs play_end_ms = 0;

  bool operator==(const PlaybackItem&) const = default;
};

// Single-voice playback queue. Tokens of a sentence are held back until
// startup_lag_tokens of them are queued or the sentence ends; after that
// each token plays as soon as the voice is free.
class PlaybackSchedule {
 public:
  PlaybackSchedule() = default;
  explicit PlaybackSchedule(DurationModel model);

  // Queues a token. Returns the items whose play window was fixed by this
  // call (possibly none while the startup lag holds them back).
  std::vector<PlaybackItem> enqueue(Token tok, TimeMs now_ms, int sentence_id,
                                    bool ends_sentence = false);

  // Releases whatever the current sentence still holds back, as if it had
  // ended at now_ms.
  std::vector<PlaybackItem> close_sentence(TimeMs now_ms);

  // Scheduled items in play order.
  const std::vector<PlaybackItem>& items() const { return items_; }
  // Items still waiting behind the startup lag.
  const std::vector<PlaybackItem>& pending() const { return pending_; }
  const DurationModel& model() const { return model_; }

  // Builds a schedule from already placed items (no lag handling).
  static PlaybackSchedule from_items(std::vector<PlaybackItem> items,
                                     DurationModel model = {});

 private:
  void release(TimeMs ready_ms, std::vector<PlaybackItem>& out);

  DurationModel model_;
  std::vector<PlaybackItem> items_;
  std::vector<PlaybackItem> pending_;
  TimeMs last_enqueue_ms_ = 0;
  int open_sentence_ = -1;
  int open_count_ = 0;
  bool open_started_ = false;
};

// Value-style wrapper over PlaybackSchedule::enqueue.
PlaybackSchedule enqueue(PlaybackSchedule sched, const Token& tok, TimeMs now_ms,
                         int sentence_id = 0, bool ends_sentence = false);

// When every queued token (held back ones included) will have played, or
// now_ms if nothing is left.
TimeMs playback_horizon(const PlaybackSchedule& sched, TimeMs now_ms);

// Divides every duration by factor. Offsets are rescaled from the start of
// each sentence; a sentence never starts before the previous one ends nor
// before its tokens were queued.
PlaybackSchedule apply_speed_factor(const PlaybackSchedule& sched, const Rational& factor);

struct PlaybackGap {
  std::size_t item = 0;  // index of the item that starts late
  int sentence_id = 0;
  TimeMs gap_ms = 0;
};

// Silences inside a sentence that do not follow a pause token.
std::vector<PlaybackGap> find_gaps(std::span<const PlaybackItem> items);

// Rebuilds the played items from TtsEnqueued / PlaybackStarted /
// PlaybackFinished entries.
std::vector<PlaybackItem> playback_from_log(const SimulationLog& log);

// CSV with header token,enqueue_ms,play_start_ms,play_end_ms,sentence_id.
std::string playback_to_csv(std::span<const PlaybackItem> items);

}  // namespace simulstream

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

#include "simulstream/tts.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "simulstream/error.hpp"

namespace simulstream {

void DurationModel::validate() const {
  if (base_ms_per_char < 0 || min_token_ms < 0 || pause_ms < 0 || enqueue_delay_ms < 0) {
    fail(ErrorCode::kValidation, "duration model fields must be >= 0");
  }
  if (startup_lag_tokens != 1 && startup_lag_tokens != 2) {
    fail(ErrorCode::kValidation, "startup_lag_tokens must be 1 or 2");
  }
}

namespace {

std::int64_t utf8_length(const std::string& s) {
  return std::count_if(s.begin(), s.end(), [](char ch) {
    return (static_cast<unsigned char>(ch) & 0xC0) != 0x80;
  });
}

}  // namespace

TimeMs token_duration(const Token& tok, const DurationModel& m) {
  if (tok.is_pause) return m.pause_ms;
  return std::max(m.min_token_ms, m.base_ms_per_char * utf8_length(tok.text));
}

PlaybackSchedule::PlaybackSchedule(DurationModel model) : model_(model) {
  model_.validate();
}

void PlaybackSchedule::release(TimeMs ready_ms, std::vector<PlaybackItem>& out) {
  for (auto& item : pending_) {
    const TimeMs free_at = items_.empty() ? 0 : items_.back().play_end_ms;
    item.play_start_ms = std::max(ready_ms, free_at);
    item.play_end_ms = item.play_start_ms + token_duration(item.token, model_);
    items_.push_back(item);
    out.push_back(std::move(item));
  }
  pending_.clear();
}

std::vector<PlaybackItem> PlaybackSchedule::enqueue(Token tok, TimeMs now_ms, int sentence_id,
                                                    bool ends_sentence) {
  if (now_ms < last_enqueue_ms_) {
    fail(ErrorCode::kInvalidArgument, "enqueue time went backwards");
  }
  if (sentence_id < open_sentence_) {
    fail(ErrorCode::kInvalidArgument, "enqueue for an earlier sentence");
  }
  last_enqueue_ms_ = now_ms;

  std::vector<PlaybackItem> out;
  if (sentence_id != open_sentence_) {
    // A new sentence flushes whatever the previous one still held back.
    release(now_ms + model_.enqueue_delay_ms, out);
    open_sentence_ = sentence_id;
    open_count_ = 0;
    open_started_ = false;
  }

  PlaybackItem item;
  item.token = std::move(tok);
  item.sentence_id = sentence_id;
  item.index = open_count_++;
  item.enqueue_ms = now_ms;
  pending_.push_back(std::move(item));

  if (open_started_ || open_count_ >= model_.startup_lag_tokens || ends_sentence) {
    open_started_ = true;
    release(now_ms + model_.enqueue_delay_ms, out);
  }
  return out;
}

std::vector<PlaybackItem> PlaybackSchedule::close_sentence(TimeMs now_ms) {
  std::vector<PlaybackItem> out;
  release(std::max(now_ms, last_enqueue_ms_) + model_.enqueue_delay_ms, out);
  open_started_ = true;
  return out;
}

PlaybackSchedule PlaybackSchedule::from_items(std::vector<PlaybackItem> items,
                                              DurationModel model) {
  PlaybackSchedule s(model);
  s.items_ = std::move(items);
  if (!s.items_.empty()) {
    s.last_enqueue_ms_ = s.items_.back().enqueue_ms;
    s.open_sentence_ = s.items_.back().sentence_id;
    s.open_started_ = true;
  }
  return s;
}

PlaybackSchedule enqueue(PlaybackSchedule sched, const Token& tok, TimeMs now_ms,
                         int sentence_id, bool ends_sentence) {
  sched.enqueue(tok, now_ms, sentence_id, ends_sentence);
  return sched;
}

TimeMs playback_horizon(const PlaybackSchedule& sched, TimeMs now_ms) {
  TimeMs horizon = now_ms;
  for (const auto& item : sched.items()) horizon = std::max(horizon, item.play_end_ms);
  if (!sched.pending().empty()) {
    horizon = std::max(horizon, now_ms + sched.model().enqueue_delay_ms);
    for (const auto& item : sched.pending()) horizon += token_duration(item.token, sched.model());
  }
  return horizon;
}

PlaybackSchedule apply_speed_factor(const PlaybackSchedule& sched, const Rational& factor) {
  if (factor <= 0) fail(ErrorCode::kInvalidArgument, "speed factor must be > 0");
  auto scaled = [&](TimeMs v) { return static_cast<TimeMs>(round_half_away(Rational(v) / factor)); };

  std::vector<PlaybackItem> out;
  out.reserve(sched.items().size());
  const auto& items = sched.items();
  std::size_t begin = 0;
  while (begin < items.size()) {
    std::size_t end = begin;
    while (end < items.size() && items[end].sentence_id == items[begin].sentence_id) ++end;

    const TimeMs origin = items[begin].play_start_ms;
    TimeMs start = origin;
    if (!out.empty()) start = std::max(start, out.back().play_end_ms);
    for (std::size_t i = begin; i < end; ++i) {
      PlaybackItem item = items[i];
      TimeMs s = start + scaled(item.play_start_ms - origin);
      s = std::max(s, item.enqueue_ms);
      if (!out.empty()) s = std::max(s, out.back().play_end_ms);
      const TimeMs dur = scaled(item.play_end_ms - item.play_start_ms);
      item.play_start_ms = s;
      item.play_end_ms = s + dur;
      out.push_back(std::move(item));
    }
    begin = end;
  }
  return PlaybackSchedule::from_items(std::move(out), sched.model());
}

std::vector<PlaybackGap> find_gaps(std::span<const PlaybackItem> items) {
  std::vector<PlaybackGap> gaps;
  for (std::size_t i = 1; i < items.size(); ++i) {
    const auto& prev = items[i - 1];
    const auto& cur = items[i];
    if (prev.sentence_id != cur.sentence_id || prev.token.is_pause) continue;
    if (cur.play_start_ms > prev.play_end_ms) {
      gaps.push_back({i, cur.sentence_id, cur.play_start_ms - prev.play_end_ms});
    }
  }
  return gaps;
}

std::vector<PlaybackItem> playback_from_log(const SimulationLog& log) {
  std::map<std::pair<int, int>, PlaybackItem> by_key;
  for (const auto& e : log.entries) {
    const std::pair key{e.sentence, e.index};
    switch (e.kind) {
      case EventKind::kTtsEnqueued: {
        auto& item = by_key[key];
        item.sentence_id = e.sentence;
        item.index = e.index;
        item.token.text = e.text;
        item.enqueue_ms = e.t_ms;
        break;
      }
      case EventKind::kPlaybackStarted: {
        auto& item = by_key[key];
        item.token.is_pause = e.flag;
        item.play_start_ms = e.t_ms;
        break;
      }
      case EventKind::kPlaybackFinished:
        by_key[key].play_end_ms = e.t_ms;
        break;
      default:
        break;
    }
  }
  std::vector<PlaybackItem> out;
  out.reserve(by_key.size());
  for (auto& [key, item] : by_key) out.push_back(std::move(item));
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.play_start_ms < b.play_start_ms;
  });
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

std::string playback_to_csv(std::span<const PlaybackItem> items) {
  std::string out = "token,enqueue_ms,play_start_ms,play_end_ms,sentence_id\n";
  for (const auto& item : items) {
    out += csv_field(item.token.text);
    out += ',' + std::to_string(item.enqueue_ms) + ',' + std::to_string(item.play_start_ms) +
           ',' + std::to_string(item.play_end_ms) + ',' + std::to_string(item.sentence_id) + '\n';
  }
  return out;
}

}  // namespace simulstream

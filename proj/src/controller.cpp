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

#include "simulstream/controller.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <utility>

#include <spdlog/spdlog.h>

#include "simulstream/error.hpp"
#include "simulstream/policy.hpp"

namespace simulstream {

namespace {

constexpr std::array<std::pair<Mode, std::string_view>, 5> kModeNames{{
    {Mode::kWaitK, "waitk"},
    {Mode::kWaitKSatDecoding, "waitk-sat"},
    {Mode::kSatK, "sat"},
    {Mode::kSegmentBased, "segment"},
    {Mode::kFullSentence, "full"},
}};

}  // namespace

std::string_view to_string(Mode mode) {
  for (const auto& [m, name] : kModeNames) {
    if (m == mode) return name;
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view text) {
  for (const auto& [m, name] : kModeNames) {
    if (name == text) return m;
  }
  return std::nullopt;
}

void ControllerConfig::validate() const {
  if (k < 1) fail(ErrorCode::kValidation, "k must be >= 1");
  if (starvation_threshold_ms < 0 || pause_decode_timeout_ms < 0 || filler_budget < 0) {
    fail(ErrorCode::kValidation, "controller thresholds must be >= 0");
  }
  if (compensation) {
    if (mode != Mode::kSatK) {
      fail(ErrorCode::kValidation, "a fixed compensation rate applies to sat mode only");
    }
    if (*compensation <= -1) fail(ErrorCode::kValidation, "compensation rate must be > -1");
  }
}

std::vector<ControllerAction> step(TimeMs now_ms, int buffer_size, TimeMs tts_horizon_ms,
                                   const StepState& state, const ControllerConfig& config) {
  using Kind = ControllerAction::Kind;
  if (state.sentence_done) return {{Kind::kIdle}};

  const bool waited = state.committed >= config.k || state.source_complete;
  if (buffer_size > 0) {
    if (!waited) return {{Kind::kConsumeSource, buffer_size}};
    return {{Kind::kConsumeSource, buffer_size}, {Kind::kEmitTarget, 0, DecodeMode::kNormal}};
  }
  if (!waited) return {{Kind::kIdle}};

  if (state.source_complete || state.decoding_to_pause) {
    return {{Kind::kEmitTarget, 0, DecodeMode::kDecodeToPause}};
  }
  if (tts_horizon_ms - now_ms < config.starvation_threshold_ms &&
      state.fillers_used < config.filler_budget) {
    return {{Kind::kEmitTarget, 0, DecodeMode::kForceExtra}};
  }
  if (!state.silence_handled && now_ms - state.last_commit_ms >= config.pause_decode_timeout_ms) {
    return {{Kind::kEmitTarget, 0, DecodeMode::kDecodeToPause}};
  }
  return {{Kind::kIdle}};
}

namespace {

struct SentenceRun {
  int id = 0;
  TimeMs spoken_end_ms = 0;
  std::vector<Token> prev_stable;
  std::vector<Token> committed;
  int consumed = 0;
  bool final_seen = false;
  int writes = 0;
  bool done = false;
  std::optional<OracleTranslator> oracle;
  StepState step;
};

class Simulation {
 public:
  Simulation(const TimedTranscript& transcript, const RevisionModel& revision_model,
             const OracleSpec& oracle_spec, const DurationModel& duration_model,
             const ControllerConfig& config, std::uint64_t seed,
             const PunctuationSet& punctuation)
      : transcript_(transcript),
        oracle_spec_(oracle_spec),
        config_(config),
        punctuation_(punctuation),
        tts_(duration_model) {
    RevisionModel rm = revision_model;
    rm.seed = seed;
    events_ = generate_asr_events(transcript, rm);
  }

  SimulationLog run();

 private:
  bool adaptive() const {
    return config_.mode == Mode::kWaitKSatDecoding ||
           (config_.mode == Mode::kSatK && !config_.compensation);
  }

  DecodeOptions decode_options() const {
    DecodeOptions o;
    o.k = config_.k;
    if (config_.mode == Mode::kSatK) {
      if (config_.compensation) {
        o.length_model = LengthModel::kCompensated;
        o.compensation = *config_.compensation;
      } else {
        o.length_model = LengthModel::kForcedTail;
      }
    }
    return o;
  }

  void log(TimeMs t, EventKind kind, int sentence, int index, std::string text, bool flag = false,
           std::string mode = {}, std::int64_t value = 0) {
    log_.push_back({t, kind, sentence, index, std::move(text), flag, std::move(mode), value});
  }

  void apply_asr(const AsrEvent& e);
  void advance(TimeMs now);
  void drive_full(SentenceRun& s, TimeMs now);
  void drive_fixed(SentenceRun& s, TimeMs now);
  void drive_adaptive(SentenceRun& s, TimeMs now);
  void consume(SentenceRun& s, int n);
  // Returns false when the oracle held back.
  bool decode(SentenceRun& s, TimeMs now, DecodeMode mode);
  void output(SentenceRun& s, TimeMs now, Token tok, std::string_view mode, bool ends);
  void schedule_wakeups(TimeMs now);

  const TimedTranscript& transcript_;
  const OracleSpec& oracle_spec_;
  const ControllerConfig& config_;
  const PunctuationSet& punctuation_;
  std::vector<AsrEvent> events_;
  std::vector<SentenceRun> sentences_;
  std::map<int, std::size_t> by_id_;
  std::size_t active_ = 0;
  PlaybackSchedule tts_;
  std::set<TimeMs> wakeups_;
  std::vector<LogEntry> log_;
};

SimulationLog Simulation::run() {
  for (auto sentence : transcript_.sentences()) {
    SentenceRun s;
    s.id = sentence.front().sentence_id;
    s.spoken_end_ms = spoken_end_ms(sentence);
    if (adaptive() || config_.mode == Mode::kWaitK || config_.mode == Mode::kSatK) {
      s.oracle.emplace(oracle_spec_, decode_options(), s.id, punctuation_);
    }
    by_id_[s.id] = sentences_.size();
    log(s.spoken_end_ms, EventKind::kSentenceBoundary, s.id, 0, transcript_.talk_id, false, {},
        static_cast<std::int64_t>(sentence.size()));
    sentences_.push_back(std::move(s));
  }
  for (const auto& e : events_) wakeups_.insert(e.t_ms);

  std::size_t next_event = 0;
  while (!wakeups_.empty()) {
    const TimeMs now = *wakeups_.begin();
    wakeups_.erase(wakeups_.begin());
    while (next_event < events_.size() && events_[next_event].t_ms == now) {
      apply_asr(events_[next_event++]);
    }
    advance(now);
    schedule_wakeups(now);
  }
  if (active_ != sentences_.size()) {
    fail(ErrorCode::kState, "simulation stalled in sentence " +
                                std::to_string(sentences_[active_].id));
  }

  for (const auto& item : tts_.items()) {
    log(item.play_start_ms, EventKind::kPlaybackStarted, item.sentence_id, item.index,
        item.token.text, item.token.is_pause);
    if (item.token.is_pause) {
      log(item.play_start_ms, EventKind::kPauseInserted, item.sentence_id, item.index, {}, false,
          {}, item.play_end_ms - item.play_start_ms);
    }
    log(item.play_end_ms, EventKind::kPlaybackFinished, item.sentence_id, item.index,
        item.token.text, item.token.is_pause);
  }
  std::stable_sort(log_.begin(), log_.end(),
                   [](const LogEntry& a, const LogEntry& b) { return a.t_ms < b.t_ms; });
  return SimulationLog{std::move(log_)};
}

void Simulation::apply_asr(const AsrEvent& e) {
  auto& s = sentences_[by_id_.at(e.sentence_id)];
  log(e.t_ms, EventKind::kAsrEmitted, e.sentence_id, 0, join_tokens(e.hypothesis), e.is_final);
  auto stable = stabilize(e);
  auto delta = committed_delta(s.prev_stable, stable);
  const int keep = static_cast<int>(stable.size() - delta.new_tokens.size());
  if (delta.revised) {
    s.committed.resize(static_cast<std::size_t>(keep));
    if (s.consumed > keep) {
      s.consumed = keep;
      if (s.oracle) s.oracle->revise_source({s.committed.begin(), s.committed.end()});
    }
    spdlog::trace("t={} sentence={} revision keeps {} tokens", e.t_ms, s.id, keep);
  }
  for (std::size_t i = 0; i < delta.new_tokens.size(); ++i) {
    const auto& tok = delta.new_tokens[i];
    log(e.t_ms, EventKind::kSourceTokenCommitted, s.id, keep + static_cast<int>(i), tok.text,
        delta.revised);
    s.committed.push_back(tok);
  }
  if (!delta.new_tokens.empty()) {
    s.step.last_commit_ms = e.t_ms;
    s.step.silence_handled = false;
  }
  s.step.committed = static_cast<int>(s.committed.size());
  s.prev_stable = std::move(stable);
  if (e.is_final) s.final_seen = true;
}

void Simulation::advance(TimeMs now) {
  while (active_ < sentences_.size()) {
    auto& s = sentences_[active_];
    switch (config_.mode) {
      case Mode::kFullSentence:
      case Mode::kSegmentBased:
        drive_full(s, now);
        break;
      default:
        if (adaptive()) {
          drive_adaptive(s, now);
        } else {
          drive_fixed(s, now);
        }
    }
    if (!s.done) return;
    tts_.close_sentence(now);
    ++active_;
  }
}

void Simulation::output(SentenceRun& s, TimeMs now, Token tok, std::string_view mode, bool ends) {
  const int index = s.writes++;
  const auto dur = token_duration(tok, tts_.model());
  log(now, EventKind::kTargetTokenDecoded, s.id, index, tok.text, false, std::string(mode));
  log(now, EventKind::kTtsEnqueued, s.id, index, tok.text, false, {}, dur);
  tts_.enqueue(std::move(tok), now, s.id, ends);
}

void Simulation::drive_full(SentenceRun& s, TimeMs now) {
  if (!s.final_seen) return;
  std::vector<std::vector<Token>> segments;
  if (config_.mode == Mode::kSegmentBased && oracle_spec_.kind == OracleKind::kRatio) {
    std::vector<Token> current;
    for (const auto& tok : s.committed) {
      current.push_back(tok);
      if (tok.is_pause) segments.push_back(std::exchange(current, {}));
    }
    if (!current.empty()) {
      current.push_back(punctuation_.make_token("."));
      segments.push_back(std::move(current));
    }
  } else {
    segments.push_back(s.committed);
    if (segments.back().empty() || !segments.back().back().is_pause) {
      segments.back().push_back(punctuation_.make_token("."));
    }
  }
  std::vector<Token> target;
  for (const auto& seg : segments) {
    auto part = full_sentence_translate(seg, oracle_spec_, s.id, punctuation_);
    target.insert(target.end(), part.begin(), part.end());
  }
  for (std::size_t i = 0; i < target.size(); ++i) {
    output(s, now, std::move(target[i]), to_string(DecodeMode::kNormal), i + 1 == target.size());
  }
  s.done = true;
}

void Simulation::consume(SentenceRun& s, int n) {
  std::span<const Token> fresh(s.committed.data() + s.consumed, static_cast<std::size_t>(n));
  s.oracle->read(fresh);
  s.consumed += n;
}

bool Simulation::decode(SentenceRun& s, TimeMs now, DecodeMode mode) {
  auto out = s.oracle->next_token(mode);
  if (out.kind == Decoded::Kind::kHold) return false;
  if (out.kind == Decoded::Kind::kSentenceEnd) {
    s.done = true;
    return true;
  }
  const bool ends = s.oracle->state().sentence_done;
  spdlog::trace("t={} sentence={} {} -> {}", now, s.id, to_string(mode), out.token.text);
  output(s, now, std::move(out.token), to_string(mode), ends);
  if (ends) s.done = true;
  return true;
}

void Simulation::drive_fixed(SentenceRun& s, TimeMs now) {
  const int buffered = static_cast<int>(s.committed.size()) - s.consumed;
  if (buffered > 0) consume(s, buffered);
  if (s.final_seen && !s.oracle->state().source_complete) s.oracle->mark_source_complete();
  const bool complete = s.oracle->state().source_complete;

  while (!s.done) {
    if (!complete) {
      const int t = s.writes + 1;
      std::int64_t need = config_.k + t - 1;
      if (config_.compensation) {
        need = std::max<std::int64_t>(config_.k, need - floor_of(*config_.compensation * t));
      }
      if (s.consumed < need) return;
    }
    if (!decode(s, now, DecodeMode::kNormal)) return;
  }
}

void Simulation::drive_adaptive(SentenceRun& s, TimeMs now) {
  using Kind = ControllerAction::Kind;
  for (int guard = 0; guard < 100000 && !s.done; ++guard) {
    const int buffered = static_cast<int>(s.committed.size()) - s.consumed;
    if (buffered == 0 && s.final_seen && !s.step.source_complete) {
      s.oracle->mark_source_complete();
      s.step.source_complete = true;
    }
    const auto actions = step(now, buffered, playback_horizon(tts_, now), s.step, config_);
    bool progressed = false;
    for (const auto& a : actions) {
      if (a.kind == Kind::kConsumeSource) {
        consume(s, a.count);
        if (s.final_seen && s.consumed == static_cast<int>(s.committed.size())) {
          s.oracle->mark_source_complete();
          s.step.source_complete = true;
        }
        progressed = true;
      } else if (a.kind == Kind::kEmitTarget) {
        if (a.mode == DecodeMode::kForceExtra) ++s.step.fillers_used;
        const std::size_t before = s.oracle->state().tgt_prefix.size();
        decode(s, now, a.mode);
        if (a.mode == DecodeMode::kDecodeToPause && !s.step.source_complete) {
          s.step.silence_handled = true;
          const auto& tgt = s.oracle->state().tgt_prefix;
          s.step.decoding_to_pause = tgt.size() == before || !tgt.back().is_pause;
        }
        progressed = progressed || a.mode != DecodeMode::kNormal;
      }
    }
    s.step.sentence_done = s.done;
    if (!progressed) return;
  }
  if (!s.done && s.step.source_complete) {
    fail(ErrorCode::kState, "tail decoding did not terminate");
  }
}

void Simulation::schedule_wakeups(TimeMs now) {
  if (!adaptive() || active_ >= sentences_.size()) return;
  const auto& s = sentences_[active_];
  const bool waited = s.step.committed >= config_.k;
  if (!waited || s.step.source_complete || s.done) return;
  if (s.step.fillers_used < config_.filler_budget) {
    const TimeMs at = playback_horizon(tts_, now) - config_.starvation_threshold_ms + 1;
    if (at > now) wakeups_.insert(at);
  }
  if (!s.step.silence_handled) {
    const TimeMs at = s.step.last_commit_ms + config_.pause_decode_timeout_ms;
    if (at > now) wakeups_.insert(at);
  }
}

}  // namespace

SimulationLog run_simulation(const TimedTranscript& transcript, const RevisionModel& revision_model,
                             const OracleSpec& oracle_spec, const DurationModel& duration_model,
                             const ControllerConfig& config, std::uint64_t seed,
                             const PunctuationSet& punctuation) {
  config.validate();
  oracle_spec.validate();
  duration_model.validate();
  revision_model.validate();
  const auto violations = validate_transcript(transcript, punctuation);
  if (!violations.empty()) {
    fail(ErrorCode::kValidation, "transcript token " + std::to_string(violations.front().index) +
                                     ": " + violations.front().message);
  }
  Simulation sim(transcript, revision_model, oracle_spec, duration_model, config, seed,
                 punctuation);
  auto log = sim.run();
  spdlog::info("talk {}: {} mode, {} log entries", transcript.talk_id, to_string(config.mode),
               log.entries.size());
  return log;
}

}  // namespace simulstream

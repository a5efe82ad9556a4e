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

#include "simulstream/simulstream.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "simulstream/asr.hpp"
#include "simulstream/controller.hpp"
#include "simulstream/error.hpp"
#include "simulstream/io.hpp"
#include "simulstream/metrics.hpp"
#include "simulstream/policy.hpp"
#include "simulstream/tts.hpp"

struct ss_transcript {
  simulstream::TimedTranscript value;
};

struct ss_log {
  simulstream::SimulationLog value;
};

namespace {

namespace ss = simulstream;

thread_local std::string g_last_error;

// Diagnostics go to stderr so they never mix with data written to stdout.
const bool g_logger_installed = [] {
  spdlog::set_default_logger(spdlog::stderr_color_mt("simulstream"));
  return true;
}();

ss_status to_status(ss::ErrorCode code) {
  switch (code) {
    case ss::ErrorCode::kInvalidArgument: return SS_ERR_INVALID_ARGUMENT;
    case ss::ErrorCode::kDomain: return SS_ERR_DOMAIN;
    case ss::ErrorCode::kParse: return SS_ERR_PARSE;
    case ss::ErrorCode::kIo: return SS_ERR_IO;
    case ss::ErrorCode::kValidation: return SS_ERR_VALIDATION;
    case ss::ErrorCode::kState: return SS_ERR_STATE;
  }
  return SS_ERR_INTERNAL;
}

template <typename F>
ss_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return SS_OK;
  } catch (const ss::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SS_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) ss::fail(ss::ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

ss::Rational rational(std::int64_t num, std::int64_t den, const char* what) {
  if (den == 0) ss::fail(ss::ErrorCode::kValidation, std::string(what) + " has a zero denominator");
  return ss::Rational(num, den);
}

ss::RevisionModel revision_model(const ss_config& c) {
  ss::RevisionModel m;
  m.revise_prob = c.revise_prob;
  m.latency_ms = c.asr_latency_ms;
  m.emit_period_ms = c.asr_emit_period_ms;
  m.seed = c.seed;
  return m;
}

std::vector<ss::TalkText> lines_to_talk(const char* text) {
  ss::TalkText talk;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::vector<std::string> sentence;
    for (std::string w; words >> w;) sentence.push_back(w);
    if (!sentence.empty()) talk.push_back(std::move(sentence));
  }
  return {std::move(talk)};
}

}  // namespace

extern "C" {

const char* ss_version(void) { return "0.1.0"; }

const char* ss_last_error(void) { return g_last_error.c_str(); }

ss_status ss_set_log_level(const char* level) {
  return guarded([&] {
    require(level, "level");
    const std::string_view v(level);
    if (v == "quiet") {
      spdlog::set_level(spdlog::level::off);
    } else if (v == "info") {
      spdlog::set_level(spdlog::level::info);
    } else if (v == "trace") {
      spdlog::set_level(spdlog::level::trace);
    } else {
      ss::fail(ss::ErrorCode::kInvalidArgument, "log level must be quiet, info or trace");
    }
  });
}

void ss_string_free(char* s) { std::free(s); }

void ss_config_init(ss_config* config) {
  if (config == nullptr) return;
  const ss::ControllerConfig cc;
  const ss::OracleSpec os;
  const ss::DurationModel dm;
  const ss::RevisionModel rm;
  *config = ss_config{};
  config->mode = SS_MODE_SAT;
  config->k = cc.k;
  config->ratio_num = os.ratio.numerator();
  config->ratio_den = os.ratio.denominator();
  config->target_token_chars = os.target_token_chars;
  config->table_path = nullptr;
  config->has_compensation = 0;
  config->compensation_num = 0;
  config->compensation_den = 1;
  config->starvation_threshold_ms = cc.starvation_threshold_ms;
  config->pause_decode_timeout_ms = cc.pause_decode_timeout_ms;
  config->filler_budget = cc.filler_budget;
  config->base_ms_per_char = dm.base_ms_per_char;
  config->min_token_ms = dm.min_token_ms;
  config->pause_ms = dm.pause_ms;
  config->startup_lag_tokens = dm.startup_lag_tokens;
  config->enqueue_delay_ms = dm.enqueue_delay_ms;
  config->revise_prob = rm.revise_prob;
  config->asr_latency_ms = rm.latency_ms;
  config->asr_emit_period_ms = rm.emit_period_ms;
  config->seed = rm.seed;
}

ss_status ss_parse_mode(const char* text, ss_mode* out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    const auto mode = ss::parse_mode(text);
    if (!mode) ss::fail(ss::ErrorCode::kInvalidArgument, std::string("unknown mode '") + text + "'");
    *out = static_cast<ss_mode>(*mode);
  });
}

const char* ss_mode_name(ss_mode mode) {
  switch (mode) {
    case SS_MODE_WAITK: return "waitk";
    case SS_MODE_WAITK_SAT: return "waitk-sat";
    case SS_MODE_SAT: return "sat";
    case SS_MODE_SEGMENT: return "segment";
    case SS_MODE_FULL: return "full";
  }
  return "?";
}

ss_status ss_parse_rational(const char* text, int64_t* num, int64_t* den) {
  return guarded([&] {
    require(text, "text");
    require(num, "num");
    require(den, "den");
    const auto r = ss::parse_rational(text);
    *num = r.numerator();
    *den = r.denominator();
  });
}

ss_status ss_transcript_load(const char* path, ss_transcript** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto t = std::make_unique<ss_transcript>();
    t->value = ss::load_transcript(path);
    *out = t.release();
  });
}

ss_status ss_transcript_bundled(ss_transcript** out) {
  return guarded([&] {
    require(out, "out");
    *out = new ss_transcript{ss::bundled_transcript()};
  });
}

ss_status ss_transcript_scale(const ss_transcript* t, int64_t num, int64_t den,
                              ss_transcript** out) {
  return guarded([&] {
    require(t, "transcript");
    require(out, "out");
    *out = new ss_transcript{ss::scale_timing(t->value, num, den)};
  });
}

size_t ss_transcript_sentence_count(const ss_transcript* t) {
  return t == nullptr ? 0 : t->value.sentences().size();
}

void ss_transcript_free(ss_transcript* t) { delete t; }

ss_status ss_simulate(const ss_transcript* t, const ss_config* config, ss_log** out) {
  return guarded([&] {
    require(t, "transcript");
    require(config, "config");
    require(out, "out");
    const ss_config& c = *config;

    ss::OracleSpec oracle;
    if (c.table_path != nullptr && c.table_path[0] != '\0') {
      oracle.kind = ss::OracleKind::kTable;
      oracle.table = std::make_shared<const ss::TranslationTable>(
          ss::TranslationTable::parse(ss::read_file(c.table_path)));
    } else {
      oracle.ratio = rational(c.ratio_num, c.ratio_den, "ratio");
      oracle.target_token_chars = c.target_token_chars;
    }

    ss::ControllerConfig cc;
    if (c.mode < SS_MODE_WAITK || c.mode > SS_MODE_FULL) {
      ss::fail(ss::ErrorCode::kValidation, "unknown mode");
    }
    cc.mode = static_cast<ss::Mode>(c.mode);
    cc.k = c.k;
    cc.starvation_threshold_ms = c.starvation_threshold_ms;
    cc.pause_decode_timeout_ms = c.pause_decode_timeout_ms;
    cc.filler_budget = c.filler_budget;
    if (c.has_compensation) {
      cc.compensation = rational(c.compensation_num, c.compensation_den, "compensation rate");
    }

    ss::DurationModel dm;
    dm.base_ms_per_char = c.base_ms_per_char;
    dm.min_token_ms = c.min_token_ms;
    dm.pause_ms = c.pause_ms;
    dm.startup_lag_tokens = c.startup_lag_tokens;
    dm.enqueue_delay_ms = c.enqueue_delay_ms;

    auto log = std::make_unique<ss_log>();
    log->value = ss::run_simulation(t->value, revision_model(c), oracle, dm, cc, c.seed);
    *out = log.release();
  });
}

ss_status ss_asr_events_jsonl(const ss_transcript* t, const ss_config* config, char** out) {
  return guarded([&] {
    require(t, "transcript");
    require(config, "config");
    require(out, "out");
    const auto violations = ss::validate_transcript(t->value);
    if (!violations.empty()) {
      ss::fail(ss::ErrorCode::kValidation, "transcript token " +
                                               std::to_string(violations.front().index) + ": " +
                                               violations.front().message);
    }
    *out = dup_string(ss::asr_events_to_jsonl(ss::generate_asr_events(t->value, revision_model(*config))));
  });
}

ss_status ss_log_load(const char* path, ss_log** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ss_log{ss::load_jsonl(path)};
  });
}

ss_status ss_log_write_jsonl(const ss_log* log, const char* path) {
  return guarded([&] {
    require(log, "log");
    require(path, "path");
    ss::write_file(path, ss::to_jsonl(log->value));
  });
}

ss_status ss_log_to_jsonl(const ss_log* log, char** out) {
  return guarded([&] {
    require(log, "log");
    require(out, "out");
    *out = dup_string(ss::to_jsonl(log->value));
  });
}

size_t ss_log_entry_count(const ss_log* log) {
  return log == nullptr ? 0 : log->value.entries.size();
}

ss_status ss_log_violation_count(const ss_log* log, size_t* out) {
  return guarded([&] {
    require(log, "log");
    require(out, "out");
    *out = ss::validate_log(log->value).size();
  });
}

ss_status ss_log_gap_count(const ss_log* log, size_t* out) {
  return guarded([&] {
    require(log, "log");
    require(out, "out");
    *out = ss::find_gaps(ss::playback_from_log(log->value)).size();
  });
}

ss_status ss_log_sentence_count(const ss_log* log, size_t* out) {
  return guarded([&] {
    require(log, "log");
    require(out, "out");
    *out = log->value.of_kind(ss::EventKind::kSentenceBoundary).size();
  });
}

ss_status ss_log_latencies(const ss_log* log, int32_t* ids, int64_t* latencies, size_t capacity,
                           size_t* count) {
  return guarded([&] {
    require(log, "log");
    require(count, "count");
    const auto report = ss::latency_report(log->value);
    *count = report.per_sentence.size();
    for (size_t i = 0; i < report.per_sentence.size() && i < capacity; ++i) {
      if (ids != nullptr) ids[i] = report.per_sentence[i].first;
      if (latencies != nullptr) latencies[i] = report.per_sentence[i].second;
    }
  });
}

ss_status ss_log_bal(const ss_log* log, double* out) {
  return guarded([&] {
    require(log, "log");
    require(out, "out");
    *out = ss::boundary_aware_latency(log->value);
  });
}

ss_status ss_log_lengths(const ss_log* log, int64_t* total_target, double* mean_tail) {
  return guarded([&] {
    require(log, "log");
    const std::pair<ss::Rational, ss::SimulationLog> run{ss::Rational(0), log->value};
    const auto rows = ss::length_analysis(std::span(&run, 1));
    if (total_target != nullptr) *total_target = rows.front().total_target_len;
    if (mean_tail != nullptr) *mean_tail = rows.front().mean_tail_len;
  });
}

ss_status ss_log_latency_csv(const ss_log* log, char** out) {
  return guarded([&] {
    require(log, "log");
    require(out, "out");
    *out = dup_string(ss::latency_report_csv(ss::latency_report(log->value)));
  });
}

ss_status ss_log_playback_csv(const ss_log* log, char** out) {
  return guarded([&] {
    require(log, "log");
    require(out, "out");
    *out = dup_string(ss::playback_to_csv(ss::playback_from_log(log->value)));
  });
}

ss_status ss_log_target_text(const ss_log* log, char** out) {
  return guarded([&] {
    require(log, "log");
    require(out, "out");
    std::string text;
    for (const auto& [id, tokens] : ss::decoded_targets(log->value)) {
      text += ss::join_tokens(tokens);
      text += '\n';
    }
    *out = dup_string(text);
  });
}

void ss_log_free(ss_log* log) { delete log; }

ss_status ss_policy_schedule(int src_len, int tgt_len, int k, ss_schedule* out) {
  return guarded([&] {
    require(out, "out");
    *out = ss_schedule{};
    ss::ActionSchedule s;
    if (src_len > k) {
      s = ss::derive_action_schedule(k, src_len, tgt_len);
      const auto c = ss::compensation_rate(src_len, tgt_len, k);
      out->has_rate = 1;
      out->rate_num = c.numerator();
      out->rate_den = c.denominator();
    } else {
      s = ss::wait_k_schedule(k, src_len, tgt_len);
    }
    out->tail = ss::tail_length(s);
    out->actions = dup_string(s.to_string());
  });
}

ss_status ss_bleu(const char* hypothesis, const char* reference, double* out) {
  return guarded([&] {
    require(hypothesis, "hypothesis");
    require(reference, "reference");
    require(out, "out");
    const auto hyp = lines_to_talk(hypothesis);
    const auto ref = lines_to_talk(reference);
    *out = ss::concat_bleu(hyp, ref);
  });
}

}  // extern "C"

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

#ifndef SIMULSTREAM_SIMULSTREAM_H_
#define SIMULSTREAM_SIMULSTREAM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SIMULSTREAM_BUILDING)
#define SIMULSTREAM_API __declspec(dllexport)
#else
#define SIMULSTREAM_API __declspec(dllimport)
#endif
#else
#define SIMULSTREAM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ss_status {
  SS_OK = 0,
  SS_ERR_INVALID_ARGUMENT = 1,
  SS_ERR_DOMAIN = 2,
  SS_ERR_PARSE = 3,
  SS_ERR_IO = 4,
  SS_ERR_VALIDATION = 5,
  SS_ERR_STATE = 6,
  SS_ERR_INTERNAL = 7
} ss_status;

typedef enum ss_mode {
  SS_MODE_WAITK = 0,
  SS_MODE_WAITK_SAT = 1,
  SS_MODE_SAT = 2,
  SS_MODE_SEGMENT = 3,
  SS_MODE_FULL = 4
} ss_mode;

typedef struct ss_transcript ss_transcript;
typedef struct ss_log ss_log;

/* Everything a simulation run needs. Initialize with ss_config_init. */
typedef struct ss_config {
  ss_mode mode;
  int k;
  /* oracle */
  int64_t ratio_num;
  int64_t ratio_den;
  int target_token_chars;
  const char* table_path; /* NULL: ratio oracle */
  /* fixed test-time compensation rate (sat mode only) */
  int has_compensation;
  int64_t compensation_num;
  int64_t compensation_den;
  /* controller */
  int64_t starvation_threshold_ms;
  int64_t pause_decode_timeout_ms;
  int filler_budget;
  /* playback */
  int64_t base_ms_per_char;
  int64_t min_token_ms;
  int64_t pause_ms;
  int startup_lag_tokens;
  int64_t enqueue_delay_ms;
  /* recognizer */
  double revise_prob;
  int64_t asr_latency_ms;
  int64_t asr_emit_period_ms;
  uint64_t seed;
} ss_config;

typedef struct ss_schedule {
  char* actions;    /* "RRWRW...", release with ss_string_free */
  int has_rate;     /* 0 when src_len <= k (wait-k fallback) */
  int64_t rate_num; /* compensation rate, reduced fraction */
  int64_t rate_den;
  int tail;
} ss_schedule;

SIMULSTREAM_API const char* ss_version(void);

/* Message of the last failed call on this thread ("" if none). */
SIMULSTREAM_API const char* ss_last_error(void);

/* "quiet", "info" or "trace". */
SIMULSTREAM_API ss_status ss_set_log_level(const char* level);

SIMULSTREAM_API void ss_string_free(char* s);

SIMULSTREAM_API void ss_config_init(ss_config* config);
SIMULSTREAM_API ss_status ss_parse_mode(const char* text, ss_mode* out);
SIMULSTREAM_API const char* ss_mode_name(ss_mode mode);
SIMULSTREAM_API ss_status ss_parse_rational(const char* text, int64_t* num, int64_t* den);

/* Transcripts */
SIMULSTREAM_API ss_status ss_transcript_load(const char* path, ss_transcript** out);
SIMULSTREAM_API ss_status ss_transcript_bundled(ss_transcript** out);
SIMULSTREAM_API ss_status ss_transcript_scale(const ss_transcript* t, int64_t num, int64_t den,
                                              ss_transcript** out);
SIMULSTREAM_API size_t ss_transcript_sentence_count(const ss_transcript* t);
SIMULSTREAM_API void ss_transcript_free(ss_transcript* t);

/* Simulation */
SIMULSTREAM_API ss_status ss_simulate(const ss_transcript* t, const ss_config* config,
                                      ss_log** out);
SIMULSTREAM_API ss_status ss_asr_events_jsonl(const ss_transcript* t, const ss_config* config,
                                              char** out);

/* Logs */
SIMULSTREAM_API ss_status ss_log_load(const char* path, ss_log** out);
SIMULSTREAM_API ss_status ss_log_write_jsonl(const ss_log* log, const char* path);
SIMULSTREAM_API ss_status ss_log_to_jsonl(const ss_log* log, char** out);
SIMULSTREAM_API size_t ss_log_entry_count(const ss_log* log);
SIMULSTREAM_API ss_status ss_log_violation_count(const ss_log* log, size_t* out);
SIMULSTREAM_API ss_status ss_log_gap_count(const ss_log* log, size_t* out);
SIMULSTREAM_API ss_status ss_log_sentence_count(const ss_log* log, size_t* out);
/* Writes up to capacity (sentence_id, ending latency) pairs; *count gets
 * the number of sentences. */
SIMULSTREAM_API ss_status ss_log_latencies(const ss_log* log, int32_t* ids, int64_t* latencies,
                                           size_t capacity, size_t* count);
SIMULSTREAM_API ss_status ss_log_bal(const ss_log* log, double* out);
SIMULSTREAM_API ss_status ss_log_lengths(const ss_log* log, int64_t* total_target,
                                         double* mean_tail);
SIMULSTREAM_API ss_status ss_log_latency_csv(const ss_log* log, char** out);
SIMULSTREAM_API ss_status ss_log_playback_csv(const ss_log* log, char** out);
/* Decoded target text, one sentence per line. */
SIMULSTREAM_API ss_status ss_log_target_text(const ss_log* log, char** out);
SIMULSTREAM_API void ss_log_free(ss_log* log);

/* Policies */
SIMULSTREAM_API ss_status ss_policy_schedule(int src_len, int tgt_len, int k, ss_schedule* out);

/* BLEU of one talk; sentences are newline separated, tokens space separated. */
SIMULSTREAM_API ss_status ss_bleu(const char* hypothesis, const char* reference, double* out);

#ifdef __cplusplus
}
#endif

#endif /* SIMULSTREAM_SIMULSTREAM_H_ */

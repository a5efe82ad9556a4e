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

// Shared test helpers: a small random generator for property tests and
// independent reference computations the library results are checked against.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "simulstream/core.hpp"
#include "simulstream/policy.hpp"

namespace testing {

using simulstream::TimedToken;
using simulstream::TimedTranscript;
using simulstream::Token;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  // Uniform integer in [lo, hi].
  int between(int lo, int hi) {
    return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin() { return (rng_() & 1U) != 0; }
  std::uint64_t next() { return rng_(); }

  std::string word() {
    static const char* const kSyllables[] = {"ka", "lo", "mi", "re", "tu", "san", "vo", "en", "di"};
    std::string w;
    const int n = between(1, 3);
    for (int i = 0; i < n; ++i) w += kSyllables[between(0, 8)];
    return w;
  }

 private:
  std::mt19937_64 rng_;
};

struct TranscriptShape {
  int min_sentences = 1;
  int max_sentences = 4;
  int min_words = 1;
  int max_words = 12;
  int min_word_ms = 120;
  int max_word_ms = 600;
  bool inner_commas = false;
};

// Random well-formed transcript: words with random durations and small
// gaps, each sentence closed by "." (and optionally commas inside).
inline TimedTranscript random_transcript(Gen& g, const TranscriptShape& shape = {}) {
  TimedTranscript t;
  t.talk_id = "random";
  std::int64_t now = g.between(0, 400);
  const int sentences = g.between(shape.min_sentences, shape.max_sentences);
  for (int s = 0; s < sentences; ++s) {
    const int words = g.between(shape.min_words, shape.max_words);
    for (int w = 0; w < words; ++w) {
      const std::int64_t dur = g.between(shape.min_word_ms, shape.max_word_ms);
      t.tokens.push_back({Token{g.word(), false}, now, now + dur, s});
      now += dur + g.between(0, 80);
      if (shape.inner_commas && w + 1 < words && g.between(0, 5) == 0) {
        t.tokens.push_back({Token{",", true}, now, now + 100, s});
        now += 100;
      }
    }
    t.tokens.push_back({Token{".", true}, now, now + 120, s});
    now += 120 + g.between(0, 1500);
  }
  return t;
}

inline std::vector<Token> words_of(std::initializer_list<const char*> texts) {
  std::vector<Token> out;
  for (const char* t : texts) out.push_back(simulstream::PunctuationSet::standard().make_token(t));
  return out;
}

// --- reference computations -------------------------------------------------

// g(t) of wait-k by simulation: read until k + t - 1 tokens are in, or the
// source runs out.
inline int ref_wait_k(int t, int k, int src_len) {
  int read = 0;
  while (read < k + t - 1 && read < src_len) ++read;
  return read;
}

// floor(p/q) for integers with q > 0.
inline std::int64_t ref_floor_div(std::int64_t p, std::int64_t q) {
  std::int64_t d = p / q;
  if ((p % q != 0) && (p < 0)) --d;
  return d;
}

// g(t) of the SAT policy with c = p/q, clamped to [min(k, src_len), src_len].
inline int ref_sat(int t, int k, std::int64_t p, std::int64_t q, int src_len) {
  std::int64_t g = k + t - 1 - ref_floor_div(p * t, q);
  if (g > src_len) g = src_len;
  const int lower = k < src_len ? k : src_len;
  if (g < lower) g = lower;
  return static_cast<int>(g);
}

struct ScheduleCheck {
  bool ok = true;
  std::string why;
};

// Validates a schedule string against the schedule contract without using
// any library code.
inline ScheduleCheck ref_check_schedule(const std::string& actions, int k, int src_len,
                                        int tgt_len) {
  ScheduleCheck r;
  auto bad = [&](std::string why) {
    r.ok = false;
    r.why = std::move(why);
    return r;
  };
  int reads = 0;
  int writes = 0;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i] == 'R') {
      ++reads;
    } else if (actions[i] == 'W') {
      ++writes;
      const int need = k < src_len ? k : src_len;
      if (reads < need) return bad("write before the initial wait at position " + std::to_string(i));
    } else {
      return bad("unknown action");
    }
  }
  if (reads != src_len) return bad("read count " + std::to_string(reads));
  if (writes != tgt_len) return bad("write count " + std::to_string(writes));
  int tail = 0;
  for (auto it = actions.rbegin(); it != actions.rend() && *it == 'W'; ++it) ++tail;
  const int want_tail = k < tgt_len ? k : tgt_len;
  if (tail != want_tail) return bad("tail " + std::to_string(tail));
  return r;
}

// Longest run of WRITEs before the tail.
inline int ref_middle_burst(const std::string& actions, int tail) {
  const std::string middle = actions.substr(0, actions.size() - static_cast<std::size_t>(tail));
  int best = 0;
  int run = 0;
  for (char a : middle) {
    run = a == 'W' ? run + 1 : 0;
    best = run > best ? run : best;
  }
  return best;
}

// All R/W strings with the given counts, by recursion.
inline void ref_enumerate(int reads, int writes, std::string& prefix,
                          std::vector<std::string>& out) {
  if (reads == 0 && writes == 0) {
    out.push_back(prefix);
    return;
  }
  if (reads > 0) {
    prefix.push_back('R');
    ref_enumerate(reads - 1, writes, prefix, out);
    prefix.pop_back();
  }
  if (writes > 0) {
    prefix.push_back('W');
    ref_enumerate(reads, writes - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace testing

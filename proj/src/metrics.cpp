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

#include "simulstream/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "simulstream/error.hpp"

namespace simulstream {

namespace {

struct SentenceTimes {
  TimeMs boundary_ms = 0;
  bool has_boundary = false;
  TimeMs last_play_end_ms = 0;
  bool played = false;
};

std::map<int, SentenceTimes> sentence_times(const SimulationLog& log) {
  std::map<int, SentenceTimes> out;
  for (const auto& e : log.entries) {
    if (e.kind == EventKind::kSentenceBoundary) {
      auto& s = out[e.sentence];
      s.boundary_ms = e.t_ms;
      s.has_boundary = true;
    } else if (e.kind == EventKind::kPlaybackFinished) {
      auto& s = out[e.sentence];
      s.last_play_end_ms = std::max(s.last_play_end_ms, e.t_ms);
      s.played = true;
    }
  }
  return out;
}

TimeMs latency_of(int id, const SentenceTimes& s) {
  if (!s.has_boundary) {
    fail(ErrorCode::kInvalidArgument, "sentence " + std::to_string(id) + " has no boundary entry");
  }
  if (!s.played) {
    fail(ErrorCode::kInvalidArgument, "sentence " + std::to_string(id) + " has no playback");
  }
  return s.last_play_end_ms - s.boundary_ms;
}

}  // namespace

TimeMs ending_latency(const SimulationLog& log, int sentence_id) {
  const auto times = sentence_times(log);
  const auto it = times.find(sentence_id);
  if (it == times.end()) {
    fail(ErrorCode::kInvalidArgument, "unknown sentence " + std::to_string(sentence_id));
  }
  return latency_of(sentence_id, it->second);
}

LatencyReport latency_report(const SimulationLog& log) {
  LatencyReport r;
  for (const auto& [id, times] : sentence_times(log)) {
    r.per_sentence.emplace_back(id, latency_of(id, times));
  }
  if (r.per_sentence.empty()) fail(ErrorCode::kInvalidArgument, "log has no sentences");
  double sum = 0.0;
  for (const auto& [id, lat] : r.per_sentence) sum += static_cast<double>(lat);
  r.mean_ms = sum / static_cast<double>(r.per_sentence.size());
  r.boundary_aware_ms = r.mean_ms;
  return r;
}

double boundary_aware_latency(const SimulationLog& log) {
  return latency_report(log).boundary_aware_ms;
}

std::string latency_report_csv(const LatencyReport& report) {
  std::string out = "sentence_id,ending_latency_ms\n";
  for (const auto& [id, lat] : report.per_sentence) {
    out += std::to_string(id) + ',' + std::to_string(lat) + '\n';
  }
  char buf[64];
  out += "\nmetric,value\n";
  std::snprintf(buf, sizeof buf, "%.3f", report.boundary_aware_ms);
  out += std::string(kBalLabel) + ',' + buf + '\n';
  std::snprintf(buf, sizeof buf, "%.3f", report.mean_ms);
  out += std::string("mean_ending_latency_ms,") + buf + '\n';
  return out;
}

std::vector<std::pair<int, std::vector<Token>>> decoded_targets(
    const SimulationLog& log, const PunctuationSet& punctuation) {
  std::map<int, std::vector<Token>> by_sentence;
  for (const auto& e : log.entries) {
    if (e.kind == EventKind::kSentenceBoundary) by_sentence[e.sentence];
    if (e.kind == EventKind::kTargetTokenDecoded) {
      by_sentence[e.sentence].push_back(punctuation.make_token(e.text));
    }
  }
  return {by_sentence.begin(), by_sentence.end()};
}

// --- BLEU -------------------------------------------------------------------

namespace {

std::vector<std::string> flatten(const TalkText& talk, const PunctuationSet& punctuation) {
  std::vector<std::string> out;
  for (const auto& sentence : talk) {
    for (const auto& w : sentence) {
      if (!punctuation.contains(w)) out.push_back(w);
    }
  }
  return out;
}

std::map<std::vector<std::string>, int> ngram_counts(const std::vector<std::string>& words, int n) {
  std::map<std::vector<std::string>, int> out;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= words.size(); ++i) {
    ++out[std::vector<std::string>(words.begin() + static_cast<std::ptrdiff_t>(i),
                                   words.begin() + static_cast<std::ptrdiff_t>(i) + n)];
  }
  return out;
}

}  // namespace

double concat_bleu(std::span<const TalkText> hypotheses, std::span<const TalkText> references,
                   int max_n, const PunctuationSet& punctuation) {
  if (references.empty()) fail(ErrorCode::kInvalidArgument, "BLEU needs references");
  if (hypotheses.size() != references.size()) {
    fail(ErrorCode::kInvalidArgument, "hypothesis and reference talk counts differ");
  }
  if (max_n < 1) fail(ErrorCode::kInvalidArgument, "max_n must be >= 1");

  std::vector<std::int64_t> matches(static_cast<std::size_t>(max_n), 0);
  std::vector<std::int64_t> totals(static_cast<std::size_t>(max_n), 0);
  std::int64_t hyp_len = 0;
  std::int64_t ref_len = 0;
  for (std::size_t talk = 0; talk < hypotheses.size(); ++talk) {
    const auto hyp = flatten(hypotheses[talk], punctuation);
    const auto ref = flatten(references[talk], punctuation);
    hyp_len += static_cast<std::int64_t>(hyp.size());
    ref_len += static_cast<std::int64_t>(ref.size());
    for (int n = 1; n <= max_n; ++n) {
      const auto h = ngram_counts(hyp, n);
      const auto r = ngram_counts(ref, n);
      for (const auto& [gram, count] : h) {
        const auto it = r.find(gram);
        if (it != r.end()) matches[static_cast<std::size_t>(n - 1)] += std::min(count, it->second);
        totals[static_cast<std::size_t>(n - 1)] += count;
      }
    }
  }
  if (ref_len == 0) fail(ErrorCode::kInvalidArgument, "references are empty after stripping");
  if (hyp_len == 0) return 0.0;

  double log_sum = 0.0;
  int orders = 0;
  for (int n = 0; n < max_n; ++n) {
    if (totals[static_cast<std::size_t>(n)] == 0) continue;
    if (matches[static_cast<std::size_t>(n)] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matches[static_cast<std::size_t>(n)]) /
                        static_cast<double>(totals[static_cast<std::size_t>(n)]));
    ++orders;
  }
  const double precision = std::exp(log_sum / orders);
  const double bp = hyp_len >= ref_len
                        ? 1.0
                        : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
  return 100.0 * bp * precision;
}

// --- length analysis --------------------------------------------------------

namespace {

std::vector<std::pair<int, std::int64_t>> boundary_signature(const SimulationLog& log) {
  std::vector<std::pair<int, std::int64_t>> sig;
  for (const auto& e : log.entries) {
    if (e.kind == EventKind::kSentenceBoundary) sig.emplace_back(e.sentence, e.value);
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

}  // namespace

std::vector<LengthRow> length_analysis(std::span<const std::pair<Rational, SimulationLog>> runs) {
  if (runs.empty()) fail(ErrorCode::kInvalidArgument, "length analysis needs at least one run");
  const auto reference = boundary_signature(runs.front().second);
  std::vector<LengthRow> rows;
  for (const auto& [c, log] : runs) {
    if (boundary_signature(log) != reference) {
      fail(ErrorCode::kInvalidArgument, "runs cover different transcripts");
    }
    std::map<int, std::size_t> last_commit;
    for (std::size_t i = 0; i < log.entries.size(); ++i) {
      if (log.entries[i].kind == EventKind::kSourceTokenCommitted) {
        last_commit[log.entries[i].sentence] = i;
      }
    }
    LengthRow row;
    row.c = c;
    std::map<int, int> tails;
    for (const auto& [id, len] : reference) tails[id] = 0;
    for (std::size_t i = 0; i < log.entries.size(); ++i) {
      const auto& e = log.entries[i];
      if (e.kind != EventKind::kTargetTokenDecoded) continue;
      ++row.total_target_len;
      const auto it = last_commit.find(e.sentence);
      if (it == last_commit.end() || i > it->second) ++tails[e.sentence];
    }
    int tail_sum = 0;
    for (const auto& [id, n] : tails) tail_sum += n;
    row.mean_tail_len = tails.empty() ? 0.0 : static_cast<double>(tail_sum) /
                                                  static_cast<double>(tails.size());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace simulstream

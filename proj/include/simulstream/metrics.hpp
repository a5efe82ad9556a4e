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
#include <utility>
#include <vector>

#include "simulstream/core.hpp"
#include "simulstream/rational.hpp"

namespace simulstream {

// Finish of the sentence's last played target token minus the end of its
// spoken source (the SentenceBoundary timestamp). Throws kInvalidArgument
// for an unknown sentence.
TimeMs ending_latency(const SimulationLog& log, int sentence_id);

// Mean ending latency over all sentences, on the continuous talk timeline.
// Reported as "bal_ms (artifact definition)".
double boundary_aware_latency(const SimulationLog& log);

inline constexpr const char* kBalLabel = "bal_ms (artifact definition)";

struct LatencyReport {
  std::vector<std::pair<int, TimeMs>> per_sentence;  // sorted by sentence id
  double boundary_aware_ms = 0.0;
  double mean_ms = 0.0;
};

LatencyReport latency_report(const SimulationLog& log);

// CSV: `sentence_id,ending_latency_ms` rows, a blank line, then a
// `metric,value` summary block.
std::string latency_report_csv(const LatencyReport& report);

// Target tokens of each sentence in decode order, keyed by sentence id.
std::vector<std::pair<int, std::vector<Token>>> decoded_targets(
    const SimulationLog& log, const PunctuationSet& punctuation = PunctuationSet::standard());

// One talk = one list of sentences, each a list of token strings.
using TalkText = std::vector<std::vector<std::string>>;

// Corpus BLEU over talks: each talk's sentences are concatenated and
// stripped of punctuation before n-gram counting. Orders with no n-grams
// on the hypothesis side are left out of the geometric mean.
double concat_bleu(std::span<const TalkText> hypotheses, std::span<const TalkText> references,
                   int max_n = 4, const PunctuationSet& punctuation = PunctuationSet::standard());

struct LengthRow {
  Rational c;
  int total_target_len = 0;
  double mean_tail_len = 0.0;

  bool operator==(const LengthRow&) const = default;
};

// Per run: target tokens decoded over the whole talk and the mean number
// of target tokens decoded after each sentence's last source commit. All runs
// must cover the same sentences (kInvalidArgument otherwise).
std::vector<LengthRow> length_analysis(std::span<const std::pair<Rational, SimulationLog>> runs);

}  // namespace simulstream

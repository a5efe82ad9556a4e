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

#include <string>
#include <string_view>

#include "simulstream/core.hpp"

namespace simulstream {

// Transcript TSV: one token per line, `text<TAB>start_ms<TAB>end_ms<TAB>
// sentence_id`; lines starting with '#' and blank lines are skipped.
TimedTranscript parse_transcript(
    std::string_view text, std::string talk_id,
    const PunctuationSet& punctuation = PunctuationSet::standard());
TimedTranscript load_transcript(
    const std::string& path,
    const PunctuationSet& punctuation = PunctuationSet::standard());
std::string format_transcript(const TimedTranscript& t);

// The 10-sentence talk shipped with the library.
TimedTranscript bundled_transcript();

// Log JSONL: one {"t_ms", "kind", "payload"} object per line.
std::string encode_log_entry(const LogEntry& entry);
LogEntry decode_log_entry(std::string_view line);
std::string to_jsonl(const SimulationLog& log);
SimulationLog parse_jsonl(std::string_view text);
SimulationLog load_jsonl(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace simulstream

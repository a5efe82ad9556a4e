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

#include "simulstream/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "simulstream/error.hpp"

#include "bundled_fixture.inc"

namespace simulstream {

using nlohmann::ordered_json;

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  for (;;) {
    const auto tab = line.find('\t', begin);
    out.push_back(line.substr(begin, tab == std::string_view::npos ? tab : tab - begin));
    if (tab == std::string_view::npos) break;
    begin = tab + 1;
  }
  return out;
}

std::int64_t parse_field(std::string_view field, std::size_t line_no,
                         const char* name) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": bad " + name +
                                " '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

TimedTranscript parse_transcript(std::string_view text, std::string talk_id,
                                 const PunctuationSet& punctuation) {
  TimedTranscript t;
  t.talk_id = std::move(talk_id);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') {
      if (eol == text.size()) break;
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 4) {
      fail(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                  ": expected 4 tab-separated fields, got " +
                                  std::to_string(fields.size()));
    }
    TimedToken tt;
    tt.token = punctuation.make_token(std::string(fields[0]));
    tt.start_ms = parse_field(fields[1], line_no, "start_ms");
    tt.end_ms = parse_field(fields[2], line_no, "end_ms");
    tt.sentence_id = static_cast<int>(parse_field(fields[3], line_no, "sentence_id"));
    t.tokens.push_back(std::move(tt));
    if (eol == text.size()) break;
  }
  return t;
}

TimedTranscript load_transcript(const std::string& path,
                                const PunctuationSet& punctuation) {
  std::string talk = path;
  if (auto slash = talk.find_last_of('/'); slash != std::string::npos) talk.erase(0, slash + 1);
  if (auto dot = talk.find_last_of('.'); dot != std::string::npos && dot > 0) talk.erase(dot);
  return parse_transcript(read_file(path), talk, punctuation);
}

std::string format_transcript(const TimedTranscript& t) {
  std::string out;
  for (const auto& tt : t.tokens) {
    out += tt.token.text;
    out += '\t';
    out += std::to_string(tt.start_ms);
    out += '\t';
    out += std::to_string(tt.end_ms);
    out += '\t';
    out += std::to_string(tt.sentence_id);
    out += '\n';
  }
  return out;
}

TimedTranscript bundled_transcript() {
  return parse_transcript(kBundledFixture, "talk10");
}

std::string encode_log_entry(const LogEntry& e) {
  ordered_json payload = ordered_json::object();
  payload["sentence"] = e.sentence;
  switch (e.kind) {
    case EventKind::kAsrEmitted:
      payload["hypothesis"] = e.text;
      payload["final"] = e.flag;
      break;
    case EventKind::kSourceTokenCommitted:
      payload["index"] = e.index;
      payload["token"] = e.text;
      payload["revised"] = e.flag;
      break;
    case EventKind::kTargetTokenDecoded:
      payload["index"] = e.index;
      payload["token"] = e.text;
      payload["mode"] = e.mode;
      break;
    case EventKind::kTtsEnqueued:
      payload["index"] = e.index;
      payload["token"] = e.text;
      payload["duration_ms"] = e.value;
      break;
    case EventKind::kPlaybackStarted:
    case EventKind::kPlaybackFinished:
      payload["index"] = e.index;
      payload["token"] = e.text;
      payload["pause"] = e.flag;
      break;
    case EventKind::kPauseInserted:
      payload["index"] = e.index;
      payload["duration_ms"] = e.value;
      break;
    case EventKind::kSentenceBoundary:
      payload["talk_id"] = e.text;
      payload["src_len"] = e.value;
      break;
  }
  ordered_json j;
  j["t_ms"] = e.t_ms;
  j["kind"] = std::string(to_string(e.kind));
  j["payload"] = std::move(payload);
  return j.dump();
}

LogEntry decode_log_entry(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParse, std::string("malformed log line: ") + ex.what());
  }
  try {
    LogEntry e;
    e.t_ms = j.at("t_ms").get<TimeMs>();
    const auto kind_name = j.at("kind").get<std::string>();
    const auto kind = parse_event_kind(kind_name);
    if (!kind) fail(ErrorCode::kParse, "unknown event kind '" + kind_name + "'");
    e.kind = *kind;
    const auto& p = j.at("payload");
    e.sentence = p.at("sentence").get<int>();
    switch (e.kind) {
      case EventKind::kAsrEmitted:
        e.text = p.at("hypothesis").get<std::string>();
        e.flag = p.at("final").get<bool>();
        break;
      case EventKind::kSourceTokenCommitted:
        e.index = p.at("index").get<int>();
        e.text = p.at("token").get<std::string>();
        e.flag = p.at("revised").get<bool>();
        break;
      case EventKind::kTargetTokenDecoded:
        e.index = p.at("index").get<int>();
        e.text = p.at("token").get<std::string>();
        e.mode = p.at("mode").get<std::string>();
        break;
      case EventKind::kTtsEnqueued:
        e.index = p.at("index").get<int>();
        e.text = p.at("token").get<std::string>();
        e.value = p.at("duration_ms").get<std::int64_t>();
        break;
      case EventKind::kPlaybackStarted:
      case EventKind::kPlaybackFinished:
        e.index = p.at("index").get<int>();
        e.text = p.at("token").get<std::string>();
        e.flag = p.at("pause").get<bool>();
        break;
      case EventKind::kPauseInserted:
        e.index = p.at("index").get<int>();
        e.value = p.at("duration_ms").get<std::int64_t>();
        break;
      case EventKind::kSentenceBoundary:
        e.text = p.at("talk_id").get<std::string>();
        e.value = p.at("src_len").get<std::int64_t>();
        break;
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParse, std::string("log line missing field: ") + ex.what());
  }
}

std::string to_jsonl(const SimulationLog& log) {
  std::string out;
  for (const auto& e : log.entries) {
    out += encode_log_entry(e);
    out += '\n';
  }
  return out;
}

SimulationLog parse_jsonl(std::string_view text) {
  SimulationLog log;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      log.entries.push_back(decode_log_entry(line));
    } catch (const Error& ex) {
      fail(ex.code(), "line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return log;
}

SimulationLog load_jsonl(const std::string& path) { return parse_jsonl(read_file(path)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path + "'");
}

}  // namespace simulstream

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

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "simulstream/simulstream.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;

// Applies a flat JSON object of option values to a subcommand. Keys are
// long flag names written with '-' or '_'; flags given on the command line
// win over the file.
void apply_json_config(CLI::App* app, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ConfigError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CLI::ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw CLI::ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    CLI::Option* opt = app->get_option_no_throw("--" + name);
    if (opt == nullptr || name == "config") {
      throw CLI::ConfigError("unknown config key '" + key + "'");
    }
    if (opt->count() > 0) continue;
    if (value.is_string()) {
      opt->add_result(value.get<std::string>());
    } else if (value.is_number() || value.is_boolean()) {
      opt->add_result(value.dump());
    } else {
      throw CLI::ConfigError("config key '" + key + "' must hold a scalar");
    }
    opt->run_callback();
  }
}

struct CString {
  char* p = nullptr;
  ~CString() { ss_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct TranscriptHandle {
  ss_transcript* p = nullptr;
  ~TranscriptHandle() { ss_transcript_free(p); }
};

struct LogHandle {
  ss_log* p = nullptr;
  LogHandle() = default;
  LogHandle(LogHandle&& o) noexcept : p(std::exchange(o.p, nullptr)) {}
  LogHandle& operator=(LogHandle&&) = delete;
  ~LogHandle() { ss_log_free(p); }
};

// Failure from the library, carrying the exit code to use.
struct Failure {
  int exit_code;
  std::string message;
};

void check(ss_status status, const std::string& context) {
  if (status == SS_OK) return;
  const int code = status == SS_ERR_INVALID_ARGUMENT ? kExitUsage : kExitInvalid;
  throw Failure{code, context + ": " + ss_last_error()};
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kExitInvalid, "cannot open '" + path + "' for writing"};
  out << content;
  if (!out) throw Failure{kExitInvalid, "failed to write '" + path + "'"};
}

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitInvalid, "cannot open '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void parse_rational(const std::string& text, int64_t& num, int64_t& den, const char* what) {
  check(ss_parse_rational(text.c_str(), &num, &den), what);
}

// --- shared run options -----------------------------------------------------

struct RunOptions {
  std::string mode = "sat";
  int k = 3;
  std::string ratio = "1";
  std::string compensation;
  uint64_t seed = 0;
  std::string table;
  int target_token_chars = 6;
  int64_t starvation_threshold_ms = 150;
  int64_t pause_decode_timeout_ms = 1000;
  int filler_budget = 3;
  int64_t base_ms_per_char = 60;
  int64_t min_token_ms = 120;
  int64_t pause_ms = 200;
  int startup_lag_tokens = 2;
  int64_t enqueue_delay_ms = 0;
  double revise_prob = 0.0;
  int64_t asr_latency_ms = 1000;
  int64_t asr_period_ms = 250;

  static RunOptions from_library_defaults() {
    ss_config c;
    ss_config_init(&c);
    RunOptions o;
    o.mode = ss_mode_name(c.mode);
    o.k = c.k;
    o.ratio = c.ratio_den == 1 ? std::to_string(c.ratio_num)
                               : std::to_string(c.ratio_num) + "/" + std::to_string(c.ratio_den);
    o.seed = c.seed;
    o.target_token_chars = c.target_token_chars;
    o.starvation_threshold_ms = c.starvation_threshold_ms;
    o.pause_decode_timeout_ms = c.pause_decode_timeout_ms;
    o.filler_budget = c.filler_budget;
    o.base_ms_per_char = c.base_ms_per_char;
    o.min_token_ms = c.min_token_ms;
    o.pause_ms = c.pause_ms;
    o.startup_lag_tokens = c.startup_lag_tokens;
    o.enqueue_delay_ms = c.enqueue_delay_ms;
    o.revise_prob = c.revise_prob;
    o.asr_latency_ms = c.asr_latency_ms;
    o.asr_period_ms = c.asr_emit_period_ms;
    return o;
  }

  void add_asr(CLI::App* app) {
    app->add_option("--seed", seed, "Seed for all randomness");
    app->add_option("--revise-prob", revise_prob, "Chance that a partial hypothesis garbles its last word")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--asr-latency-ms", asr_latency_ms, "Recognizer delay per event");
    app->add_option("--asr-period-ms", asr_period_ms, "Interval between partial hypotheses");
  }

  void add_all(CLI::App* app) {
    app->add_option("--mode", mode, "Controller mode")
        ->check(CLI::IsMember({"waitk", "waitk-sat", "sat", "segment", "full"}));
    app->add_option("--k", k, "Initial wait in source tokens");
    app->add_option("--ratio", ratio, "Target/source length ratio of the ratio oracle");
    app->add_option("--c", compensation,
                    "Fixed test-time compensation rate for sat mode (empty: adaptive)");
    app->add_option("--table", table, "SRC:/TGT: translation table (replaces the ratio oracle)");
    app->add_option("--target-token-chars", target_token_chars, "Length of synthetic target tokens");
    app->add_option("--starvation-threshold-ms", starvation_threshold_ms,
                    "Buffered speech below which an extra token is forced");
    app->add_option("--pause-decode-timeout-ms", pause_decode_timeout_ms,
                    "Source silence after which decoding runs to a pause token");
    app->add_option("--filler-budget", filler_budget, "Forced extra tokens allowed per sentence");
    app->add_option("--base-ms-per-char", base_ms_per_char, "Speech duration per character");
    app->add_option("--min-token-ms", min_token_ms, "Shortest spoken token");
    app->add_option("--pause-ms", pause_ms, "Silence for a pause token");
    app->add_option("--startup-lag-tokens", startup_lag_tokens, "Tokens queued before a sentence starts playing")
        ->check(CLI::IsMember({1, 2}));
    app->add_option("--enqueue-delay-ms", enqueue_delay_ms, "Synthesis time per token");
    add_asr(app);
  }

  ss_config to_config() const {
    ss_config c;
    ss_config_init(&c);
    check(ss_parse_mode(mode.c_str(), &c.mode), "--mode");
    c.k = k;
    parse_rational(ratio, c.ratio_num, c.ratio_den, "--ratio");
    if (!compensation.empty()) {
      c.has_compensation = 1;
      parse_rational(compensation, c.compensation_num, c.compensation_den, "--c");
    }
    c.table_path = table.empty() ? nullptr : table.c_str();
    c.target_token_chars = target_token_chars;
    c.starvation_threshold_ms = starvation_threshold_ms;
    c.pause_decode_timeout_ms = pause_decode_timeout_ms;
    c.filler_budget = filler_budget;
    c.base_ms_per_char = base_ms_per_char;
    c.min_token_ms = min_token_ms;
    c.pause_ms = pause_ms;
    c.startup_lag_tokens = startup_lag_tokens;
    c.enqueue_delay_ms = enqueue_delay_ms;
    c.revise_prob = revise_prob;
    c.asr_latency_ms = asr_latency_ms;
    c.asr_emit_period_ms = asr_period_ms;
    c.seed = seed;
    return c;
  }
};

// --- simulate -----------------------------------------------------------------

struct SimulateCommand {
  RunOptions run = RunOptions::from_library_defaults();
  std::string config;
  std::string transcript;
  std::string out;
  std::string schedule_csv;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON file with option values (flags override it)");
    app->add_option("--transcript", transcript, "Timed transcript TSV");
    app->add_option("--out", out, "Log JSONL destination (stdout if empty)");
    app->add_option("--schedule-csv", schedule_csv, "Also write the playback schedule as CSV");
    run.add_all(app);
  }

  int execute() const {
    if (transcript.empty()) throw Failure{kExitUsage, "simulate: --transcript is required"};
    TranscriptHandle t;
    check(ss_transcript_load(transcript.c_str(), &t.p), "transcript");
    const ss_config config = run.to_config();
    LogHandle log;
    check(ss_simulate(t.p, &config, &log.p), "simulate");

    CString jsonl;
    check(ss_log_to_jsonl(log.p, &jsonl.p), "log");
    write_output(out, jsonl.str());
    if (!schedule_csv.empty()) {
      CString csv;
      check(ss_log_playback_csv(log.p, &csv.p), "schedule");
      write_output(schedule_csv, csv.str());
    }
    size_t violations = 0;
    check(ss_log_violation_count(log.p, &violations), "validate");
    if (violations > 0) {
      std::cerr << "log failed validation: " << violations << " violation(s)\n";
      return kExitInvalid;
    }
    return kExitOk;
  }
};

// --- asr sim --------------------------------------------------------------------

struct AsrSimCommand {
  RunOptions run = RunOptions::from_library_defaults();
  std::string transcript;
  std::string out;

  void attach(CLI::App* app) {
    app->add_option("--transcript", transcript, "Timed transcript TSV")->required();
    app->add_option("--out", out, "Event JSONL destination (stdout if empty)");
    run.add_asr(app);
  }

  int execute() const {
    TranscriptHandle t;
    check(ss_transcript_load(transcript.c_str(), &t.p), "transcript");
    const ss_config config = run.to_config();
    CString events;
    check(ss_asr_events_jsonl(t.p, &config, &events.p), "asr");
    write_output(out, events.str());
    return kExitOk;
  }
};

// --- policy gen -----------------------------------------------------------------

struct PolicyGenCommand {
  std::string lengths;
  int k = 3;
  std::string out;

  void attach(CLI::App* app) {
    app->add_option("--lengths", lengths, "File of `src_len<TAB>tgt_len` lines")->required();
    app->add_option("--k", k, "Initial wait in source tokens");
    app->add_option("--out", out, "Destination (stdout if empty)");
  }

  int execute() const {
    std::istringstream in(read_input(lengths));
    std::string line;
    std::string result;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      std::istringstream fields(line);
      long src = 0;
      long tgt = 0;
      std::string extra;
      if (!(fields >> src >> tgt) || (fields >> extra)) {
        throw Failure{kExitInvalid, lengths + ":" + std::to_string(line_no) +
                                        ": expected `src_len<TAB>tgt_len`"};
      }
      ss_schedule s;
      check(ss_policy_schedule(static_cast<int>(src), static_cast<int>(tgt), k, &s),
            lengths + ":" + std::to_string(line_no));
      CString actions{s.actions};
      std::string rate = "NA";
      if (s.has_rate) {
        rate = std::to_string(s.rate_num);
        if (s.rate_den != 1) rate += "/" + std::to_string(s.rate_den);
      }
      result += rate + "\t" + actions.str() + "\n";
    }
    write_output(out, result);
    return kExitOk;
  }
};

// --- analyze ----------------------------------------------------------------------

struct RunSummary {
  std::string name;
  double bal = 0.0;
  int64_t max_latency = 0;
  int64_t total_target = 0;
  double mean_tail = 0.0;
  size_t gaps = 0;
  double bleu = -1.0;
};

RunSummary summarize(const std::string& name, ss_log* log, const std::string& refs) {
  RunSummary s;
  s.name = name;
  check(ss_log_bal(log, &s.bal), name);
  size_t n = 0;
  check(ss_log_latencies(log, nullptr, nullptr, 0, &n), name);
  std::vector<int64_t> lat(n);
  check(ss_log_latencies(log, nullptr, lat.data(), n, &n), name);
  s.max_latency = lat.empty() ? 0 : *std::max_element(lat.begin(), lat.end());
  check(ss_log_lengths(log, &s.total_target, &s.mean_tail), name);
  check(ss_log_gap_count(log, &s.gaps), name);
  if (!refs.empty()) {
    CString hyp;
    check(ss_log_target_text(log, &hyp.p), name);
    check(ss_bleu(hyp.p, refs.c_str(), &s.bleu), name + " BLEU");
  }
  return s;
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct AnalyzeCommand {
  std::vector<std::string> logs;
  std::string out;
  std::string compare;
  std::string refs;

  void attach(CLI::App* app) {
    app->add_option("logs", logs, "Simulation logs (JSONL)")->required();
    app->add_option("--out", out, "Latency report CSV (stdout if empty)");
    app->add_option("--compare", compare, "Per-run comparison CSV for quality/latency plots");
    app->add_option("--refs", refs, "Reference translation, one sentence per line, for BLEU");
  }

  int execute() const {
    const std::string ref_text = refs.empty() ? std::string() : read_input(refs);
    std::string report;
    std::string table =
        "run,bal_ms (artifact definition),max_ending_latency_ms,target_tokens,mean_tail_tokens,"
        "gaps,bleu\n";
    for (const auto& path : logs) {
      LogHandle log;
      check(ss_log_load(path.c_str(), &log.p), path);
      CString csv;
      check(ss_log_latency_csv(log.p, &csv.p), path);
      if (logs.size() > 1) report += "# run: " + path + "\n";
      report += csv.str();
      const auto s = summarize(path, log.p, ref_text);
      if (s.bleu >= 0) report += "bleu," + fixed3(s.bleu) + "\n";
      if (logs.size() > 1) report += "\n";
      table += s.name + "," + fixed3(s.bal) + "," + std::to_string(s.max_latency) + "," +
               std::to_string(s.total_target) + "," + fixed3(s.mean_tail) + "," +
               std::to_string(s.gaps) + "," + (s.bleu >= 0 ? fixed3(s.bleu) : "") + "\n";
    }
    write_output(out, report);
    if (!compare.empty()) write_output(compare, table);
    return kExitOk;
  }
};

// --- demo -------------------------------------------------------------------------

struct DemoCommand {
  RunOptions run = RunOptions::from_library_defaults();

  DemoCommand() { run.ratio = "5/4"; }

  void attach(CLI::App* app) {
    app->add_option("--k", run.k, "Initial wait in source tokens");
    app->add_option("--ratio", run.ratio, "Target/source length ratio");
    app->add_option("--seed", run.seed, "Seed for all randomness");
    app->add_option("--target-token-chars", run.target_token_chars,
                    "Length of synthetic target tokens");
  }

  int execute() const {
    TranscriptHandle t;
    check(ss_transcript_bundled(&t.p), "bundled transcript");
    const std::vector<std::string> modes = {"waitk", "waitk-sat", "sat", "segment", "full"};

    std::vector<std::future<LogHandle>> jobs;
    for (const auto& mode : modes) {
      RunOptions o = run;
      o.mode = mode;
      const ss_config config = o.to_config();
      jobs.push_back(std::async(std::launch::async, [config, &t, mode] {
        LogHandle log;
        check(ss_simulate(t.p, &config, &log.p), mode);
        return log;
      }));
    }

    size_t sentences = ss_transcript_sentence_count(t.p);
    std::printf("bundled talk: %zu sentences, k=%d, ratio=%s, seed=%llu\n\n", sentences, run.k,
                run.ratio.c_str(), static_cast<unsigned long long>(run.seed));
    std::printf("%-10s %10s %10s %10s %26s %8s %6s\n", "mode", "first_ms", "last_ms", "max_ms",
                "bal_ms (artifact definition)", "tokens", "gaps");
    for (size_t i = 0; i < modes.size(); ++i) {
      LogHandle log = jobs[i].get();
      size_t n = 0;
      check(ss_log_latencies(log.p, nullptr, nullptr, 0, &n), modes[i]);
      std::vector<int64_t> lat(n);
      check(ss_log_latencies(log.p, nullptr, lat.data(), n, &n), modes[i]);
      const auto s = summarize(modes[i], log.p, {});
      std::printf("%-10s %10lld %10lld %10lld %26.1f %8lld %6zu\n", modes[i].c_str(),
                  static_cast<long long>(lat.front()), static_cast<long long>(lat.back()),
                  static_cast<long long>(s.max_latency), s.bal,
                  static_cast<long long>(s.total_target), s.gaps);
    }
    return kExitOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  const char* level = std::getenv("SIMULSTREAM_LOG");
  if (ss_set_log_level(level != nullptr && *level != '\0' ? level : "quiet") != SS_OK) {
    std::cerr << "SIMULSTREAM_LOG: " << ss_last_error() << "\n";
    return kExitUsage;
  }

  CLI::App app{"Simultaneous speech-to-speech translation pipeline simulator"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ss_version()));

  SimulateCommand simulate;
  auto* simulate_app = app.add_subcommand("simulate", "Run the full pipeline on a transcript");
  simulate.attach(simulate_app);

  AsrSimCommand asr_sim;
  auto* asr = app.add_subcommand("asr", "Streaming recognizer tools");
  asr->require_subcommand(1);
  asr_sim.attach(asr->add_subcommand("sim", "Emit the recognizer's event stream as JSONL"));

  PolicyGenCommand policy_gen;
  auto* policy = app.add_subcommand("policy", "Read/write policy tools");
  policy->require_subcommand(1);
  policy_gen.attach(policy->add_subcommand("gen", "Derive compensation rates and action schedules"));

  AnalyzeCommand analyze;
  analyze.attach(app.add_subcommand("analyze", "Latency, length and BLEU report over logs"));

  DemoCommand demo;
  demo.attach(app.add_subcommand("demo", "Compare all modes on the bundled talk"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    if (!simulate.config.empty()) apply_json_config(simulate_app, simulate.config);
  } catch (const CLI::Error& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (app.got_subcommand("simulate")) return simulate.execute();
    if (asr->got_subcommand("sim")) return asr_sim.execute();
    if (policy->got_subcommand("gen")) return policy_gen.execute();
    if (app.got_subcommand("analyze")) return analyze.execute();
    if (app.got_subcommand("demo")) return demo.execute();
  } catch (const Failure& f) {
    std::cerr << f.message << "\n";
    return f.exit_code;
  }
  return kExitUsage;
}

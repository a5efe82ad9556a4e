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

#include "simulstream/translator.hpp"

#include <algorithm>
#include <sstream>

#include "simulstream/error.hpp"

namespace simulstream {

namespace {

std::vector<std::string> spoken_words(std::span<const Token> tokens) {
  std::vector<std::string> out;
  for (const auto& tok : tokens) {
    if (!tok.is_pause) out.push_back(tok.text);
  }
  return out;
}

std::string describe(std::span<const Token> tokens) {
  std::string out;
  for (const auto& tok : tokens) {
    if (!out.empty()) out += ' ';
    out += tok.text;
  }
  return out;
}

}  // namespace

// --- TranslationTable -----------------------------------------------------

TranslationTable TranslationTable::parse(std::string_view text,
                                         const PunctuationSet& punctuation) {
  TranslationTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<Token> src;
  bool have_src = false;
  std::size_t line_no = 0;
  auto words = [](const std::string& s) {
    std::istringstream ws(s);
    std::vector<std::string> out;
    for (std::string w; ws >> w;) out.push_back(w);
    return out;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      if (have_src) {
        fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": SRC without TGT");
      }
      continue;
    }
    if (line.rfind("SRC:", 0) == 0) {
      if (have_src) {
        fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": SRC without TGT");
      }
      src.clear();
      for (auto& w : words(line.substr(4))) src.push_back(punctuation.make_token(std::move(w)));
      if (src.empty()) fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": empty SRC");
      have_src = true;
    } else if (line.rfind("TGT:", 0) == 0) {
      if (!have_src) {
        fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": TGT without SRC");
      }
      std::vector<Token> tgt;
      for (auto& w : words(line.substr(4))) tgt.push_back(punctuation.make_token(std::move(w)));
      if (tgt.empty()) fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": empty TGT");
      table.add(std::move(src), std::move(tgt));
      src.clear();
      have_src = false;
    } else {
      fail(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                  ": expected 'SRC:' or 'TGT:'");
    }
  }
  if (have_src) fail(ErrorCode::kParse, "table ends with SRC without TGT");
  return table;
}

void TranslationTable::add(std::vector<Token> source, std::vector<Token> target) {
  entries_.push_back({std::move(source), std::move(target)});
}

const TranslationTable::Entry* TranslationTable::find_by_prefix(
    std::span<const Token> prefix) const {
  // ASR hypotheses carry punctuation only in the final step, so matching
  // runs on spoken words.
  const auto words = spoken_words(prefix);
  for (const auto& e : entries_) {
    const auto src_words = spoken_words(e.source);
    if (words.size() <= src_words.size() &&
        std::equal(words.begin(), words.end(), src_words.begin())) {
      return &e;
    }
  }
  return nullptr;
}

const TranslationTable::Entry* TranslationTable::find_exact(
    std::span<const Token> source) const {
  for (const auto& e : entries_) {
    if (e.source.size() == source.size() &&
        std::equal(e.source.begin(), e.source.end(), source.begin(),
                   [](const Token& a, const Token& b) { return a.text == b.text; })) {
      return &e;
    }
  }
  return nullptr;
}

// --- OracleSpec -------------------------------------------------------------

void OracleSpec::validate() const {
  if (kind == OracleKind::kRatio) {
    if (ratio <= 0) fail(ErrorCode::kValidation, "oracle ratio must be > 0");
    if (target_token_chars < 1) {
      fail(ErrorCode::kValidation, "target_token_chars must be >= 1");
    }
  } else if (!table) {
    fail(ErrorCode::kValidation, "table oracle needs a translation table");
  }
}

std::string_view to_string(DecodeMode mode) {
  switch (mode) {
    case DecodeMode::kNormal: return "normal";
    case DecodeMode::kForceExtra: return "force_extra";
    case DecodeMode::kDecodeToPause: return "decode_to_pause";
  }
  return "?";
}

// --- OracleTranslator -------------------------------------------------------

OracleTranslator::OracleTranslator(OracleSpec spec, DecodeOptions options,
                                   int sentence_id, const PunctuationSet& punctuation)
    : spec_(std::move(spec)), options_(options), punctuation_(punctuation) {
  spec_.validate();
  if (options_.k < 1) fail(ErrorCode::kValidation, "decode k must be >= 1");
  if (options_.length_model == LengthModel::kCompensated && options_.compensation <= -1) {
    fail(ErrorCode::kValidation, "compensation rate must be > -1");
  }
  state_.sentence_id = sentence_id;
}

void OracleTranslator::read(std::span<const Token> tokens) {
  if (state_.source_complete && !tokens.empty()) {
    fail(ErrorCode::kState, "source already complete");
  }
  state_.src_prefix.insert(state_.src_prefix.end(), tokens.begin(), tokens.end());
}

void OracleTranslator::revise_source(std::vector<Token> prefix) {
  state_.src_prefix = std::move(prefix);
}

void OracleTranslator::mark_source_complete() {
  if (state_.source_complete) return;
  state_.source_complete = true;
  if (options_.length_model == LengthModel::kForcedTail) state_.tail_remaining = options_.k;
}

int OracleTranslator::stretched(int natural) const {
  if (options_.length_model != LengthModel::kCompensated || natural <= options_.k) {
    return natural;
  }
  const auto extra = (Rational(1) + options_.compensation) * (natural - options_.k);
  return options_.k + static_cast<int>(round_half_away(extra));
}

int OracleTranslator::final_length() const {
  const auto n = static_cast<std::int64_t>(state_.src_prefix.size());
  const int natural = static_cast<int>(round_half_away(spec_.ratio * n));
  return std::max(1, stretched(natural));
}

int OracleTranslator::quota() const {
  if (state_.source_complete) {
    return std::max(final_length() - 1, state_.content_emitted);
  }
  // round(ratio * m), capped so that a sentence ending right after the next
  // source token can still close with its pause token inside its length.
  const auto m = static_cast<std::int64_t>(state_.src_prefix.size());
  const int now = stretched(static_cast<int>(round_half_away(spec_.ratio * m)));
  const int next = stretched(static_cast<int>(round_half_away(spec_.ratio * (m + 1))));
  return std::max(0, std::min(now, std::max(1, next) - 1));
}

Token OracleTranslator::content_token(int ordinal) const {
  std::string text = "T" + std::to_string(state_.sentence_id) + "_" + std::to_string(ordinal);
  if (static_cast<int>(text.size()) < spec_.target_token_chars) {
    text.append(static_cast<std::size_t>(spec_.target_token_chars) - text.size(), 'x');
  }
  return Token{std::move(text), false};
}

Token OracleTranslator::final_pause() const {
  if (!state_.src_prefix.empty() && state_.src_prefix.back().is_pause) {
    return state_.src_prefix.back();
  }
  return punctuation_.make_token(".");
}

Decoded OracleTranslator::emit(Token token, bool beyond_quota) {
  if (token.is_pause) {
    if (state_.source_complete) state_.sentence_done = true;
  } else {
    ++state_.content_emitted;
    if (beyond_quota) ++state_.extra_emitted;
  }
  state_.tgt_prefix.push_back(token);
  return Decoded{Decoded::Kind::kToken, std::move(token)};
}

Decoded OracleTranslator::next_token(DecodeMode mode) {
  if (state_.sentence_done) {
    fail(ErrorCode::kState, "next_token called after sentence " +
                                std::to_string(state_.sentence_id) + " is done");
  }
  if (state_.src_prefix.empty()) {
    fail(ErrorCode::kState, "prefix-to-prefix decoding needs a non-empty source prefix");
  }
  return spec_.kind == OracleKind::kTable ? next_table() : next_ratio(mode);
}

Decoded OracleTranslator::next_ratio(DecodeMode mode) {
  const int next_ordinal = state_.content_emitted + 1;
  if (state_.source_complete) {
    if (options_.length_model == LengthModel::kForcedTail) {
      if (state_.tail_remaining > 1) {
        --state_.tail_remaining;
        return emit(content_token(next_ordinal), false);
      }
      state_.tail_remaining = 0;
      return emit(final_pause(), false);
    }
    if (state_.content_emitted < quota()) return emit(content_token(next_ordinal), false);
    return emit(final_pause(), false);
  }

  const bool under_quota = state_.content_emitted < quota();
  switch (mode) {
    case DecodeMode::kNormal:
      if (!under_quota) return Decoded{Decoded::Kind::kHold, {}};
      return emit(content_token(next_ordinal), false);
    case DecodeMode::kForceExtra:
      return emit(content_token(next_ordinal), !under_quota);
    case DecodeMode::kDecodeToPause:
      if (under_quota) return emit(content_token(next_ordinal), false);
      return emit(punctuation_.make_token(","), false);
  }
  return Decoded{Decoded::Kind::kHold, {}};
}

Decoded OracleTranslator::next_table() {
  const auto* entry = spec_.table->find_by_prefix(state_.src_prefix);
  if (entry == nullptr) {
    fail(ErrorCode::kValidation, "no table entry for source '" +
                                     describe(state_.src_prefix) + "'");
  }
  const auto j = state_.tgt_prefix.size();
  if (j >= entry->target.size()) {
    state_.sentence_done = true;
    return Decoded{Decoded::Kind::kSentenceEnd, {}};
  }
  Token tok = entry->target[j];
  if (!tok.is_pause) ++state_.content_emitted;
  state_.tgt_prefix.push_back(tok);
  return Decoded{Decoded::Kind::kToken, std::move(tok)};
}

std::vector<Token> full_sentence_translate(std::span<const Token> src,
                                           const OracleSpec& spec, int sentence_id,
                                           const PunctuationSet& punctuation) {
  spec.validate();
  if (src.empty() || !src.back().is_pause) {
    fail(ErrorCode::kInvalidArgument, "full-sentence source must end with a pause token");
  }
  if (spec.kind == OracleKind::kTable) {
    const auto* entry = spec.table->find_exact(src);
    if (entry == nullptr) {
      fail(ErrorCode::kValidation, "no table entry for sentence '" + describe(src) + "'");
    }
    return entry->target;
  }
  OracleTranslator oracle(spec, DecodeOptions{}, sentence_id, punctuation);
  oracle.read(src);
  oracle.mark_source_complete();
  std::vector<Token> out;
  while (!oracle.state().sentence_done) {
    out.push_back(oracle.next_token(DecodeMode::kNormal).token);
  }
  return out;
}

}  // namespace simulstream

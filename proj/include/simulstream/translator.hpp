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

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simulstream/core.hpp"
#include "simulstream/rational.hpp"

namespace simulstream {

// Reference translations keyed by source sentence, loaded from blocks of
// `SRC:` / `TGT:` lines separated by blank lines.
class TranslationTable {
 public:
  struct Entry {
    std::vector<Token> source;
    std::vector<Token> target;
  };

  static TranslationTable parse(std::string_view text,
                                const PunctuationSet& punctuation = PunctuationSet::standard());

  void add(std::vector<Token> source, std::vector<Token> target);

  // First entry whose spoken words start with the spoken words of the
  // prefix, or nullptr. Pause tokens are ignored on both sides.
  const Entry* find_by_prefix(std::span<const Token> prefix) const;
  const Entry* find_exact(std::span<const Token> source) const;

  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<Entry> entries_;
};

enum class OracleKind { kRatio, kTable };

struct OracleSpec {
  OracleKind kind = OracleKind::kRatio;
  Rational ratio{1};           // target/source length ratio (ratio oracle)
  int target_token_chars = 6;  // synthetic target tokens are padded to this
  std::shared_ptr<const TranslationTable> table;

  void validate() const;
};

// How the simulated model decides the length of a sentence's translation.
enum class LengthModel {
  kNatural,      // wait-k trained: round(ratio * |src|) tokens
  kForcedTail,   // SAT trained, adaptive inference: closes with a k-token tail
  kCompensated,  // SAT trained at a fixed test-time compensation rate
};

struct DecodeOptions {
  LengthModel length_model = LengthModel::kNatural;
  int k = 1;
  Rational compensation{0};  // kCompensated only
};

enum class DecodeMode { kNormal, kForceExtra, kDecodeToPause };

std::string_view to_string(DecodeMode mode);

struct TranslatorState {
  int sentence_id = 0;
  std::vector<Token> src_prefix;
  std::vector<Token> tgt_prefix;
  bool source_complete = false;
  bool sentence_done = false;
  int content_emitted = 0;   // non-pause target tokens so far
  int extra_emitted = 0;     // tokens emitted beyond the running quota
  int tail_remaining = -1;   // kForcedTail: tokens left once the source ended
};

struct Decoded {
  enum class Kind { kToken, kHold, kSentenceEnd };
  Kind kind = Kind::kHold;
  Token token;
};

// Deterministic stand-in for a prefix-to-prefix translation model. Every
// output depends only on the source prefix read so far, the target prefix
// and the options.
class OracleTranslator {
 public:
  OracleTranslator(OracleSpec spec, DecodeOptions options, int sentence_id,
                   const PunctuationSet& punctuation = PunctuationSet::standard());

  // Appends newly read source tokens.
  void read(std::span<const Token> tokens);
  // Replaces the source prefix after an upstream revision; emitted target
  // tokens stay as they are.
  void revise_source(std::vector<Token> prefix);
  void mark_source_complete();

  // Faults (kState) once the sentence is done.
  Decoded next_token(DecodeMode mode);

  const TranslatorState& state() const { return state_; }

  // Content tokens allowed for the current source prefix.
  int quota() const;

 private:
  Decoded emit(Token token, bool beyond_quota);
  Decoded next_ratio(DecodeMode mode);
  Decoded next_table();
  Token content_token(int ordinal) const;
  Token final_pause() const;
  int final_length() const;
  int stretched(int natural) const;

  OracleSpec spec_;
  DecodeOptions options_;
  PunctuationSet punctuation_;
  TranslatorState state_;
};

// Whole-sentence translation. src must end with a pause token.
std::vector<Token> full_sentence_translate(
    std::span<const Token> src, const OracleSpec& spec, int sentence_id = 0,
    const PunctuationSet& punctuation = PunctuationSet::standard());

}  // namespace simulstream

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

#include <memory>
#include <string>
#include <vector>

#include "doctest.h"
#include "simulstream/error.hpp"
#include "simulstream/translator.hpp"
#include "support.hpp"

using namespace simulstream;
using testing::Gen;
using testing::words_of;

namespace {

OracleSpec ratio_spec(Rational r, int chars = 6) {
  OracleSpec s;
  s.kind = OracleKind::kRatio;
  s.ratio = r;
  s.target_token_chars = chars;
  return s;
}

const char* const kTable =
    "SRC: thank you , mister chairman .\n"
    "TGT: merci , monsieur le président .\n"
    "\n"
    "SRC: the meeting is adjourned .\n"
    "TGT: la séance est levée .\n";

OracleSpec table_spec() {
  OracleSpec s;
  s.kind = OracleKind::kTable;
  s.table = std::make_shared<const TranslationTable>(TranslationTable::parse(kTable));
  return s;
}

std::vector<Token> source_of(int n, bool with_stop = true) {
  std::vector<Token> out;
  for (int i = 0; i < n; ++i) out.push_back(Token{"w" + std::to_string(i), false});
  if (with_stop) out.push_back(PunctuationSet::standard().make_token("."));
  return out;
}

// round(p/q * m) with halves away from zero, for p, q, m > 0.
int ref_round(std::int64_t p, std::int64_t q, std::int64_t m) {
  return static_cast<int>((2 * p * m + q) / (2 * q));
}

std::vector<std::string> texts(const std::vector<Token>& toks) {
  std::vector<std::string> out;
  for (const auto& t : toks) out.push_back(t.text);
  return out;
}

}  // namespace

TEST_SUITE("translator") {
  TEST_CASE("ratio 1: third committed token unlocks the third target token") {
    OracleTranslator o(ratio_spec(Rational(1)), {}, 0);
    const auto src = source_of(3, false);
    o.read(std::span(src).first(2));
    REQUIRE(o.next_token(DecodeMode::kNormal).kind == Decoded::Kind::kToken);
    REQUIRE(o.next_token(DecodeMode::kNormal).kind == Decoded::Kind::kToken);
    CHECK(o.next_token(DecodeMode::kNormal).kind == Decoded::Kind::kHold);
    o.read(std::span(src).subspan(2));
    const auto d = o.next_token(DecodeMode::kNormal);
    REQUIRE(d.kind == Decoded::Kind::kToken);
    CHECK(d.token.text == "T0_3xx");
    CHECK(o.state().content_emitted == 3);
  }

  TEST_CASE("ratio 5/4: quota follows round(1.25 m)") {
    OracleTranslator o(ratio_spec(Rational(5, 4)), {}, 2);
    const auto src = source_of(8, false);
    for (int m = 1; m <= 8; ++m) {
      o.read(std::span(src).subspan(static_cast<std::size_t>(m - 1), 1));
      CHECK(o.quota() == ref_round(5, 4, m));
      while (o.next_token(DecodeMode::kNormal).kind == Decoded::Kind::kToken) {
      }
      CHECK(o.state().content_emitted == ref_round(5, 4, m));
      if (m == 4) {
        CHECK(o.state().tgt_prefix.back().text == "T2_5xx");
      }
    }
  }

  TEST_CASE("table oracle ends after its reference") {
    auto spec = table_spec();
    OracleTranslator o(spec, {}, 0);
    const auto src = words_of({"the", "meeting", "is", "adjourned", "."});
    o.read(src);
    o.mark_source_complete();
    std::vector<Token> out;
    for (int i = 0; i < 5; ++i) {
      const auto d = o.next_token(DecodeMode::kNormal);
      REQUIRE(d.kind == Decoded::Kind::kToken);
      out.push_back(d.token);
    }
    CHECK(texts(out) == std::vector<std::string>{"la", "séance", "est", "levée", "."});
    CHECK(o.next_token(DecodeMode::kNormal).kind == Decoded::Kind::kSentenceEnd);
    CHECK(o.state().sentence_done);
    CHECK_THROWS_AS(o.next_token(DecodeMode::kNormal), Error);
  }

  TEST_CASE("full sentence translation") {
    const auto six = full_sentence_translate(source_of(5), ratio_spec(Rational(1)));
    REQUIRE(six.size() == 6);
    CHECK(six.back().is_pause);
    for (std::size_t i = 0; i + 1 < six.size(); ++i) CHECK_FALSE(six[i].is_pause);

    CHECK(full_sentence_translate(source_of(19), ratio_spec(Rational(85, 100))).size() == 17);

    const auto table = full_sentence_translate(
        words_of({"thank", "you", ",", "mister", "chairman", "."}), table_spec());
    CHECK(texts(table) ==
          std::vector<std::string>{"merci", ",", "monsieur", "le", "président", "."});

    CHECK_THROWS_AS(full_sentence_translate(words_of({"unknown", "words", "."}), table_spec()),
                    Error);
    CHECK_THROWS_AS(full_sentence_translate(source_of(3, false), ratio_spec(Rational(1))), Error);
  }

  TEST_CASE("full sentence length is round(ratio * n) for many ratios") {
    for (auto [p, q] : {std::pair{1, 1}, {5, 4}, {85, 100}, {3, 2}, {2, 3}, {7, 5}}) {
      for (int words = 0; words <= 30; ++words) {
        const auto src = source_of(words);
        const int n = static_cast<int>(src.size());
        const int want = std::max(1, ref_round(p, q, n));
        CHECK(static_cast<int>(full_sentence_translate(src, ratio_spec(Rational(p, q))).size()) ==
              want);
      }
    }
  }

  TEST_CASE("table oracle fed word by word reproduces the full translation") {
    auto spec = table_spec();
    for (const auto* sentence : {"thank you , mister chairman .", "the meeting is adjourned ."}) {
      std::vector<Token> src;
      std::string w;
      for (const char* c = sentence;; ++c) {
        if (*c == ' ' || *c == '\0') {
          src.push_back(PunctuationSet::standard().make_token(w));
          w.clear();
          if (*c == '\0') break;
        } else {
          w += *c;
        }
      }
      OracleTranslator o(spec, {}, 0);
      std::vector<Token> out;
      for (std::size_t i = 0; i < src.size(); ++i) {
        // ASR delivers punctuation only with the final hypothesis.
        if (src[i].is_pause && i + 1 < src.size()) continue;
        o.read(std::span(src).subspan(i, 1));
        const auto d = o.next_token(DecodeMode::kNormal);
        if (d.kind == Decoded::Kind::kToken) out.push_back(d.token);
      }
      o.mark_source_complete();
      while (true) {
        const auto d = o.next_token(DecodeMode::kNormal);
        if (d.kind == Decoded::Kind::kSentenceEnd) break;
        out.push_back(d.token);
      }
      CHECK(out == full_sentence_translate(src, spec));
    }
  }

  TEST_CASE("outputs depend only on the prefix read so far") {
    Gen g(77);
    for (int trial = 0; trial < 200; ++trial) {
      const int prefix_len = g.between(1, 12);
      const Rational ratio(g.between(1, 20), g.between(4, 16));
      auto a_src = source_of(prefix_len + g.between(0, 10), false);
      auto b_src = a_src;
      for (std::size_t i = prefix_len; i < b_src.size(); ++i) b_src[i].text = g.word();
      OracleTranslator a(ratio_spec(ratio), {}, 1);
      OracleTranslator b(ratio_spec(ratio), {}, 1);
      a.read(std::span(a_src).first(prefix_len));
      b.read(std::span(b_src).first(prefix_len));
      for (int step = 0; step < 6; ++step) {
        const auto mode = static_cast<DecodeMode>(g.between(0, 2));
        const auto da = a.next_token(mode);
        const auto db = b.next_token(mode);
        CHECK(da.kind == db.kind);
        CHECK(da.token == db.token);
      }
      CHECK(a.state().tgt_prefix == b.state().tgt_prefix);
    }
  }

  TEST_CASE("sentence length stays within floor/ceil of ratio * n under in-quota calls") {
    Gen g(31);
    for (int trial = 0; trial < 500; ++trial) {
      const auto p = g.between(1, 30);
      const auto q = g.between(5, 20);
      const auto src = source_of(g.between(0, 25));
      OracleTranslator o(ratio_spec(Rational(p, q)), {}, 0);
      std::size_t read = 0;
      while (read + 1 < src.size()) {
        if (read == 0 || g.coin()) {
          o.read(std::span(src).subspan(read++, 1));
          continue;
        }
        if (g.coin()) {
          o.next_token(DecodeMode::kNormal);
        } else if (o.state().content_emitted < o.quota()) {
          o.next_token(DecodeMode::kForceExtra);
        }
      }
      o.read(std::span(src).subspan(read));
      o.mark_source_complete();
      while (!o.state().sentence_done) o.next_token(DecodeMode::kNormal);
      const auto total = static_cast<std::int64_t>(o.state().tgt_prefix.size());
      const auto n = static_cast<std::int64_t>(src.size());
      const auto lo = std::max<std::int64_t>(1, p * n / q);
      const auto hi = std::max<std::int64_t>(1, (p * n + q - 1) / q);
      CAPTURE(p);
      CAPTURE(q);
      CAPTURE(n);
      CHECK(total >= lo);
      CHECK(total <= hi);
      CHECK(o.state().extra_emitted == 0);
      CHECK(o.state().tgt_prefix.back().is_pause);
    }
  }

  TEST_CASE("forced fillers beyond the quota lengthen the sentence by at most their count") {
    Gen g(8);
    for (int trial = 0; trial < 200; ++trial) {
      const auto src = source_of(g.between(2, 20));
      OracleTranslator o(ratio_spec(Rational(1)), {}, 0);
      const int budget = g.between(0, 3);
      int fillers = 0;
      for (std::size_t i = 0; i + 1 < src.size(); ++i) {
        o.read(std::span(src).subspan(i, 1));
        while (o.next_token(DecodeMode::kNormal).kind == Decoded::Kind::kToken) {
        }
        if (fillers < budget && g.coin()) {
          o.next_token(DecodeMode::kForceExtra);
          ++fillers;
        }
      }
      o.read(std::span(src).last(1));
      o.mark_source_complete();
      while (!o.state().sentence_done) o.next_token(DecodeMode::kNormal);
      const auto natural = static_cast<int>(src.size());
      CHECK(static_cast<int>(o.state().tgt_prefix.size()) <= natural + fillers);
      CHECK(static_cast<int>(o.state().tgt_prefix.size()) >= natural);
      CHECK(o.state().extra_emitted <= fillers);
    }
  }

  TEST_CASE("decode to pause closes a clause or the sentence") {
    OracleTranslator o(ratio_spec(Rational(1)), {}, 0);
    const auto src = source_of(4);
    o.read(std::span(src).first(2));
    CHECK(o.next_token(DecodeMode::kDecodeToPause).token.text == "T0_1xx");
    CHECK(o.next_token(DecodeMode::kDecodeToPause).token.text == "T0_2xx");
    const auto comma = o.next_token(DecodeMode::kDecodeToPause);
    CHECK(comma.token.is_pause);
    CHECK_FALSE(o.state().sentence_done);
    o.read(std::span(src).subspan(2));
    o.mark_source_complete();
    while (!o.state().sentence_done) o.next_token(DecodeMode::kDecodeToPause);
    CHECK(o.state().tgt_prefix.back().text == ".");
  }

  TEST_CASE("forced tail closes with exactly k tokens after the source ends") {
    for (int k = 1; k <= 5; ++k) {
      OracleTranslator o(ratio_spec(Rational(5, 4)), {LengthModel::kForcedTail, k, Rational(0)}, 0);
      const auto src = source_of(12);
      o.read(std::span(src).first(11));
      while (o.next_token(DecodeMode::kNormal).kind == Decoded::Kind::kToken) {
      }
      o.read(std::span(src).last(1));
      o.mark_source_complete();
      const auto before = o.state().tgt_prefix.size();
      while (!o.state().sentence_done) o.next_token(DecodeMode::kNormal);
      CHECK(o.state().tgt_prefix.size() - before == static_cast<std::size_t>(k));
    }
  }

  TEST_CASE("compensated length stretches the non-wait part by 1 + c") {
    for (auto [cp, cq] : {std::pair{-1, 5}, {-1, 10}, {0, 1}, {1, 10}, {1, 5}}) {
      for (int words = 3; words <= 20; ++words) {
        const auto src = source_of(words);
        const int k = 3;
        OracleTranslator o(ratio_spec(Rational(1)), {LengthModel::kCompensated, k, Rational(cp, cq)}, 0);
        o.read(src);
        o.mark_source_complete();
        while (!o.state().sentence_done) o.next_token(DecodeMode::kNormal);
        const int n = static_cast<int>(src.size());
        // k + round((1 + c) * (n - k)), halves away from zero.
        const int want = k + ref_round(cq + cp, cq, n - k);
        CHECK(static_cast<int>(o.state().tgt_prefix.size()) == want);
      }
    }
  }

  TEST_CASE("state and spec errors") {
    OracleTranslator o(ratio_spec(Rational(1)), {}, 0);
    CHECK_THROWS_AS(o.next_token(DecodeMode::kNormal), Error);
    CHECK_THROWS_AS(OracleTranslator(ratio_spec(Rational(0)), {}, 0), Error);
    CHECK_THROWS_AS(OracleTranslator(ratio_spec(Rational(1), 0), {}, 0), Error);
    OracleSpec no_table;
    no_table.kind = OracleKind::kTable;
    CHECK_THROWS_AS(no_table.validate(), Error);
    CHECK_THROWS_AS(TranslationTable::parse("TGT: x .\n"), Error);
    CHECK_THROWS_AS(TranslationTable::parse("SRC: x .\n\n"), Error);
    CHECK_THROWS_AS(TranslationTable::parse("hello\n"), Error);
  }

  TEST_CASE("table lookup by prefix ignores punctuation") {
    const auto table = TranslationTable::parse(kTable);
    CHECK(table.size() == 2);
    const auto* e = table.find_by_prefix(words_of({"thank", "you", "mister"}));
    REQUIRE(e != nullptr);
    CHECK(e->target.front().text == "merci");
    CHECK(table.find_by_prefix(words_of({"thank", "me"})) == nullptr);
    CHECK(table.find_exact(words_of({"thank", "you", "mister", "chairman", "."})) == nullptr);
  }
}

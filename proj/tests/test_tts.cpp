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

#include <string>
#include <vector>

#include "doctest.h"
#include "simulstream/error.hpp"
#include "simulstream/tts.hpp"
#include "support.hpp"

using namespace simulstream;
using testing::Gen;

namespace {

Token word(std::string text) { return PunctuationSet::standard().make_token(std::move(text)); }

DurationModel lag(int tokens) {
  DurationModel m;
  m.startup_lag_tokens = tokens;
  return m;
}

struct Arrival {
  Token token;
  TimeMs at = 0;
  int sentence = 0;
  bool ends = false;
};

// Straightforward replay of the look-ahead gate: a sentence's tokens are
// released together once `lag` of them have arrived (or the sentence ended,
// or the next sentence began), later ones on arrival; each plays when the
// voice is free.
std::vector<PlaybackItem> ref_play(const std::vector<Arrival>& in, const DurationModel& m) {
  std::vector<PlaybackItem> out;
  std::vector<PlaybackItem> held;
  int open = -1;
  int count = 0;
  bool started = false;
  auto flush = [&](TimeMs ready) {
    for (auto& it : held) {
      const TimeMs free_at = out.empty() ? 0 : out.back().play_end_ms;
      it.play_start_ms = std::max(ready, free_at);
      it.play_end_ms = it.play_start_ms + token_duration(it.token, m);
      out.push_back(it);
    }
    held.clear();
  };
  for (const auto& a : in) {
    if (a.sentence != open) {
      flush(a.at + m.enqueue_delay_ms);
      open = a.sentence;
      count = 0;
      started = false;
    }
    held.push_back({a.token, a.sentence, count++, a.at, 0, 0});
    if (started || count >= m.startup_lag_tokens || a.ends) {
      started = true;
      flush(a.at + m.enqueue_delay_ms);
    }
  }
  return out;
}

std::vector<Arrival> random_stream(Gen& g) {
  std::vector<Arrival> out;
  TimeMs now = g.between(0, 500);
  const int sentences = g.between(1, 4);
  for (int s = 0; s < sentences; ++s) {
    const int n = g.between(1, 10);
    for (int i = 0; i < n; ++i) {
      const bool last = i + 1 == n;
      const bool comma = !last && g.between(0, 6) == 0;
      out.push_back({word(last ? "." : comma ? "," : g.word()), now, s, last});
      now += g.between(0, 700);
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("tts") {
  TEST_CASE("token durations") {
    const DurationModel m;
    CHECK(token_duration(word("hello"), m) == 300);
    CHECK(token_duration(word("a"), m) == 120);
    CHECK(token_duration(word(","), m) == 200);
    CHECK(token_duration(word("séance"), m) == 360);
    CHECK(token_duration(word("。"), m) == 200);
  }

  TEST_CASE("single token with lag 1 plays immediately") {
    PlaybackSchedule s(lag(1));
    s = enqueue(s, word("hello"), 1000, 0);
    REQUIRE(s.items().size() == 1);
    CHECK(s.items()[0].play_start_ms == 1000);
    CHECK(s.items()[0].play_end_ms == 1300);
  }

  TEST_CASE("lag 2 holds the first token until the second arrives") {
    PlaybackSchedule s(lag(2));
    CHECK(s.enqueue(word("hello"), 1000, 0).empty());
    CHECK(s.pending().size() == 1);
    const auto released = s.enqueue(word("world"), 1100, 0);
    REQUIRE(released.size() == 2);
    CHECK(released[0].play_start_ms == 1100);
    CHECK(released[0].enqueue_ms == 1000);
    CHECK(released[1].play_start_ms == 1400);
  }

  TEST_CASE("busy voice pushes the next token back") {
    PlaybackSchedule s(lag(1));
    s.enqueue(Token{"abcdefghij", false}, 900, 0);  // [900, 1500)
    s.enqueue(word("hello"), 1200, 0);
    CHECK(s.items()[1].play_start_ms == 1500);
    CHECK(s.items()[1].play_end_ms == 1800);
  }

  TEST_CASE("sentence end and the next sentence release held tokens") {
    PlaybackSchedule s(lag(2));
    const auto out = s.enqueue(word("."), 500, 0, true);
    REQUIRE(out.size() == 1);
    CHECK(out[0].play_start_ms == 500);

    PlaybackSchedule t(lag(2));
    t.enqueue(word("yes"), 100, 0);
    const auto flushed = t.enqueue(word("no"), 400, 1);
    REQUIRE(flushed.size() == 1);
    CHECK(flushed[0].token.text == "yes");
    CHECK(flushed[0].play_start_ms == 400);

    PlaybackSchedule u(lag(2));
    u.enqueue(word("solo"), 100, 0);
    CHECK(u.close_sentence(250).size() == 1);
    CHECK(u.items()[0].play_start_ms == 250);
  }

  TEST_CASE("horizon") {
    PlaybackSchedule empty(lag(1));
    CHECK(playback_horizon(empty, 5000) == 5000);

    const auto one = PlaybackSchedule::from_items({{word("x"), 0, 0, 3500, 4000, 6000}});
    CHECK(playback_horizon(one, 5000) == 6000);

    const auto three = PlaybackSchedule::from_items({{word("a"), 0, 0, 4000, 4000, 5000},
                                                     {word("b"), 0, 1, 4000, 5000, 6100},
                                                     {word("c"), 0, 2, 4000, 6100, 7200}});
    CHECK(playback_horizon(three, 5000) == 7200);
    CHECK(playback_horizon(three, 8000) == 8000);

    PlaybackSchedule held(lag(2));
    held.enqueue(word("hello"), 1000, 0);
    CHECK(playback_horizon(held, 1000) == 1300);
  }

  TEST_CASE("speed factors") {
    const std::vector<PlaybackItem> base = {{word("aaaaa"), 0, 0, 1000, 1000, 1300},
                                            {word("bb"), 0, 1, 1000, 1300, 1420},
                                            {word("."), 0, 2, 1000, 1420, 1620}};
    const auto sched = PlaybackSchedule::from_items(base);
    CHECK(apply_speed_factor(sched, Rational(1)).items() == base);

    const auto fast = apply_speed_factor(sched, Rational(2)).items();
    REQUIRE(fast.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(fast[i].play_end_ms - fast[i].play_start_ms ==
            (base[i].play_end_ms - base[i].play_start_ms) / 2);
    }
    CHECK(fast[0].play_start_ms == 1000);

    const auto slow = apply_speed_factor(sched, Rational(1, 2)).items();
    CHECK(slow.back().play_end_ms - slow.front().play_start_ms == 2 * (1620 - 1000));
    CHECK_THROWS_AS(apply_speed_factor(sched, Rational(0)), Error);
  }

  TEST_CASE("slowing one sentence pushes the next one back") {
    const std::vector<PlaybackItem> base = {{word("aaaaa"), 0, 0, 0, 0, 300},
                                            {word("."), 0, 1, 0, 300, 500},
                                            {word("bbbbb"), 1, 0, 400, 600, 900}};
    const auto slow = apply_speed_factor(PlaybackSchedule::from_items(base), Rational(1, 2)).items();
    CHECK(slow[1].play_end_ms == 1000);
    CHECK(slow[2].play_start_ms == 1000);
    CHECK(slow[2].play_end_ms == 1600);
  }

  TEST_CASE("random streams keep the schedule invariants") {
    Gen g(2718);
    for (int trial = 0; trial < 400; ++trial) {
      DurationModel m;
      m.startup_lag_tokens = g.between(1, 2);
      m.enqueue_delay_ms = g.between(0, 1) * g.between(0, 80);
      const auto stream = random_stream(g);
      PlaybackSchedule s(m);
      for (const auto& a : stream) s.enqueue(a.token, a.at, a.sentence, a.ends);
      const auto& items = s.items();
      REQUIRE(items.size() == stream.size());
      CHECK(s.pending().empty());
      CHECK(items == ref_play(stream, m));
      for (std::size_t i = 0; i < items.size(); ++i) {
        CHECK(items[i].play_start_ms >= items[i].enqueue_ms);
        CHECK(items[i].play_end_ms - items[i].play_start_ms == token_duration(items[i].token, m));
        if (i > 0) CHECK(items[i - 1].play_end_ms <= items[i].play_start_ms);
      }
      // The gap finder reports exactly the non-contiguous joins that do not
      // follow a pause token.
      std::vector<std::size_t> want;
      for (std::size_t i = 1; i < items.size(); ++i) {
        if (items[i].sentence_id == items[i - 1].sentence_id && !items[i - 1].token.is_pause &&
            items[i].play_start_ms != items[i - 1].play_end_ms) {
          want.push_back(i);
        }
      }
      std::vector<std::size_t> got;
      for (const auto& gap : find_gaps(items)) {
        got.push_back(gap.item);
        CHECK(gap.gap_ms > 0);
      }
      CHECK(got == want);

      const auto fast = apply_speed_factor(s, Rational(g.between(1, 4), g.between(1, 4))).items();
      for (std::size_t i = 0; i < fast.size(); ++i) {
        CHECK(fast[i].play_start_ms >= fast[i].enqueue_ms);
        if (i > 0) CHECK(fast[i - 1].play_end_ms <= fast[i].play_start_ms);
      }
    }
  }

  TEST_CASE("a token that arrives late leaves a gap unless a pause precedes it") {
    PlaybackSchedule s(lag(1));
    s.enqueue(word("one"), 0, 0);      // [0, 180)
    s.enqueue(word("two"), 500, 0);    // gap of 320
    s.enqueue(word(","), 680, 0);      // [680, 880)
    s.enqueue(word("three"), 2000, 0); // after a pause: natural
    s.enqueue(word("."), 2300, 0, true);
    const auto gaps = find_gaps(s.items());
    REQUIRE(gaps.size() == 1);
    CHECK(gaps[0].item == 1);
    CHECK(gaps[0].gap_ms == 320);
  }

  TEST_CASE("errors and CSV export") {
    PlaybackSchedule s(lag(1));
    s.enqueue(word("a"), 100, 1);
    CHECK_THROWS_AS(s.enqueue(word("b"), 50, 1), Error);
    CHECK_THROWS_AS(s.enqueue(word("b"), 200, 0), Error);
    DurationModel bad;
    bad.startup_lag_tokens = 3;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad.startup_lag_tokens = 1;
    bad.pause_ms = -1;
    CHECK_THROWS_AS(PlaybackSchedule{bad}, Error);

    s.enqueue(word(","), 300, 1);
    CHECK(playback_to_csv(s.items()) ==
          "token,enqueue_ms,play_start_ms,play_end_ms,sentence_id\n"
          "a,100,100,220,1\n"
          "\",\",300,300,500,1\n");
  }
}

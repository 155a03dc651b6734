#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "kht/diagram.hpp"
#include "oracles.hpp"

using kht::Marker;
using kht::parse_word;
using kht::render_word;
using kht::smooth_at;
using kht::stats;
using kht::torus_word;

TEST_CASE("word parsing and rendering", "[diagram]") {
  SECTION("prefix form round trips") {
    for (const char* text : {"4: 3 2 1 3 2 1 e1", "2: 1 1 1", "3: -2 e1 2 -1", "2:", "5: e4"}) {
      const auto w = parse_word(text);
      CHECK(render_word(w) == text);
      CHECK(render_word(parse_word(render_word(w))) == text);
    }
  }
  SECTION("commas are separators") {
    CHECK(render_word(parse_word("3: 2,1,-2, e1")) == "3: 2 1 -2 e1");
  }
  SECTION("strand count inferred from letters when no prefix") {
    const auto w = parse_word("1 2 -1");
    CHECK(w.strands == 3);
    CHECK(w.letters.size() == 3);
    CHECK(parse_word("e3").strands == 4);
  }
  SECTION("explicit strand argument") {
    CHECK(parse_word("1 1", 4).strands == 4);
    CHECK_THROWS_AS(parse_word("2: 1 1", 4), std::invalid_argument);
    CHECK(parse_word("4: 1 1", 4).strands == 4);
  }
  SECTION("malformed input is rejected") {
    CHECK_THROWS_AS(parse_word("2: 0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_word("2: 3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_word("2: e0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_word("2: e-1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_word("x: 1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_word("2: 1x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_word("2: foo"), std::invalid_argument);
    CHECK_THROWS_AS(parse_word("1: 1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_word("0:"), std::invalid_argument);
  }
}

TEST_CASE("letter bookkeeping", "[diagram]") {
  const auto w = parse_word("3: 2 e1 -1 e2 1");
  CHECK(w.crossing_count() == 3);
  CHECK(w.crossing_letter_positions() == std::vector<int>{0, 2, 4});
  CHECK(w.letters[1].is_crossing() == false);
  CHECK(w.letters[2].sign == -1);
}

TEST_CASE("torus family words", "[diagram]") {
  CHECK(render_word(torus_word(2, 3, 0)) == "2: 1 1 1");
  CHECK(render_word(torus_word(3, 2, 1)) == "3: 2 1 2 1 1");
  CHECK(render_word(torus_word(3, 0, -2)) == "3: -1 -1");
  CHECK(render_word(kht::word_for({3, 4, 2})) == render_word(torus_word(3, 4, 2)));
  CHECK_THROWS_AS(torus_word(1, 3, 0), std::invalid_argument);
  CHECK_THROWS_AS(torus_word(3, -1, 0), std::invalid_argument);

  SECTION("flat-framing cable words") {
    const auto c1 = kht::flat_two_cabling_word(1);
    CHECK(c1.strands == 4);
    CHECK(c1.letters.size() == 24);
    CHECK(render_word(c1) == render_word(torus_word(4, 6, -6)));
    CHECK(stats(c1).writhe == 12);
    CHECK(stats(c1).components == 2);
    CHECK_THROWS_AS(kht::flat_two_cabling_word(0), std::invalid_argument);
  }
}

TEST_CASE("closure statistics", "[diagram]") {
  SECTION("components of torus closures follow gcd") {
    for (auto [m, n] : std::vector<std::pair<int, int>>{{2, 3}, {3, 6}, {4, 6}, {3, 4}, {2, 4}}) {
      CHECK(stats(torus_word(m, n, 0)).components == std::gcd(m, n));
    }
  }
  SECTION("small hand cases") {
    CHECK(stats(parse_word("2:")).components == 2);
    CHECK(stats(parse_word("2: e1")).components == 1);
    CHECK(stats(parse_word("2: e1 e1")).components == 2);
    CHECK(stats(parse_word("2: 1")).components == 1);
    const auto st = stats(parse_word("3: 2 e1 -1"));
    CHECK(st.crossings == 2);
    CHECK(st.letters == 3);
    CHECK(st.writhe == 0);
  }
  SECTION("writhe sums the crossing signs") {
    std::mt19937 rng(20260801);
    for (int trial = 0; trial < 60; ++trial) {
      const auto w = oracle::random_word(rng, 4, 8);
      int s = 0;
      for (const auto& l : w.letters) s += l.sign;
      CHECK(stats(w).writhe == s);
    }
  }
  SECTION("smoothing a crossing drops its sign from the writhe") {
    std::mt19937 rng(20260802);
    int checked = 0;
    while (checked < 40) {
      const auto w = oracle::random_word(rng, 4, 8);
      const auto pos = w.crossing_letter_positions();
      if (pos.empty()) continue;
      const int p = pos[rng() % pos.size()];
      const int sign = w.letters[p].sign;
      CHECK(stats(smooth_at(w, p, Marker::A)).writhe == stats(w).writhe - sign);
      CHECK(stats(smooth_at(w, p, Marker::B)).writhe == stats(w).writhe - sign);
      ++checked;
    }
  }
}

TEST_CASE("oriented writhe", "[diagram]") {
  SECTION("agrees with the sign sum on genuine braid words") {
    std::mt19937 rng(20260803);
    for (int trial = 0; trial < 60; ++trial) {
      const auto w = oracle::random_word(rng, 4, 8, /*e_prob=*/0.0);
      const auto st = stats(w);
      CHECK(st.oriented_writhe == st.writhe);
    }
  }
  SECTION("flat letters reverse strand direction") {
    // the closure of sigma_1^2 e_1 is a clasp: an unknot with two negative
    // self-intersections once the turned-back strand is taken into account
    const auto st = stats(parse_word("2: 1 1 e1"));
    CHECK(st.components == 1);
    CHECK(st.writhe == 2);
    CHECK(st.oriented_writhe == -2);
    const auto mir = stats(parse_word("2: -1 -1 e1"));
    CHECK(mir.oriented_writhe == 2);
  }
}

TEST_CASE("smoothing a crossing rewrites the word", "[diagram]") {
  const auto w = parse_word("2: 1 1 1");
  CHECK(render_word(smooth_at(w, 1, Marker::A)) == "2: 1 1");
  CHECK(render_word(smooth_at(w, 1, Marker::B)) == "2: 1 e1 1");
  const auto neg = parse_word("2: -1");
  CHECK(render_word(smooth_at(neg, 0, Marker::A)) == "2: e1");
  CHECK(render_word(smooth_at(neg, 0, Marker::B)) == "2:");
  CHECK_THROWS_AS(smooth_at(parse_word("2: e1"), 0, Marker::A), std::invalid_argument);
  CHECK_THROWS_AS(smooth_at(w, 3, Marker::A), std::invalid_argument);
  CHECK_THROWS_AS(smooth_at(w, -1, Marker::B), std::invalid_argument);
}

TEST_CASE("validate rejects malformed words", "[diagram]") {
  kht::SmoothedBraidWord w;
  w.strands = 0;
  CHECK_THROWS_AS(kht::validate(w), std::invalid_argument);
  w.strands = 3;
  w.letters.push_back({3, +1});
  CHECK_THROWS_AS(kht::validate(w), std::invalid_argument);
  w.letters[0] = {1, +2};
  CHECK_THROWS_AS(kht::validate(w), std::invalid_argument);
  w.letters[0] = {2, -1};
  CHECK_NOTHROW(kht::validate(w));
}

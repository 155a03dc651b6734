#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "kht/cube.hpp"
#include "oracles.hpp"

using kht::BigradedComplex;
using kht::build_differential;
using kht::enumerate_generators;
using kht::kauffman_bracket;
using kht::Laurent;
using kht::parse_word;

namespace {

BigradedComplex full_complex(const kht::SmoothedBraidWord& w) {
  auto cx = enumerate_generators(w);
  build_differential(cx);
  return cx;
}

std::map<std::pair<int, int>, int> bucket_dims(const BigradedComplex& cx) {
  std::map<std::pair<int, int>, int> d;
  for (const auto& [ab, gens] : cx.generators) d[ab] = (int)gens.size();
  return d;
}

}  // namespace

TEST_CASE("trefoil generators land in the expected bidegrees", "[cube]") {
  const auto cx = enumerate_generators(parse_word("2: 1 1 1"));
  CHECK(cx.total_generators() == 30);
  const std::map<std::pair<int, int>, int> expected{
      {{3, 7}, 1},   {{3, 3}, 2},   {{3, -1}, 1}, {{1, 3}, 3},  {{1, -1}, 3},
      {{-1, 3}, 3},  {{-1, -1}, 6}, {{-1, -5}, 3}, {{-3, 3}, 1}, {{-3, -1}, 3},
      {{-3, -5}, 3}, {{-3, -9}, 1}};
  CHECK(bucket_dims(cx) == expected);

  SECTION("sigma and tau read off the enhanced state") {
    for (const auto& [ab, gens] : cx.generators)
      for (const auto& g : gens) {
        CHECK(g.a() == ab.first);
        CHECK(g.b() == ab.second);
      }
  }
}

TEST_CASE("single-crossing differentials by hand", "[cube]") {
  SECTION("positive crossing merges") {
    const auto cx = full_complex(parse_word("2: 1"));
    REQUIRE(cx.differentials.count({1, 1}) == 1);
    REQUIRE(cx.differentials.count({1, -3}) == 1);
    CHECK(cx.differentials.count({1, 5}) == 0);
    CHECK(cx.differentials.at({1, 1}).dense() ==
          std::vector<std::vector<kht::Int>>{{1, 1}});
    CHECK(cx.differentials.at({1, -3}).dense() ==
          std::vector<std::vector<kht::Int>>{{1}});
  }
  SECTION("negative crossing splits") {
    const auto cx = full_complex(parse_word("2: -1"));
    REQUIRE(cx.differentials.count({1, 3}) == 1);
    REQUIRE(cx.differentials.count({1, -1}) == 1);
    CHECK(cx.differentials.at({1, 3}).dense() ==
          std::vector<std::vector<kht::Int>>{{1}});
    CHECK(cx.differentials.at({1, -1}).dense() ==
          std::vector<std::vector<kht::Int>>{{1}, {1}});
  }
}

TEST_CASE("the differential squares to zero", "[cube]") {
  std::vector<kht::SmoothedBraidWord> words;
  for (const char* text : {"2: 1 1 1", "3: 2 1 2 1 1", "3: 1 -2 1 2 2", "2: -1 e1 1",
                           "4: 3 2 1 3 2 1 e1", "2: 1 1 e1"})
    words.push_back(parse_word(text));
  std::mt19937 rng(20260806);
  while (words.size() < 40) {
    const auto w = oracle::random_word(rng, 4, 8);
    if (w.crossing_count() <= 8) words.push_back(w);
  }
  for (const auto& w : words) {
    const auto cx = full_complex(w);
    for (const auto& [ab, d1] : cx.differentials) {
      const auto next = cx.differentials.find({ab.first - 2, ab.second});
      if (next == cx.differentials.end()) continue;
      auto prod = kht::multiply(next->second, d1);
      prod.canonicalize();
      INFO("word " << kht::render_word(w) << " at (" << ab.first << "," << ab.second << ")");
      CHECK(prod.is_zero());
    }
  }
}

TEST_CASE("kauffman bracket literals", "[cube]") {
  CHECK(kauffman_bracket(parse_word("1:")) == kht::kauffman_bracket_delta());
  CHECK(kauffman_bracket(parse_word("2: 1")) == Laurent::term(1, 5) + Laurent::term(1, 1));
  CHECK(kauffman_bracket(parse_word("2: 1")).str() == "A^5 + A");
  // stabilizing by an extra strand adds a kink, which scales the bracket
  const auto trefoil = kauffman_bracket(parse_word("2: 1 1 1"));
  CHECK(kauffman_bracket(parse_word("3: 1 1 1 2")) == Laurent::term(-1, 3) * trefoil);
  CHECK(kauffman_bracket(parse_word("3: 1 1 1 -2")) == Laurent::term(-1, -3) * trefoil);
}

TEST_CASE("euler polynomial of the complex equals the bracket", "[cube]") {
  std::vector<kht::SmoothedBraidWord> words;
  words.push_back(parse_word("2: 1 1 1"));
  std::mt19937 rng(20260807);
  while (words.size() < 30) {
    const auto w = oracle::random_word(rng, 4, 8);
    if (w.crossing_count() <= 8) words.push_back(w);
  }
  for (const auto& w : words) {
    const auto cx = enumerate_generators(w);
    INFO("word " << kht::render_word(w));
    CHECK(kht::euler_polynomial(cx) == kauffman_bracket(w));
  }
}

TEST_CASE("generator enumeration respects its cap", "[cube]") {
  CHECK_THROWS_AS(enumerate_generators(parse_word("2: 1 1 1"), 10), kht::ResourceLimitError);
  CHECK_NOTHROW(enumerate_generators(parse_word("2: 1 1 1"), 30));
}

TEST_CASE("laurent polynomial basics", "[cube]") {
  const Laurent p = Laurent::term(2, 3) + Laurent::term(-1, 0) + Laurent::term(1, -2);
  CHECK(p.str() == "2A^3 - 1 + A^-2");
  CHECK((p - p).is_zero());
  CHECK((p - p).str() == "0");
  CHECK(Laurent::term(1, 1).pow(4) == Laurent::term(1, 4));
  CHECK((Laurent::term(1, 1) + Laurent::term(1, -1)).pow(2) ==
        Laurent::term(1, 2) + Laurent::term(2, 0) + Laurent::term(1, -2));
  CHECK(p.coeff(3) == 2);
  CHECK(p.coeff(7) == 0);
  CHECK(Laurent::term(0, 5).is_zero());
}

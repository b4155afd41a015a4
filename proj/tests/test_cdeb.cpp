#include "debate/constructions.hpp"
#include "debate/debate_game.hpp"
#include "debate/error.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace debate;
using test_support::load_normalized;

TEST_CASE("cdeb on anbn: members are won surely, nonmembers rejected often") {
  const auto machine = load_normalized("anbn.json");
  const auto compiled = compile_cdeb_from_2afa(machine, 1, Rational(1, 4));
  const auto& spec = compiled.spec;
  CHECK(spec.coin_budget == 1u);
  const auto member = game_value_accept(spec, "ab", DebateMode::complete);
  CHECK(member.value == 1);
  CHECK_FALSE(member.truncated);
  const auto nonmember = game_value_reject(spec, "aab", DebateMode::complete);
  CHECK(nonmember.value >= Rational(1, 2));
}

TEST_CASE("cdeb with one head is deterministic and exact") {
  const auto machine = load_normalized("first_last.json");
  const auto compiled = compile_cdeb_from_2afa(machine, 1, Rational(1, 4));
  CHECK(compiled.spec.coin_budget == 0u);
  for (const auto& w : test_support::words("ab", 4)) {
    CAPTURE(w);
    const auto g = game_value_accept(compiled.spec, w, DebateMode::complete);
    CHECK(g.value == (test_support::first_equals_last(w) ? 1 : 0));
  }
}

TEST_CASE("cdeb repetitions push nonmember acceptance below epsilon") {
  CHECK(default_repetitions(1, Rational(1, 10)) == 4);  // (1/2)^4 = 1/16 < 1/10 <= 1/8
  CHECK(default_repetitions(0, Rational(1, 10)) == 1);
  const auto compiled = compile_cdeb_from_2afa(load_normalized("anbn.json"), std::nullopt, Rational(1, 10));
  const auto g = game_value_accept(compiled.spec, "ba", DebateMode::complete);
  CHECK(g.value <= Rational(1, 16));
  CHECK(game_value_accept(compiled.spec, "ab", DebateMode::complete).value == 1);
}

TEST_CASE("cdeb honest players") {
  const auto compiled = compile_cdeb_from_2afa(load_normalized("anbn.json"), 1, Rational(1, 4));
  for (const std::string w : {"", "ab", "aabb"}) {
    const auto honest = honest_strategies(compiled, w);
    CHECK(honest.source_verdict == Verdict::accept);
    CHECK(acceptance_probability(compiled.spec, w, *honest.p1, *honest.p0, 100'000).accept == 1);
  }
  REQUIRE(compiled.layout);
  CHECK(compiled.layout->heads == 2);
  CHECK(compiled.layout->restart_symbol == kRestartSymbol);
}

TEST_CASE("cdeb rejects unnormalized machines") {
  CHECK_THROWS_AS(compile_cdeb_from_2afa(test_support::load_automaton("anbn.json"), 1, Rational(1, 4)), Error);
}

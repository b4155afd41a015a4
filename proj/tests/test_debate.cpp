#include "debate/constructions.hpp"
#include "debate/debate_game.hpp"
#include "debate/error.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace debate;
using namespace test_support;

namespace {

std::shared_ptr<StrategyP1> constant_p1(SymbolId s) {
  auto p = std::make_shared<TableStrategyP1>();
  p->fallback = s;
  return p;
}

std::shared_ptr<StrategyP0> constant_p0(SymbolId s) {
  auto p = std::make_shared<TableStrategyP0>();
  p->fallback = s;
  return p;
}

}  // namespace

TEST_CASE("game values of the small verifiers") {
  const auto quarters = load_verifier("three_quarters.json");
  CHECK(game_value_accept(quarters, "", DebateMode::complete).value == Rational(3, 4));
  CHECK(game_value_reject(quarters, "", DebateMode::complete).value == Rational(1, 4));

  // P1 must guess a coin it never sees.
  const auto guess = load_verifier("coin_match.json");
  CHECK(game_value_accept(guess, "a", DebateMode::complete).value == Rational(1, 2));
  CHECK(check_strong(guess, "a", DebateMode::complete, Rational(1, 4)).side == Side::neither);

  const auto refuter = load_verifier("refuter_wins.json");
  CHECK(game_value_accept(refuter, "", DebateMode::complete).value == 0);
  CHECK(game_value_reject(refuter, "", DebateMode::complete).value == 1);
  CHECK(check_strong(refuter, "", DebateMode::complete, Rational(0)).side == Side::nonmember);
}

TEST_CASE("strong member-side implies weak member-side") {
  const auto quarters = load_verifier("three_quarters.json");
  const auto strong = check_strong(quarters, "ab", DebateMode::complete, Rational(1, 4));
  const auto weak = check_weak(quarters, "ab", DebateMode::complete, Rational(1, 4));
  CHECK(strong.side == Side::member);
  CHECK(weak.side == Side::member);
}

TEST_CASE("error bounds must be below one half") {
  const auto quarters = load_verifier("three_quarters.json");
  CHECK_THROWS_AS(check_strong(quarters, "", DebateMode::complete, Rational(1, 2)), Error);
  CHECK_THROWS_AS(check_weak(quarters, "", DebateMode::complete, Rational(-1, 4)), Error);
}

TEST_CASE("outcome probabilities add up and match the ensemble") {
  const auto guess = load_verifier("coin_match.json");
  const auto p1 = constant_p1(guess.symbol("0"));
  const auto p0 = constant_p0(guess.symbol("x"));
  const Outcome o = acceptance_probability(guess, "b", *p1, *p0, 100);
  CHECK(o.accept + o.reject + o.unresolved == 1);
  CHECK(o.accept == Rational(1, 2));

  // Each of the 2^r deterministic members run on the same debate.
  unsigned accepted = 0;
  const auto members = ensemble_expand(guess, 1);
  REQUIRE(members.size() == 2);
  for (const auto& m : members)
    accepted += m.run("b", {guess.symbol("0")}) == DeterministicVerifier::Outcome::accept;
  CHECK(Rational(accepted, 2) == o.accept);
}

TEST_CASE("Monte Carlo: binomial interval and seed reproducibility") {
  const auto guess = load_verifier("coin_match.json");
  const auto p1 = constant_p1(guess.symbol("1"));
  const auto p0 = constant_p0(guess.symbol("x"));
  MonteCarloOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const auto a = monte_carlo_estimate(guess, "", *p1, *p0, 10000, 42, one);
  const auto b = monte_carlo_estimate(guess, "", *p1, *p0, 10000, 42, many);
  CHECK(a.accept == b.accept);
  CHECK(a.accept_frequency() >= 0.47);
  CHECK(a.accept_frequency() <= 0.53);

  const auto refuter = load_verifier("refuter_wins.json");
  const auto c = monte_carlo_estimate(refuter, "", *constant_p1(refuter.symbol("go")), *constant_p0(refuter.symbol("no")),
                                      100, 3);
  CHECK(c.reject == 100);
}

TEST_CASE("strategies that break the turn structure are diagnosed") {
  const auto refuter = load_verifier("refuter_wins.json");
  const auto p1 = constant_p1(refuter.symbol("go"));
  const auto bad_p0 = constant_p0(refuter.symbol("go"));
  try {
    acceptance_probability(refuter, "", *p1, *bad_p0, 10);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::strategy);
  }
}

TEST_CASE("game values grow with the horizon and settle") {
  const auto compiled = compile_cdeb_from_2afa(load_normalized("anbn.json"), 1, Rational(1, 4));
  Rational previous = 0;
  for (int h = 6; h <= 60; h += 6) {
    const auto g = game_value_accept(compiled.spec, "ab", DebateMode::complete, BigInt(h));
    CHECK(g.value >= previous);
    previous = g.value;
  }
  CHECK(previous == 1);
}

TEST_CASE("revealing P0's private symbols never hurts P1") {
  const auto compiled = compile_pdeb_from_2pafa(load_normalized("echo_hidden_private.json"));
  VerifierSpec revealed = compiled.spec;
  for (auto& s : revealed.symbols)
    if (s.cls == SymbolClass::refuter_private) s.cls = SymbolClass::refuter_public;
  bool strictly = false;
  for (const auto& w : words("ab", 3)) {
    const Rational hidden = game_value_accept(compiled.spec, w, DebateMode::partial).value;
    const Rational shown = game_value_accept(revealed, w, DebateMode::complete).value;
    CHECK(shown >= hidden);
    strictly = strictly || shown > hidden;
  }
  CHECK(strictly);
}

TEST_CASE("configuration counts and the ensemble bound") {
  const auto guess = load_verifier("coin_match.json");
  CHECK(count_reachable_configurations(guess, "") == 5);
  const auto bound = compute_ensemble_bound(guess, "", 1);
  CHECK(bound.complete == 25);
  CHECK(bound.partial_text() == "2^25");
}

TEST_CASE("solver-derived prover strategies realize the value") {
  const auto compiled = compile_cdeb_from_2afa(load_normalized("first_last.json"), 1, Rational(1, 4));
  DebateSolver solver(compiled.spec, "aba", DebateMode::complete);
  CHECK(solver.accept_value().value == 1);
  const auto p1 = solver.prover_strategy(ValueKind::accept_maxmin);
  const auto p0 = constant_p0(compiled.spec.alphabet(SymbolClass::refuter_public).front());
  CHECK(acceptance_probability(compiled.spec, "aba", *p1, *p0, 10'000).accept == 1);
}

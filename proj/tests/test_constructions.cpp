#include "debate/constructions.hpp"
#include "debate/error.hpp"
#include "debate/io.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace debate;
using namespace test_support;

namespace {
constexpr std::uint64_t kSteps = 100'000'000;

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

TEST_CASE("amplifier closed forms") {
  AmplifierParams p;
  p.r = 0;
  CHECK(p.wrapper_probability() == 0);
  CHECK(p.error_bound() == 0);
  p.r = 1;
  CHECK(p.sure_side() == Rational(3, 4));
  CHECK(p.weak_side() == Rational(5, 8));
  CHECK(p.error_bound() == Rational(3, 8));
  p.r = 2;
  CHECK(p.wrapper_probability() == Rational(3, 8));
  CHECK(p.error_bound() == Rational(15, 32));
  CHECK(parse_amplify_direction("pre-accept") == AmplifyDirection::pre_accept);
  CHECK_THROWS_AS(parse_amplify_direction("sideways"), Error);
}

TEST_CASE("amplifying with r=0 keeps the core's values") {
  const auto core = compile_cdeb_from_2afa(load_normalized("first_last.json"), 1, Rational(1, 4));
  const auto wrapped = amplify(core, AmplifierParams{});
  CHECK(wrapped.spec.coin_budget == 1u);
  for (const auto& w : words("ab", 3)) {
    CAPTURE(w);
    CHECK(game_value_accept(wrapped.spec, w, DebateMode::complete).value ==
          game_value_accept(core.spec, w, DebateMode::complete).value);
  }
}

TEST_CASE("pre-accept amplification of the zero-information checker") {
  const auto core = compile_zdeb_from_2bafa(load_normalized("anbn_blind.json"));
  AmplifierParams p;
  p.r = 1;
  p.direction = AmplifyDirection::pre_accept;
  const auto wrapped = amplify(core, p);
  CHECK(game_value_accept(wrapped.spec, "ab", DebateMode::zero).value >= Rational(5, 8));
  CHECK(game_value_reject(wrapped.spec, "ba", DebateMode::zero).value >= Rational(3, 4));
}

TEST_CASE("zdeb with one head decides the language exactly") {
  const auto machine = load_normalized("ends_a_blind.json");
  const auto compiled = compile_zdeb_from_2bafa(machine);
  CHECK(compiled.spec.alphabet(SymbolClass::refuter_public).empty());
  for (const auto& w : words("ab", 5)) {
    CAPTURE(w);
    const bool member = decide_alternating(machine, w, kSteps) == Verdict::accept;
    CHECK(member == starts_and_ends_with_a(w));
    CHECK(game_value_accept(compiled.spec, w, DebateMode::zero).value == (member ? 1 : 0));
  }
}

TEST_CASE("zdeb refuses machines with public universal moves") {
  CHECK_THROWS_AS(compile_zdeb_from_2bafa(load_normalized("echo_private.json")), Error);
}

TEST_CASE("zdeb honest refuter rejects nonmembers surely") {
  const auto compiled = compile_zdeb_from_2bafa(load_normalized("anbn_blind.json"));
  for (const std::string w : {"a", "ba", "abb"}) {
    const auto honest = honest_strategies(compiled, w);
    CHECK(honest.source_verdict == Verdict::reject);
    CHECK(acceptance_probability(compiled.spec, w, *honest.p1, *honest.p0, 100'000).reject == 1);
  }
}

TEST_CASE("pdeb: hiding the universal bit lowers the prover's value") {
  const auto compiled = compile_pdeb_from_2pafa(load_normalized("echo_hidden_private.json"));
  VerifierSpec cheating = compiled.spec;
  for (auto& s : cheating.symbols)
    if (s.cls == SymbolClass::refuter_private) s.cls = SymbolClass::refuter_public;
  const Rational fair = game_value_accept(compiled.spec, "ab", DebateMode::partial).value;
  const Rational cheat = game_value_accept(cheating, "ab", DebateMode::complete).value;
  CHECK(fair < cheat);
}

TEST_CASE("pdeb on a machine without public universal moves matches zdeb") {
  const auto machine = load_normalized("ends_a_blind.json");
  const auto p = compile_pdeb_from_2pafa(machine);
  const auto z = compile_zdeb_from_2bafa(machine);
  for (const auto& w : words("ab", 3))
    CHECK(game_value_accept(p.spec, w, DebateMode::partial).value == game_value_accept(z.spec, w, DebateMode::zero).value);
}

TEST_CASE("window verifier parameters") {
  CHECK(default_simulations(4, Rational(1, 2)) == 4);
  CHECK(default_simulations(5, Rational(1, 10)) == 15);
  const auto machine = load_atm("window_atm.json");
  WindowParams p;
  p.t = 4;
  p.epsilon = Rational(1, 2);
  const auto compiled = compile_window_verifier_from_atm(machine, 2, p);
  CHECK(compiled.spec.provenance.at("d") == "4");
  CHECK(compiled.spec.provenance.at("member_rejection_bound") == "81/256");
  CHECK(compiled.spec.provenance.at("window_catch_probability") == "1/2");
  CHECK_FALSE(compiled.spec.coin_budget.has_value());
  p.t = 2;
  CHECK_THROWS_AS(compile_window_verifier_from_atm(machine, 2, p), Error);
  p.t = 4;
  CHECK_THROWS_AS(compile_window_verifier_from_atm(machine, 4, p), Error);  // 5 cells do not fit
}

TEST_CASE("window verifier with honest players, both modes") {
  const auto machine = load_atm("window_atm.json");
  for (const WindowMode mode : {WindowMode::complete, WindowMode::zero}) {
    WindowParams p;
    p.t = 4;
    p.epsilon = Rational(1, 2);
    p.mode = mode;
    for (const std::string w : {"a", "ba", "bb", "bba"}) {
      CAPTURE(w);
      const auto compiled = compile_window_verifier_from_atm(machine, w.size(), p);
      const auto honest = honest_strategies(compiled, w);
      const auto o = acceptance_probability(compiled.spec, w, *honest.p1, *honest.p0, 1'000'000);
      CHECK((a_in_first_two(w) ? o.accept : o.reject) == 1);
    }
  }
}

TEST_CASE("PATM conversion: wrong alphabet class is an immediate win for P1") {
  const auto source = to_alternating_tm(load_normalized("echo_hidden_private.json"));
  const auto compiled = patm_to_verifier(source);
  const auto p1 = constant_p1(compiled.spec.symbol("e0"));
  const auto p0 = constant_p0(compiled.spec.symbol("u0"));  // public where private is demanded
  CHECK(acceptance_probability(compiled.spec, "a", *p1, *p0, 1000).accept == 1);
}

TEST_CASE("PATM conversion preconditions") {
  CHECK_THROWS_AS(patm_to_verifier(to_alternating_tm(load_normalized("anbn.json"))), Error);  // two heads
  CHECK_THROWS_AS(patm_to_verifier(load_atm("window_atm.json")), Error);                      // input on the tape
  CHECK_THROWS_AS(verifier_to_patm(load_verifier("coin_match.json")), Error);                 // tosses coins
}

TEST_CASE("zero-mode time-sharing machines are blind") {
  const auto compiled = compile_zdeb_from_2bafa(load_normalized("ends_a_blind.json"));
  const auto atm = verifier_to_alternating(compiled.spec, DebateMode::zero);
  CHECK(atm.mode == MachineMode::blind);
  const auto json = io::to_json(atm);
  std::size_t universal = 0;
  for (const auto& s : json.at("states"))
    if (s.value("kind", "exists") == "forall") {
      ++universal;
      CHECK(s.value("visibility", "visible") == "hidden");
    }
  CHECK(universal > 0);
}

TEST_CASE("time-sharing with r=0 agrees with the verifier") {
  const auto refuter = load_verifier("refuter_wins.json");
  const auto atm = verifier_to_alternating(refuter, DebateMode::complete);
  CHECK(atm.input_heads == 1);
  CHECK(decide_alternating(atm, "ab", kSteps) == Verdict::reject);
  const auto quarters = load_verifier("three_quarters.json");
  const auto majority = verifier_to_alternating(quarters, DebateMode::complete);
  CHECK(majority.input_heads == 4);
  CHECK(decide_alternating(majority, "", kSteps) == Verdict::accept);
}

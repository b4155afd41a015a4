#include "debate/constructions.hpp"
#include "debate/error.hpp"
#include "debate/io.hpp"
#include "support.hpp"

#include <doctest.h>

#include <filesystem>

using namespace debate;
using namespace test_support;

TEST_CASE("rationals render as p/q and parse back") {
  CHECK(to_string(Rational(1)) == "1/1");
  CHECK(to_string(Rational(0)) == "0/1");
  CHECK(to_string(Rational(-6, 4)) == "-3/2");
  CHECK(parse_rational("3/8") == Rational(3, 8));
  CHECK(parse_rational("2") == 2);
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK(pow2(10) == 1024);
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(3) == 2);
  CHECK(ceil_log2(4) == 2);
}

TEST_CASE("documents re-serialize identically") {
  for (const auto& entry : std::filesystem::directory_iterator(DEBATE_FIXTURE_DIR)) {
    const auto json = io::read_json_file(entry.path());
    const std::string type = io::document_type(json);
    CAPTURE(entry.path().filename().string());
    io::Json once, twice;
    if (type == "automaton") {
      once = io::to_json(io::automaton_from_json(json));
      twice = io::to_json(io::automaton_from_json(once));
    } else if (type == "atm") {
      once = io::to_json(io::atm_from_json(json));
      twice = io::to_json(io::atm_from_json(once));
    } else if (type == "verifier") {
      once = io::to_json(io::verifier_from_json(json));
      twice = io::to_json(io::verifier_from_json(once));
    } else if (type == "qmw") {
      once = io::to_json(io::qmw_from_json(json));
      twice = io::to_json(io::qmw_from_json(once));
    } else {
      continue;
    }
    CHECK(once == twice);
  }
}

TEST_CASE("a materialized compiled verifier keeps its game values") {
  const auto compiled = compile_cdeb_from_2afa(load_normalized("first_last.json"), 1, Rational(1, 4));
  const auto reloaded = io::verifier_from_json(io::to_json(compiled.spec));
  for (const std::string w : {"a", "ab", "aba"})
    CHECK(game_value_accept(reloaded, w, DebateMode::complete).value ==
          game_value_accept(compiled.spec, w, DebateMode::complete).value);
}

TEST_CASE("strategy tables round-trip") {
  const auto spec = load_verifier("refuter_wins.json");
  TableStrategyP1 p1;
  p1.table[{}] = spec.symbol("go");
  TableStrategyP0 p0;
  p0.table[{spec.symbol("go")}] = spec.symbol("yes");
  const auto s1 = io::p1_strategy_from_json(io::to_json(p1, spec), spec);
  const auto s0 = io::p0_strategy_from_json(io::to_json(p0, spec), spec);
  CHECK(acceptance_probability(spec, "", *s1, *s0, 10).accept == 1);
}

TEST_CASE("malformed documents are parse errors") {
  auto expect_parse_error = [](const io::Json& json) {
    try {
      io::verifier_from_json(json);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::parse);
    }
  };
  expect_parse_error(io::Json::parse(R"({"type":"automaton"})"));
  expect_parse_error(io::Json::parse(R"({"type":"verifier","input_alphabet":"a"})"));
  try {
    io::read_json_file("/nonexistent/file.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
}

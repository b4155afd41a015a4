#include "debate/alternation_game.hpp"
#include "debate/error.hpp"
#include "debate/io.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace debate;
using namespace test_support;

namespace {
constexpr std::uint64_t kSteps = 100'000'000;

std::size_t max_length_for(const std::string& fixture) { return fixture == "anbncn.json" ? 6 : 5; }
}  // namespace

TEST_CASE("decide_alternating recognizes the reference languages") {
  for (const auto& [fixture, lang] : languages()) {
    if (fixture == "window_atm.json" || fixture == "even_a_tape.json") continue;
    CAPTURE(fixture);
    const auto machine = load_automaton(fixture);
    for (const auto& w : words(machine.alphabet, max_length_for(fixture))) {
      CAPTURE(w);
      CHECK((decide_alternating(machine, w, kSteps) == Verdict::accept) == lang(w));
    }
  }
}

TEST_CASE("alternating TM fixtures recognize their languages") {
  for (const char* fixture : {"window_atm.json", "even_a_tape.json"}) {
    CAPTURE(fixture);
    const auto machine = load_atm(fixture);
    const auto& lang = languages().at(fixture);
    for (const auto& w : words(machine.input_alphabet, 4)) {
      CAPTURE(w);
      CHECK((decide_alternating(machine, w, kSteps) == Verdict::accept) == lang(w));
    }
  }
}

TEST_CASE("normalization keeps the language and normalizes") {
  for (const auto& [fixture, lang] : languages()) {
    if (fixture == "window_atm.json" || fixture == "even_a_tape.json") continue;
    CAPTURE(fixture);
    const auto source = load_automaton(fixture);
    const auto normalized = normalize_alternation(source);
    CHECK(normalized.is_normalized());
    CHECK(normalized.mode == source.mode);
    const auto atm = to_alternating_tm(normalized);
    for (const auto& w : words(source.alphabet, 4)) {
      CAPTURE(w);
      const Verdict expected = lang(w) ? Verdict::accept : Verdict::reject;
      CHECK(decide_alternating(normalized, w, kSteps) == expected);
      CHECK(decide_alternating(atm, w, kSteps) == expected);
    }
  }
}

TEST_CASE("hidden universal moves matter: the belief game differs from its relaxation") {
  const auto atm = to_alternating_tm(load_normalized("guess_bit_blind.json"));
  AlternationGame info(atm, "a");
  CHECK(info.solve(kSteps) == Verdict::reject);
  AlternationGame::Options relaxed;
  relaxed.respect_information = false;
  AlternationGame full(atm, "a", relaxed);
  CHECK(full.solve(kSteps) == Verdict::accept);
  CHECK(full.winning(full.root()));
  CHECK_FALSE(info.winning(info.root()));
}

TEST_CASE("a complete-information game has singleton beliefs") {
  const auto atm = to_alternating_tm(load_normalized("anbn.json"));
  AlternationGame game(atm, "aabb");
  CHECK(game.solve(kSteps) == Verdict::accept);
  NodeId node = game.root();
  for (int depth = 0; depth < 40 && node > AlternationGame::kLose; ++depth) {
    CHECK(game.belief(node).size() == 1);
    if (game.kind(node) == Quantifier::existential) {
      const auto choice = game.winning_choice(node);
      REQUIRE(choice);
      node = game.after_choice(node, *choice);
    } else {
      node = *game.after_label(node, game.labels(node).front());
    }
  }
  CHECK(node == AlternationGame::kWin);
}

TEST_CASE("input alphabet and malformed machines are diagnosed") {
  const auto machine = load_automaton("anbn.json");
  try {
    decide_alternating(machine, "abc", kSteps);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::validation);
  }
  auto json = io::read_json_file(fixture("anbn.json"));
  json["initial"] = "nowhere";
  try {
    io::automaton_from_json(json);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse);
  }
}

TEST_CASE("length bounds") {
  LengthBound poly{{1, 2, 1}, {}};
  CHECK(poly(0) == 1);
  CHECK(poly(3) == 16);
  LengthBound table{{}, {{0, 4}, {2, 9}}};
  CHECK(table(2) == 9);
  CHECK(LengthBound::constant(7)(100) == 7);
}

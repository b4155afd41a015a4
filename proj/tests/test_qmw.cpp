#include "debate/constructions.hpp"
#include "debate/io.hpp"
#include "debate/qmw.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace debate;
using test_support::load_normalized;
using test_support::load_verifier;

namespace {

QmwInstance scalar_game(const Rational& threshold) {
  QmwInstance q;
  q.name = "scalar";
  q.dimension = 1;
  q.prefix = "EA";
  q.v = {1};
  q.w = {1};
  auto s = [&](Rational x) { return q.add_matrix(to_string(x), {{x}}); };
  q.menus = {{s(2), s(3)}, {s(Rational(1, 2)), s(Rational(1, 3))}};
  q.threshold = threshold;
  return q;
}

VerifierSpec spec_from(const std::string& text) { return io::verifier_from_json(io::Json::parse(text)); }

// r1 reads "s"; the rest of the program is given per test.
std::string chain_spec(const std::string& states, const std::string& rules, int coins) {
  return R"({"type":"verifier","name":"chain","input_alphabet":"a","coin_budget":)" + std::to_string(coins) +
         R"(,"symbols":[{"name":"s","class":"prover"},{"name":"x","class":"public"}],"start":"r1","accept":"acc","reject":"rej",
    "states":[{"name":"r1","reader":"prover"},{"name":"acc","halt":"accept"},{"name":"rej","halt":"reject"})" +
         states + R"(],"rules":{)" + rules + "}}";
}

}  // namespace

TEST_CASE("qmw_eval: identity and scalar examples") {
  QmwInstance id;
  id.name = "identity";
  id.dimension = 2;
  id.prefix = "E";
  id.menus = {{id.add_matrix("I", {{1, 0}, {0, 1}})}};
  id.v = {1, 0};
  id.w = {1, 0};
  id.threshold = Rational(1, 2);
  CHECK(qmw_eval(id));
  id.threshold = 1;
  CHECK_FALSE(qmw_eval(id));  // strict inequality

  CHECK(qmw_eval(scalar_game(Rational(9, 10))));
  CHECK_FALSE(qmw_eval(scalar_game(1)));
  // 4-leaf enumeration: max(min(2/2, 2/3), min(3/2, 3/3)) = 1.
  CHECK(max_qmw(scalar_game(0)) == 1);
}

TEST_CASE("max_qmw: quantifier-free special cases") {
  QmwInstance q;
  q.name = "all-exists";
  q.dimension = 1;
  q.prefix = "EEE";
  q.v = {1};
  q.w = {1};
  auto s = [&](Rational x) { return q.add_matrix(to_string(x) + std::to_string(q.matrices.size()), {{x}}); };
  q.menus = {{s(1), s(2)}, {s(Rational(1, 3)), s(Rational(1, 4))}, {s(5), s(3), s(4)}};
  CHECK(max_qmw(q) == Rational(2 * 5, 3));
  q.prefix = "AAA";
  q.menus = {{q.menus[0][1]}, {q.menus[1][0]}, {q.menus[2][2]}};
  CHECK(max_qmw(q) == Rational(2 * 4, 3));
}

TEST_CASE("max_qmw: menus only help their owner") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> entry(0, 3);
  for (int round = 0; round < 30; ++round) {
    QmwInstance q;
    q.name = "mono";
    q.dimension = 2;
    q.prefix = round % 2 ? "EAE" : "AEA";
    q.v = {1, Rational(entry(rng), 3)};
    q.w = {Rational(entry(rng), 2), 1};
    auto random_matrix = [&] {
      RationalMatrix m(2, RationalVector(2));
      for (auto& row : m)
        for (auto& x : row) x = Rational(entry(rng), 3);
      return m;
    };
    for (int p = 0; p < 3; ++p) q.menus.push_back({q.add_matrix("m" + std::to_string(p), random_matrix())});
    const Rational before = max_qmw(q);
    QmwInstance bigger = q;
    const std::size_t extra = bigger.add_matrix("extra", random_matrix());
    bigger.menus[0].push_back(extra);
    const Rational after = max_qmw(bigger);
    if (q.prefix[0] == 'E') CHECK(after >= before);
    else CHECK(after <= before);
  }
}

TEST_CASE("QMW validation errors") {
  QmwInstance q = scalar_game(0);
  q.w = {1, 2};
  CHECK_THROWS_AS(max_qmw(q), Error);
  q = scalar_game(0);
  q.menus[1].clear();
  CHECK_THROWS_AS(qmw_eval(q), Error);
  q = scalar_game(0);
  q.prefix = "EX";
  CHECK_THROWS_AS(qmw_eval(q), Error);

  q = scalar_game(0);
  CHECK_THROWS_AS(q.validate_shared_menu(), Error);
  q.menus[1] = {q.menus[0][1], q.menus[0][0]};
  CHECK_NOTHROW(q.validate_shared_menu());
}

TEST_CASE("QMW files round-trip") {
  const QmwInstance q = scalar_game(Rational(9, 10));
  const auto json = io::to_json(q);
  const QmwInstance back = io::qmw_from_json(json);
  CHECK(io::to_json(back) == json);
  CHECK(back.matrices == q.matrices);
  CHECK(back.threshold == Rational(9, 10));
}

TEST_CASE("reading_probabilities: corridor, coin split and lost mass") {
  SUBCASE("deterministic corridor") {
    const auto spec = spec_from(chain_spec(R"(,{"name":"mid"},{"name":"r0","reader":"refuter"})",
                                           R"("r1":[{"next":"mid"}],"mid":[{"next":"r0"}],"r0":[{"next":"acc"}])", 0));
    const auto chain = reading_probabilities(spec, "a");
    REQUIRE(chain.configs.size() == 2);
    CHECK(chain.prover_count == 1);
    CHECK(chain.p(0, 1, spec.symbol("s")) == 1);
    CHECK(chain.p(0, 0, spec.symbol("s")) == 0);
  }
  SUBCASE("fair coin splits") {
    const auto spec = spec_from(chain_spec(
        R"(,{"name":"toss","coin":true},{"name":"left","reader":"refuter"},{"name":"right","reader":"refuter"})",
        R"("r1":[{"next":"toss"}],"toss":[{"coin":0,"next":"left"},{"coin":1,"next":"right"}],
           "left":[{"next":"acc"}],"right":[{"next":"rej"}])",
        1));
    const auto chain = reading_probabilities(spec, "a");
    REQUIRE(chain.configs.size() == 3);
    CHECK(chain.p(0, 1, spec.symbol("s")) == Rational(1, 2));
    CHECK(chain.p(0, 2, spec.symbol("s")) == Rational(1, 2));
  }
  SUBCASE("a trap loses half the mass") {
    const auto spec = spec_from(chain_spec(
        R"(,{"name":"toss","coin":true},{"name":"spin"},{"name":"r0","reader":"refuter"})",
        R"("r1":[{"next":"toss"}],"toss":[{"coin":0,"next":"spin"},{"coin":1,"next":"r0"}],
           "spin":[{"next":"spin"}],"r0":[{"next":"acc"}])",
        1));
    const auto chain = reading_probabilities(spec, "a");
    const auto& step = chain.steps.at({0, spec.symbol("s")});
    CHECK(chain.p(0, 1, spec.symbol("s")) == Rational(1, 2));
    CHECK(step.diverge == Rational(1, 2));
    CHECK(step.accept + step.reject + step.diverge == Rational(1, 2));  // the row-sum deficit
  }
}

TEST_CASE("reduce_cdeb_to_qmw matches the horizon-bounded game value") {
  const auto compiled = compile_cdeb_from_2afa(load_normalized("anbn.json"), 1, Rational(1, 4));
  // The honest debate on "ab" is 51 symbols long, so 26 exchanges suffice.
  for (const std::string w : {"ab", "aab"}) {
    const auto q = reduce_cdeb_to_qmw(compiled.spec, w, 26, Rational(3, 8));
    CHECK(q.prefix.size() == 52);
    const auto g = game_value_accept(compiled.spec, w, DebateMode::complete, BigInt(52));
    CHECK(max_qmw(q) == g.value);
    CHECK(qmw_eval(q) == (w == "ab"));
  }
  const auto always = load_verifier("three_quarters.json");
  const auto q = reduce_cdeb_to_qmw(always, "", 1, Rational(1, 4));
  CHECK(max_qmw(q) == Rational(3, 4));
}

TEST_CASE("reduce_cdeb_to_qmw refuses private alphabets") {
  const auto compiled = compile_zdeb_from_2bafa(load_normalized("ends_a_blind.json"));
  CHECK_THROWS_AS(reduce_cdeb_to_qmw(compiled.spec, "a", 2, Rational(1, 4)), Error);
}

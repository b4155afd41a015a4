#include "debate/cli.hpp"
#include "debate/io.hpp"
#include "support.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using test_support::fixture;

namespace {

struct Run {
  int status = 0;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "debate");
  std::ostringstream out, err;
  Run r;
  r.status = debate::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (l == line) return true;
  return false;
}

std::string temp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("debate_cli_test_" + name)).string();
}

}  // namespace

TEST_CASE("compile then solve the amplified checker") {
  const std::string out = temp_file("amp.json");
  auto r = cli({"compile", fixture("anbn.json"), "--construction", "cdeb", "--c", "1", "--r", "1", "-o", out});
  REQUIRE(r.status == 0);
  CHECK(has_line(r.out, "coin_budget: 3"));
  r = cli({"solve", out, "--input", "ab", "--epsilon", "3/8"});
  REQUIRE(r.status == 0);
  CHECK(has_line(r.out, "strong: member-side"));
  CHECK(has_line(r.out, "accept_value: 3/4"));
  r = cli({"solve", out, "--input", "aab", "--epsilon", "3/8", "--format", "json"});
  REQUIRE(r.status == 0);
  const auto json = debate::io::Json::parse(r.out);
  CHECK(json.at("strong") == "nonmember-side");
  CHECK(json.at("reject_value") == "5/8");
  std::filesystem::remove(out);
}

TEST_CASE("solve prints exact values with a /1 suffix") {
  const auto r = cli({"solve", fixture("refuter_wins.json"), "--epsilon", "0"});
  REQUIRE(r.status == 0);
  CHECK(has_line(r.out, "reject_value: 1/1"));
  CHECK(has_line(r.out, "strong: nonmember-side"));
}

TEST_CASE("qmw subcommands") {
  auto r = cli({"qmw", "eval", fixture("identity_qmw.json")});
  REQUIRE(r.status == 0);
  CHECK(has_line(r.out, "result: true"));
  r = cli({"qmw", "max", fixture("scalar_qmw.json")});
  CHECK(has_line(r.out, "omega: 1/1"));
  r = cli({"qmw", "eval", fixture("scalar_qmw.json"), "--threshold", "1"});
  CHECK(has_line(r.out, "result: false"));
  const std::string out = temp_file("q.json");
  r = cli({"qmw", "reduce", fixture("three_quarters.json"), "--t", "1", "--epsilon", "1/4", "-o", out});
  REQUIRE(r.status == 0);
  r = cli({"qmw", "max", out});
  CHECK(has_line(r.out, "omega: 3/4"));
  std::filesystem::remove(out);
}

TEST_CASE("bound reports C and the partial-information bound") {
  const auto r = cli({"bound", fixture("coin_match.json")});
  REQUIRE(r.status == 0);
  CHECK(has_line(r.out, "bound: C=25, partial-information bound 2^25"));
}

TEST_CASE("simulate is reproducible") {
  const std::vector<std::string> args{"simulate", fixture("coin_match.json"), "--p1", fixture("p1_zero.json"), "--p0",
                                      fixture("p0_x.json"), "--samples", "2000", "--seed", "5", "--exact"};
  const auto a = cli(args);
  const auto b = cli(args);
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(has_line(a.out, "exact_accept: 1/2"));
}

TEST_CASE("convert and decide") {
  const std::string out = temp_file("ev.json");
  auto r = cli({"convert", "patm-to-verifier", fixture("even_a_tape.json"), "-o", out});
  REQUIRE(r.status == 0);
  r = cli({"solve", out, "--input", "aba", "--epsilon", "0"});
  CHECK(has_line(r.out, "strong: member-side"));
  r = cli({"convert", "verifier-to-patm", out});
  REQUIRE(r.status == 0);
  CHECK(debate::io::Json::parse(r.out).at("type") == "atm");
  r = cli({"decide", fixture("anbn.json"), "--input", "aabb"});
  CHECK(has_line(r.out, "verdict: accept"));
  std::filesystem::remove(out);
}

TEST_CASE("diagnostics and exit codes") {
  auto r = cli({"solve", "/nonexistent.json"});
  CHECK(r.status == 8);
  CHECK(r.err.rfind("E-IO:", 0) == 0);
  r = cli({"solve", fixture("three_quarters.json"), "--epsilon", "1/2"});
  CHECK(r.status == 4);
  r = cli({"compile", fixture("anbn.json"), "--construction", "nope"});
  CHECK(r.status == 2);
  r = cli({});
  CHECK(r.status == 2);
  r = cli({"convert", "verifier-to-patm", fixture("coin_match.json")});
  CHECK(r.status == 5);
  r = cli({"solve", fixture("anbn.json")});
  CHECK(r.status == 3);
}

// Acceptance gate: one PASS/FAIL line per criterion.

#include "debate/constructions.hpp"
#include "debate/qmw.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace debate;
using namespace test_support;

namespace {

constexpr std::uint64_t kSteps = 100'000'000;

struct Verdict_ {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Side expected_side(bool member) { return member ? Side::member : Side::nonmember; }

void criterion_cdeb(Verdict_& v) {
  const auto compiled = compile_cdeb_from_2afa(load_normalized("anbn.json"), 1, Rational(1, 4));
  double worst = 0;
  std::size_t n = 0;
  for (const auto& w : words("ab", 6)) {
    const auto t0 = Clock::now();
    if (is_anbn(w)) {
      const auto g = game_value_accept(compiled.spec, w, DebateMode::complete);
      v.require(g.value == 1 && !g.truncated, "accept value on member '" + w + "' is " + to_string(g.value));
    } else {
      const auto g = game_value_reject(compiled.spec, w, DebateMode::complete);
      v.require(g.value >= Rational(1, 2) && !g.truncated, "reject value on '" + w + "' is " + to_string(g.value));
    }
    worst = std::max(worst, seconds_since(t0));
    ++n;
  }
  v.require(worst < 60, "slowest input took " + std::to_string(worst) + " s");
  v.detail << n << " inputs, slowest " << worst << " s";
}

void criterion_amplifier(Verdict_& v) {
  struct Case {
    unsigned r;
    const char* fixture;
    const char* alphabet;
    std::size_t max_length;
  };
  for (const Case& c : {Case{0, "first_last.json", "ab", 4}, Case{1, "anbn.json", "ab", 4},
                        Case{2, "anbncn.json", "abc", 3}}) {
    const auto core = compile_cdeb_from_2afa(load_normalized(c.fixture), 1, Rational(1, 4));
    v.require(core.spec.coin_budget == c.r, std::string("core coins of ") + c.fixture);
    AmplifierParams params;
    params.r = c.r;
    const auto amplified = amplify(core, params);
    const Rational member_bound = (pow2(c.r) + 1) / pow2(c.r + 1);
    const Rational nonmember_bound = (pow2(2 * c.r) + 1) / pow2(2 * c.r + 1);
    const Rational eps = (pow2(2 * c.r) - 1) / pow2(2 * c.r + 1);
    const auto& lang = languages().at(c.fixture);
    std::size_t n = 0;
    for (const auto& w : words(c.alphabet, c.max_length)) {
      const auto rep = check_strong(amplified.spec, w, DebateMode::complete, eps);
      const std::string tag = "r=" + std::to_string(c.r) + " '" + w + "'";
      if (lang(w)) v.require(rep.accept.value >= member_bound, tag + " member acceptance " + to_string(rep.accept.value));
      else v.require(rep.reject->value >= nonmember_bound, tag + " nonmember rejection " + to_string(rep.reject->value));
      v.require(rep.side == expected_side(lang(w)), tag + " strong check gave " + to_string(rep.side));
      ++n;
    }
    v.detail << "r=" << c.r << ": " << n << " inputs at eps=" << to_string(eps) << "; ";
  }
}

void criterion_zero_information(Verdict_& v) {
  for (const char* fixture : {"ends_a_blind.json", "anbn_blind.json", "guess_bit_blind.json"}) {
    const auto machine = load_normalized(fixture);
    const unsigned r = ceil_log2(machine.heads);
    const auto compiled = compile_zdeb_from_2bafa(machine);
    AmplifierParams params;
    params.r = r;
    params.direction = AmplifyDirection::pre_accept;
    const auto amplified = amplify(compiled, params);
    const Rational eps = params.error_bound();
    const auto& lang = languages().at(fixture);
    std::size_t n = 0;
    for (const auto& w : words(machine.alphabet, 4)) {
      const std::string tag = std::string(fixture) + " '" + w + "'";
      if (lang(w)) {
        const auto g = game_value_accept(compiled.spec, w, DebateMode::zero);
        v.require(g.value >= 1 / pow2(r), tag + " member acceptance " + to_string(g.value));
      } else {
        const auto g = game_value_reject(compiled.spec, w, DebateMode::zero);
        v.require(g.value == 1, tag + " nonmember rejection " + to_string(g.value));
      }
      const auto rep = check_strong(amplified.spec, w, DebateMode::zero, eps);
      v.require(rep.side == expected_side(lang(w)), tag + " amplified strong check gave " + to_string(rep.side));
      ++n;
    }
    v.detail << fixture << " (k=" << machine.heads << "): " << n << " inputs; ";
  }
}

void criterion_partial_information(Verdict_& v) {
  for (const char* fixture : {"echo_private.json", "echo_hidden_private.json"}) {
    const auto machine = load_normalized(fixture);
    const unsigned r = ceil_log2(machine.heads);
    auto compiled = compile_pdeb_from_2pafa(machine);
    AmplifierParams params;
    params.r = r;
    params.direction = AmplifyDirection::pre_accept;
    if (r > 0) compiled = amplify(compiled, params);
    const Rational eps = params.error_bound();
    std::size_t n = 0;
    for (const auto& w : words(machine.alphabet, 4)) {
      const Verdict truth = decide_alternating(machine, w, kSteps);
      const auto rep = check_strong(compiled.spec, w, DebateMode::partial, eps);
      v.require(rep.side == expected_side(truth == Verdict::accept),
                std::string(fixture) + " '" + w + "' strong check " + to_string(rep.side) + " vs " + to_string(truth));
      ++n;
    }
    v.detail << fixture << ": " << n << " inputs; ";
  }
}

void criterion_window(Verdict_& v) {
  const auto machine = load_atm("window_atm.json");
  constexpr std::uint64_t kSamples = 10'000;
  WindowParams params;
  params.t = 4;
  params.epsilon = Rational(1, 2);
  v.require(default_simulations(4, params.epsilon) == 4, "d for t=4, eps=1/2");
  std::size_t members = 0, nonmembers = 0;
  for (const auto& w : words("ab", 3)) {
    const auto compiled = compile_window_verifier_from_atm(machine, w.size(), params);
    const auto honest = honest_strategies(compiled, w);
    const auto mc = monte_carlo_estimate(compiled.spec, w, *honest.p1, *honest.p0, kSamples, 20261016);
    if (a_in_first_two(w)) {
      v.require(mc.accept == kSamples, "member '" + w + "' accepted " + std::to_string(mc.accept) + " times");
      ++members;
    } else {
      v.require(mc.reject == kSamples, "nonmember '" + w + "' rejected " + std::to_string(mc.reject) + " times");
      ++nonmembers;
    }
  }
  v.detail << members << " members, " << nonmembers << " nonmembers x " << kSamples << " samples; ";

  // Single forged transition: from the third configuration on, P0 reports the
  // head cell as rejecting. Only the window containing cell 1 can see it.
  const unsigned t = 5;
  const std::string w = "ab";
  WindowParams forged_params;
  forged_params.t = t;
  forged_params.epsilon = Rational(1, 2);
  forged_params.simulations = 1;
  const auto compiled = compile_window_verifier_from_atm(machine, w.size(), forged_params);
  const auto honest = honest_strategies(compiled, w);
  const SymbolId forged = compiled.spec.symbol("rej@a");
  const std::size_t per_sim = t + (t - 1) * (t + 1);
  auto honest_p0 = honest.p0;
  FunctionStrategyP0 adversary([=](const std::vector<SymbolId>& history) {
    const std::size_t round = (history.size() / 2) % per_sim;
    for (std::size_t j = 3; j <= t; ++j)
      if (round == t + (j - 2) * (t + 1) + 1) return forged;
    return honest_p0->choose(history);
  });
  const Rational catch_exact = 1 / Rational(t - 2);
  const auto exact = acceptance_probability(compiled.spec, w, *honest.p1, adversary, 100'000);
  v.require(exact.accept == catch_exact, "exact catch probability " + to_string(exact.accept));
  constexpr std::uint64_t kRuns = 10'000;
  const auto mc = monte_carlo_estimate(compiled.spec, w, *honest.p1, adversary, kRuns, 7);
  const double p = 1.0 / (t - 2);
  const double sigma = std::sqrt(p * (1 - p) / kRuns);
  const double rate = mc.accept_frequency();
  v.require(std::abs(rate - p) <= 3 * sigma, "empirical catch rate " + std::to_string(rate));
  v.detail << "forged t=5: exact " << to_string(exact.accept) << ", empirical " << rate << " (3 sigma = " << 3 * sigma
           << ")";
}

QmwInstance random_qmw(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 3), len(1, 6), menu(1, 3), entry(0, 4), den(1, 4), coin(0, 1);
  QmwInstance q;
  q.name = "random";
  q.dimension = static_cast<unsigned>(dim(rng));
  const int k = len(rng);
  auto value = [&] { return Rational(entry(rng), den(rng)); };
  for (int p = 0; p < k; ++p) {
    q.prefix += coin(rng) ? 'E' : 'A';
    std::vector<std::size_t> choices;
    const int size = menu(rng);
    for (int s = 0; s < size; ++s) {
      RationalMatrix m(q.dimension, RationalVector(q.dimension));
      for (auto& row : m)
        for (auto& x : row) x = value();
      choices.push_back(q.add_matrix("M" + std::to_string(p) + "_" + std::to_string(s), std::move(m)));
    }
    q.menus.push_back(std::move(choices));
  }
  for (unsigned i = 0; i < q.dimension; ++i) {
    q.v.push_back(value());
    q.w.push_back(value());
  }
  return q;
}

// Plain recursive enumeration of all plays.
Rational enumerate_value(const QmwInstance& q, std::size_t pos, const RationalVector& x) {
  if (pos == q.prefix.size()) {
    Rational s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * q.w[i];
    return s;
  }
  std::optional<Rational> best;
  for (std::size_t idx : q.menus[pos]) {
    RationalVector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j) y[j] += x[i] * q.matrices[idx][i][j];
    const Rational child = enumerate_value(q, pos + 1, y);
    if (!best || (q.prefix[pos] == 'E' ? child > *best : child < *best)) best = child;
  }
  return *best;
}

void criterion_qmw(Verdict_& v) {
  std::mt19937_64 rng(20261016);
  std::size_t trues = 0;
  for (int i = 0; i < 100; ++i) {
    QmwInstance q = random_qmw(rng);
    const Rational omega = max_qmw(q);
    v.require(omega == enumerate_value(q, 0, q.v), "instance " + std::to_string(i) + " value differs from enumeration");
    // Thresholds at, just below and just above the value plus a random one.
    for (const Rational& c : {omega, omega - Rational(1, 1000), omega + Rational(1, 1000),
                              Rational(static_cast<int>(rng() % 40), 8)}) {
      q.threshold = c;
      const bool eval = qmw_eval(q);
      v.require(eval == (omega > c), "instance " + std::to_string(i) + " at c=" + to_string(c));
      trues += eval;
    }
  }
  QmwInstance k2;
  k2.name = "k2";
  k2.dimension = 1;
  k2.prefix = "EA";
  k2.v = {1};
  k2.w = {1};
  auto scalar = [&](Rational x) { return k2.add_matrix(to_string(x), {{x}}); };
  k2.menus = {{scalar(2), scalar(3)}, {scalar(Rational(1, 2)), scalar(Rational(1, 3))}};
  const Rational omega = max_qmw(k2);
  v.require(omega == 1, "k=2 scalar example value " + to_string(omega));
  v.detail << "100 random instances (" << trues << " true evaluations of 400); k=2 example Omega=" << to_string(omega);
}

void criterion_reduction(Verdict_& v) {
  struct Case {
    std::string label;
    VerifierSpec spec;
    std::vector<std::string> inputs;
    unsigned t;
  };
  std::vector<Case> cases;
  cases.push_back({"cdeb(anbn)", compile_cdeb_from_2afa(load_normalized("anbn.json"), 1, Rational(1, 4)).spec,
                   {"", "ab", "aab", "ba"}, 26});
  cases.push_back({"cdeb(first_last)", compile_cdeb_from_2afa(load_normalized("first_last.json"), 1, Rational(1, 4)).spec,
                   {"a", "ab", "aba"}, 13});
  cases.push_back({"three_quarters", load_verifier("three_quarters.json"), {"", "a"}, 2});
  cases.push_back({"coin_match", load_verifier("coin_match.json"), {"", "a"}, 3});
  cases.push_back({"refuter_wins", load_verifier("refuter_wins.json"), {""}, 2});
  std::size_t nontrivial = 0;
  for (const auto& c : cases)
    for (const auto& w : c.inputs) {
      const auto q = reduce_cdeb_to_qmw(c.spec, w, c.t, Rational(3, 8));
      const Rational omega = max_qmw(q);
      const auto g = game_value_accept(c.spec, w, DebateMode::complete, BigInt(2 * c.t));
      v.require(omega == g.value, c.label + " '" + w + "': Omega " + to_string(omega) + " vs " + to_string(g.value));
      nontrivial += omega != 0;
    }
  v.detail << cases.size() << " verifiers, " << nontrivial << " nonzero values matched";
}

void criterion_conversions(Verdict_& v) {
  std::size_t checked = 0;
  for (const char* fixture : {"first_last.json", "ends_a_blind.json", "echo_private.json", "echo_hidden_private.json",
                              "guess_bit_blind.json", "even_a_tape.json"}) {
    const AlternatingTM source = std::string(fixture) == "even_a_tape.json" ? load_atm(fixture)
                                                                            : to_alternating_tm(load_normalized(fixture));
    const auto verifier = patm_to_verifier(source);
    const auto back = verifier_to_patm(verifier.spec);
    for (const auto& w : words(source.input_alphabet, 4)) {
      const Verdict a = decide_alternating(source, w, kSteps);
      const Verdict b = decide_alternating(back, w, kSteps);
      const auto rep = check_strong(verifier.spec, w, verifier.spec.natural_mode(), Rational(0));
      v.require(a == b, std::string(fixture) + " '" + w + "' round trip changed the verdict");
      v.require(rep.side == expected_side(a == Verdict::accept), std::string(fixture) + " '" + w + "' verifier verdict");
      ++checked;
    }
  }
  struct Case {
    std::string label;
    VerifierSpec spec;
    DebateMode mode;
    Rational eps;
  };
  AmplifierParams amp;
  amp.r = 1;
  std::vector<Case> cases;
  cases.push_back({"amplified cdeb(anbn)",
                   amplify(compile_cdeb_from_2afa(load_normalized("anbn.json"), 1, Rational(1, 4)), amp).spec,
                   DebateMode::complete, amp.error_bound()});
  cases.push_back({"cdeb(first_last)", compile_cdeb_from_2afa(load_normalized("first_last.json"), 1, Rational(1, 4)).spec,
                   DebateMode::complete, Rational(0)});
  cases.push_back({"zdeb(ends_a)", compile_zdeb_from_2bafa(load_normalized("ends_a_blind.json")).spec, DebateMode::zero,
                   Rational(0)});
  cases.push_back({"pdeb(echo)", compile_pdeb_from_2pafa(load_normalized("echo_private.json")).spec,
                   DebateMode::partial, Rational(0)});
  cases.push_back({"three_quarters", load_verifier("three_quarters.json"), DebateMode::complete, Rational(1, 4)});
  cases.push_back({"refuter_wins", load_verifier("refuter_wins.json"), DebateMode::complete, Rational(0)});
  for (const auto& c : cases) {
    const auto atm = verifier_to_alternating(c.spec, c.mode);
    for (const auto& w : words(c.spec.input_alphabet, 4)) {
      const auto rep = check_strong(c.spec, w, c.mode, c.eps);
      const Verdict verdict = decide_alternating(atm, w, kSteps);
      v.require(rep.side == Side::member || rep.side == Side::nonmember, c.label + " '" + w + "' undecided");
      v.require((rep.side == Side::member) == (verdict == Verdict::accept),
                c.label + " '" + w + "': ATM " + to_string(verdict) + " vs " + to_string(rep.side));
      ++checked;
    }
  }
  v.detail << checked << " (fixture, input) pairs";
}

void criterion_horizon(Verdict_& v) {
  struct Case {
    std::string label;
    VerifierSpec spec;
    std::size_t max_length;
  };
  std::vector<Case> cases;
  cases.push_back({"cdeb(anbn)", compile_cdeb_from_2afa(load_normalized("anbn.json"), 1, Rational(1, 4)).spec, 3});
  cases.push_back({"cdeb(first_last)", compile_cdeb_from_2afa(load_normalized("first_last.json"), 1, Rational(1, 4)).spec, 3});
  AmplifierParams amp;
  amp.r = 1;
  cases.push_back({"amplified cdeb(anbn)",
                   amplify(compile_cdeb_from_2afa(load_normalized("anbn.json"), 1, Rational(1, 4)), amp).spec, 2});
  cases.push_back({"verifier(first_last)", patm_to_verifier(to_alternating_tm(load_normalized("first_last.json"))).spec, 3});
  cases.push_back({"verifier(even_a_tape)", patm_to_verifier(load_atm("even_a_tape.json")).spec, 3});
  for (const char* f : {"three_quarters.json", "coin_match.json", "refuter_wins.json"}) cases.push_back({f, load_verifier(f), 2});
  std::size_t checked = 0;
  for (const auto& c : cases) {
    for (const auto& w : words(c.spec.input_alphabet, c.max_length)) {
      const BigInt C = compute_ensemble_bound(c.spec, w, *c.spec.coin_budget).complete;
      const auto a1 = game_value_accept(c.spec, w, DebateMode::complete, C);
      const auto a2 = game_value_accept(c.spec, w, DebateMode::complete, 2 * C);
      const auto r1 = game_value_reject(c.spec, w, DebateMode::complete, C);
      const auto r2 = game_value_reject(c.spec, w, DebateMode::complete, 2 * C);
      v.require(a1.value == a2.value && r1.value == r2.value, c.label + " '" + w + "' values move between C and 2C");
      v.require(!a2.truncated && !r2.truncated, c.label + " '" + w + "' truncated");
      ++checked;
    }
  }
  v.detail << checked << " (fixture, input) pairs across " << cases.size() << " complete-information verifiers";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict_&)>>> criteria{
      {"multihead simulation checker (aNbN, |w|<=6, c=1)", criterion_cdeb},
      {"one-sided amplifier, r in {0,1,2}", criterion_amplifier},
      {"zero-information checker and pre-accept amplification", criterion_zero_information},
      {"partial-information checker vs alternating decision", criterion_partial_information},
      {"window verifier (t=4, eps=1/2, d=4) and forged-transition catch rate", criterion_window},
      {"QMW evaluation vs game value", criterion_qmw},
      {"QMW reduction equals horizon-bounded game value", criterion_reduction},
      {"verifier/alternating-machine conversions", criterion_conversions},
      {"game values stable between horizons C and 2C", criterion_horizon},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict_ v;
    const auto t0 = Clock::now();
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    failures += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << " -- " << v.detail.str()
              << " (" << seconds_since(t0) << " s)" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}

#include "debate/verifier.hpp"

#include "debate/error.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <tuple>

namespace debate {

const char* to_string(DebateMode mode) {
  switch (mode) {
    case DebateMode::complete: return "complete";
    case DebateMode::zero: return "zero";
    case DebateMode::partial: return "partial";
  }
  return "?";
}

DebateMode parse_debate_mode(std::string_view text) {
  if (text == "complete") return DebateMode::complete;
  if (text == "zero") return DebateMode::zero;
  if (text == "partial") return DebateMode::partial;
  fail(ErrorCode::parse, "unknown debate mode '" + std::string(text) + "'");
}

std::vector<SymbolId> VerifierSpec::alphabet(SymbolClass cls) const {
  std::vector<SymbolId> out;
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i].cls == cls) out.push_back(static_cast<SymbolId>(i));
  return out;
}

std::vector<SymbolId> VerifierSpec::refuter_alphabet() const {
  auto out = alphabet(SymbolClass::refuter_public);
  auto hidden = alphabet(SymbolClass::refuter_private);
  out.insert(out.end(), hidden.begin(), hidden.end());
  return out;
}

std::optional<SymbolId> VerifierSpec::find_symbol(std::string_view symbol_name) const {
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i].name == symbol_name) return static_cast<SymbolId>(i);
  return std::nullopt;
}

SymbolId VerifierSpec::symbol(std::string_view symbol_name) const {
  if (auto id = find_symbol(symbol_name)) return *id;
  fail(ErrorCode::validation, "verifier '" + name + "' has no debate symbol '" + std::string(symbol_name) + "'");
}

DebateMode VerifierSpec::natural_mode() const {
  const bool has_public = !alphabet(SymbolClass::refuter_public).empty();
  const bool has_private = !alphabet(SymbolClass::refuter_private).empty();
  if (!has_private) return DebateMode::complete;
  if (!has_public) return DebateMode::zero;
  return DebateMode::partial;
}

void VerifierSpec::validate() const {
  const std::string where = "verifier '" + name + "'";
  if (!program) fail(ErrorCode::validation, where + ": no program");
  std::set<std::string> names;
  for (const auto& s : symbols) {
    if (s.name == kFlat) fail(ErrorCode::validation, where + ": the hidden marker cannot be a debate symbol");
    if (!names.insert(s.name).second)
      fail(ErrorCode::validation, where + ": debate symbol '" + s.name +
                                      "' is declared twice (public and private refuter alphabets must be "
                                      "disjoint)");
  }
  if (alphabet(SymbolClass::prover).empty()) fail(ErrorCode::validation, where + ": empty prover alphabet");
  if (refuter_alphabet().empty()) fail(ErrorCode::validation, where + ": empty refuter alphabet");
  if (work_alphabet.find(kBlank) == std::string::npos)
    fail(ErrorCode::validation, where + ": work alphabet must contain the blank");
  if (state(accept).halt != Halting::accept || !program->rules(accept).empty())
    fail(ErrorCode::validation, where + ": accept state must be halting without transitions");
  if (state(reject).halt != Halting::reject || !program->rules(reject).empty())
    fail(ErrorCode::validation, where + ": reject state must be halting without transitions");
}

void VerifierSpec::require_mode(DebateMode mode) const {
  if (mode == DebateMode::complete && !alphabet(SymbolClass::refuter_private).empty())
    fail(ErrorCode::precondition, "complete-information mode requires an empty private alphabet");
  if (mode == DebateMode::zero && !alphabet(SymbolClass::refuter_public).empty())
    fail(ErrorCode::precondition, "zero-information mode requires an empty public refuter alphabet");
}

bool VerifierConfiguration::CoreLess::operator()(const VerifierConfiguration& a,
                                                 const VerifierConfiguration& b) const {
  return std::tie(a.state, a.input_pos, a.work_pos, a.work) < std::tie(b.state, b.input_pos, b.work_pos, b.work);
}

bool VerifierConfiguration::same_core(const VerifierConfiguration& other) const {
  return state == other.state && input_pos == other.input_pos && work_pos == other.work_pos && work == other.work;
}

char input_symbol(std::string_view input, int position) {
  const int n = static_cast<int>(input.size());
  if (position == 0) return kLeftEnd;
  if (position == n + 1) return kRightEnd;
  if (position < 0 || position > n + 1) fail(ErrorCode::validation, "input head outside the end-markers");
  return input[static_cast<std::size_t>(position - 1)];
}

VerifierConfiguration initial_configuration(const VerifierSpec& spec) {
  VerifierConfiguration c;
  c.state = spec.start;
  c.work.assign(spec.work_cells, kBlank);
  const Reader reader = spec.state(spec.start).reader;
  c.prover_symbols = reader == Reader::prover ? 1 : 0;
  c.refuter_symbols = reader == Reader::refuter ? 1 : 0;
  return c;
}

VerifierConfiguration step_verifier(const VerifierSpec& spec, const VerifierConfiguration& config,
                                    std::string_view input, std::optional<SymbolId> cell,
                                    std::optional<int> coin) {
  const auto& info = spec.state(config.state);
  if (info.halt != Halting::none)
    fail(ErrorCode::precondition, "halting state '" + info.name + "' has no successor");
  if ((info.reader != Reader::none) != cell.has_value())
    fail(ErrorCode::precondition, cell ? "state '" + info.name + "' does not read a cell"
                                       : "reading state '" + info.name + "' needs a cell symbol");
  if (info.coin != coin.has_value())
    fail(ErrorCode::precondition, coin ? "state '" + info.name + "' does not toss a coin"
                                       : "coin state '" + info.name + "' needs a coin bit");
  if (cell) {
    const auto cls = spec.symbol_info(*cell).cls;
    const bool from_prover = cls == SymbolClass::prover;
    if (from_prover != (info.reader == Reader::prover))
      fail(ErrorCode::precondition, "symbol '" + spec.symbol_info(*cell).name + "' is from the wrong alphabet for '" +
                                        info.name + "'");
  }
  if (coin && *coin != 0 && *coin != 1) fail(ErrorCode::precondition, "coin must be 0 or 1");

  const char in = input_symbol(input, config.input_pos);
  const char work = spec.work_cells == 0 ? kBlank : config.work[static_cast<std::size_t>(config.work_pos)];
  const VerifierRule* rule = nullptr;
  for (const auto& candidate : spec.program->rules(config.state)) {
    if (candidate.input && *candidate.input != in) continue;
    if (candidate.work && *candidate.work != work) continue;
    if (candidate.cell && (!cell || *candidate.cell != *cell)) continue;
    if (candidate.coin && (!coin || *candidate.coin != *coin)) continue;
    rule = &candidate;
    break;
  }
  if (rule == nullptr)
    fail(ErrorCode::validation, "verifier '" + spec.name + "': transition undefined in state '" + info.name + "'");

  VerifierConfiguration next = config;
  next.state = rule->next;
  if (rule->write) {
    if (spec.work_cells == 0) {
      if (*rule->write != kBlank) fail(ErrorCode::validation, "write to a verifier without a work tape");
    } else {
      next.work[static_cast<std::size_t>(next.work_pos)] = *rule->write;
    }
  }
  next.input_pos += rule->input_move;
  if (next.input_pos < 0 || next.input_pos > static_cast<int>(input.size()) + 1)
    fail(ErrorCode::validation, "verifier '" + spec.name + "' moved its input head across an end-marker");
  next.work_pos += rule->work_move;
  if (next.work_pos < 0 || next.work_pos >= std::max<int>(1, static_cast<int>(spec.work_cells)) ||
      (spec.work_cells == 0 && rule->work_move != 0))
    fail(ErrorCode::validation, "verifier '" + spec.name + "' moved its work head off the tape");
  const Reader entered = spec.state(next.state).reader;
  if (entered == Reader::prover) ++next.prover_symbols;
  if (entered == Reader::refuter) ++next.refuter_symbols;
  return next;
}

namespace {

using ConfigIndex = std::map<VerifierConfiguration, std::size_t, VerifierConfiguration::CoreLess>;

bool absorbing(const VerifierSpec& spec, const VerifierConfiguration& c) {
  const auto& info = spec.state(c.state);
  return info.reader != Reader::none || info.halt != Halting::none;
}

// Successors of a non-reading, non-halting configuration with probabilities.
std::vector<std::pair<VerifierConfiguration, Rational>> internal_successors(const VerifierSpec& spec,
                                                                            const VerifierConfiguration& c,
                                                                            std::string_view input) {
  if (spec.state(c.state).coin) {
    const Rational half(1, 2);
    return {{step_verifier(spec, c, input, std::nullopt, 0), half},
            {step_verifier(spec, c, input, std::nullopt, 1), half}};
  }
  return {{step_verifier(spec, c, input, std::nullopt, std::nullopt), Rational(1)}};
}

void add_mass(Absorption& out, ConfigIndex& index, const VerifierSpec& spec, const VerifierConfiguration& c,
              const Rational& mass) {
  const auto halt = spec.state(c.state).halt;
  if (halt == Halting::accept) {
    out.accept += mass;
  } else if (halt == Halting::reject) {
    out.reject += mass;
  } else {
    auto [it, inserted] = index.try_emplace(c, out.reading.size());
    if (inserted) out.reading.emplace_back(c, Rational(0));
    out.reading[it->second].second += mass;
  }
}

// Solves x = P x + B over the transient states; rows of `b` hold direct
// absorption probabilities. Returns the row of state 0.
std::vector<Rational> solve_absorption(const std::vector<std::vector<std::pair<std::size_t, Rational>>>& to_transient,
                                       const std::vector<std::vector<std::pair<std::size_t, Rational>>>& to_absorbing,
                                       std::size_t absorbing_count) {
  const std::size_t n = to_transient.size();
  // States that cannot reach any absorbing target lose their mass.
  std::vector<std::vector<std::size_t>> reverse(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, p] : to_transient[i]) reverse[j].push_back(i);
  std::vector<bool> live(n, false);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n; ++i)
    if (!to_absorbing[i].empty()) {
      live[i] = true;
      stack.push_back(i);
    }
  while (!stack.empty()) {
    std::size_t j = stack.back();
    stack.pop_back();
    for (std::size_t i : reverse[j])
      if (!live[i]) {
        live[i] = true;
        stack.push_back(i);
      }
  }
  std::vector<Rational> result(absorbing_count, Rational(0));
  if (!live[0]) return result;

  std::vector<std::size_t> slot(n, SIZE_MAX);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i)
    if (live[i]) {
      slot[i] = order.size();
      order.push_back(i);
    }
  const std::size_t m = order.size();
  const std::size_t width = m + absorbing_count;
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(width, Rational(0)));
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t i = order[r];
    a[r][r] += 1;
    for (const auto& [j, p] : to_transient[i])
      if (live[j]) a[r][slot[j]] -= p;
    for (const auto& [k, p] : to_absorbing[i]) a[r][m + k] += p;
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    while (pivot < m && a[pivot][col] == 0) ++pivot;
    if (pivot == m) fail(ErrorCode::validation, "singular absorbing-chain system");
    std::swap(a[pivot], a[col]);
    const Rational inv = 1 / a[col][col];
    for (std::size_t k = col; k < width; ++k) a[col][k] *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational factor = a[r][col];
      for (std::size_t k = col; k < width; ++k)
        if (a[col][k] != 0) a[r][k] -= factor * a[col][k];
    }
  }
  const std::size_t row = slot[0];
  for (std::size_t k = 0; k < absorbing_count; ++k) result[k] = a[row][m + k];
  return result;
}

}  // namespace

Absorption settle(const VerifierSpec& spec, const VerifierConfiguration& config, std::string_view input,
                  std::size_t transient_cap) {
  Absorption out;
  ConfigIndex reading_index;
  if (absorbing(spec, config)) {
    add_mass(out, reading_index, spec, config, Rational(1));
    return out;
  }

  // Deterministic fast path: no coins, follow the single successor chain.
  {
    VerifierConfiguration c = config;
    std::set<VerifierConfiguration, VerifierConfiguration::CoreLess> seen;
    bool coins = false;
    while (!absorbing(spec, c)) {
      if (spec.state(c.state).coin) {
        coins = true;
        break;
      }
      if (!seen.insert(c).second) {
        out.diverge = 1;
        return out;
      }
      c = step_verifier(spec, c, input, std::nullopt, std::nullopt);
    }
    if (!coins) {
      add_mass(out, reading_index, spec, c, Rational(1));
      return out;
    }
  }

  ConfigIndex transient_index;
  std::vector<VerifierConfiguration> transients{config};
  transient_index.emplace(config, 0);
  std::vector<VerifierConfiguration> targets;
  ConfigIndex target_index;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> to_transient;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> to_absorbing;
  for (std::size_t i = 0; i < transients.size(); ++i) {
    if (transients.size() > transient_cap)
      fail(ErrorCode::limit, "coin process exceeded the transient configuration cap");
    to_transient.emplace_back();
    to_absorbing.emplace_back();
    for (auto& [next, p] : internal_successors(spec, transients[i], input)) {
      if (absorbing(spec, next)) {
        auto [it, inserted] = target_index.try_emplace(next, targets.size());
        if (inserted) targets.push_back(next);
        to_absorbing[i].emplace_back(it->second, p);
      } else {
        auto [it, inserted] = transient_index.try_emplace(next, transients.size());
        if (inserted) transients.push_back(next);
        to_transient[i].emplace_back(it->second, p);
      }
    }
  }
  const auto mass = solve_absorption(to_transient, to_absorbing, targets.size());
  Rational total = 0;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    if (mass[k] == 0) continue;
    add_mass(out, reading_index, spec, targets[k], mass[k]);
    total += mass[k];
  }
  out.diverge = 1 - total;
  return out;
}

Absorption consume(const VerifierSpec& spec, const VerifierConfiguration& config, std::string_view input,
                   SymbolId symbol, std::size_t transient_cap) {
  const auto& info = spec.state(config.state);
  std::vector<std::pair<VerifierConfiguration, Rational>> after;
  if (info.coin) {
    after.emplace_back(step_verifier(spec, config, input, symbol, 0), Rational(1, 2));
    after.emplace_back(step_verifier(spec, config, input, symbol, 1), Rational(1, 2));
  } else {
    after.emplace_back(step_verifier(spec, config, input, symbol, std::nullopt), Rational(1));
  }
  Absorption out;
  ConfigIndex index;
  for (const auto& [c, p] : after) {
    Absorption part = settle(spec, c, input, transient_cap);
    for (const auto& [rc, q] : part.reading) add_mass(out, index, spec, rc, p * q);
    out.accept += p * part.accept;
    out.reject += p * part.reject;
    out.diverge += p * part.diverge;
  }
  return out;
}

namespace {

struct Move {
  VerifierConfiguration next;
  Reader consumed = Reader::none;
  bool coin = false;
};

std::vector<Move> all_moves(const VerifierSpec& spec, const VerifierConfiguration& c, std::string_view input) {
  const auto& info = spec.state(c.state);
  std::vector<Move> out;
  if (info.halt != Halting::none) return out;
  std::vector<std::optional<SymbolId>> cells{std::nullopt};
  if (info.reader == Reader::prover) {
    cells.clear();
    for (SymbolId s : spec.alphabet(SymbolClass::prover)) cells.emplace_back(s);
  } else if (info.reader == Reader::refuter) {
    cells.clear();
    for (SymbolId s : spec.refuter_alphabet()) cells.emplace_back(s);
  }
  std::vector<std::optional<int>> coins{std::nullopt};
  if (info.coin) coins = {0, 1};
  for (const auto& cell : cells)
    for (const auto& coin : coins) out.push_back(Move{step_verifier(spec, c, input, cell, coin), info.reader, info.coin});
  return out;
}

template <class Key, class Visit>
void explore(Key start, std::size_t cap, const char* what, Visit visit) {
  std::set<Key> seen{start};
  std::deque<Key> queue{start};
  while (!queue.empty()) {
    Key key = std::move(queue.front());
    queue.pop_front();
    visit(key, [&](Key next) {
      if (seen.insert(next).second) {
        if (seen.size() > cap) fail(ErrorCode::limit, std::string(what) + " exceeded its cap");
        queue.push_back(std::move(next));
      }
    });
  }
}

using CoreKey = std::tuple<StateId, int, int, std::string>;

CoreKey core(const VerifierConfiguration& c) { return {c.state, c.input_pos, c.work_pos, c.work}; }

VerifierConfiguration from_core(const CoreKey& key) {
  VerifierConfiguration c;
  std::tie(c.state, c.input_pos, c.work_pos, c.work) = key;
  return c;
}

}  // namespace

std::size_t count_reachable_configurations(const VerifierSpec& spec, std::string_view input, std::size_t cap) {
  std::size_t count = 0;
  explore(core(initial_configuration(spec)), cap, "configuration reachability", [&](const CoreKey& key, auto push) {
    ++count;
    for (auto& move : all_moves(spec, from_core(key), input)) push(core(move.next));
  });
  return count;
}

void validate_alternation(const VerifierSpec& spec, std::string_view input, std::size_t cap) {
  using Key = std::pair<CoreKey, Reader>;
  explore(Key{core(initial_configuration(spec)), Reader::prover}, cap, "alternation check",
          [&](const Key& key, auto push) {
            const auto c = from_core(key.first);
            const auto& info = spec.state(c.state);
            if (info.reader != Reader::none && info.reader != key.second)
              fail(ErrorCode::validation, "verifier '" + spec.name + "': reading state '" + info.name +
                                              "' breaks the C1/C0 alternation");
            for (auto& move : all_moves(spec, c, input)) {
              Reader expected = key.second;
              if (move.consumed == Reader::prover) expected = Reader::refuter;
              if (move.consumed == Reader::refuter) expected = Reader::prover;
              push(Key{core(move.next), expected});
            }
          });
}

void validate_coin_budget(const VerifierSpec& spec, std::string_view input, unsigned budget, std::size_t cap) {
  using Key = std::pair<CoreKey, unsigned>;
  explore(Key{core(initial_configuration(spec)), 0u}, cap, "coin budget check", [&](const Key& key, auto push) {
    for (auto& move : all_moves(spec, from_core(key.first), input)) {
      const unsigned used = key.second + (move.coin ? 1 : 0);
      if (used > budget)
        fail(ErrorCode::validation, "verifier '" + spec.name + "' tosses more than " + std::to_string(budget) +
                                        " coins on some path");
      push(Key{core(move.next), used});
    }
  });
}

DeterministicVerifier::Outcome DeterministicVerifier::run(std::string_view input,
                                                          const std::vector<SymbolId>& debate) const {
  VerifierConfiguration c = initial_configuration(*spec);
  std::size_t next_symbol = 0;
  std::size_t next_coin = 0;
  std::set<VerifierConfiguration, VerifierConfiguration::CoreLess> since_last_read;
  for (;;) {
    const auto& info = spec->state(c.state);
    if (info.halt == Halting::accept) return Outcome::accept;
    if (info.halt == Halting::reject) return Outcome::reject;
    std::optional<SymbolId> cell;
    std::optional<int> coin;
    if (info.reader != Reader::none) {
      if (next_symbol == debate.size()) return Outcome::needs_symbol;
      const Reader expected = next_symbol % 2 == 0 ? Reader::prover : Reader::refuter;
      if (info.reader != expected)
        fail(ErrorCode::validation, "verifier '" + spec->name + "' breaks the C1/C0 alternation");
      cell = debate[next_symbol++];
      since_last_read.clear();
    } else if (!since_last_read.insert(c).second) {
      return Outcome::diverges;
    }
    if (info.coin) {
      if (next_coin == coins.size())
        fail(ErrorCode::validation, "ensemble member exceeded its coin budget of " + std::to_string(coins.size()));
      coin = coins[next_coin++];
    }
    c = step_verifier(*spec, c, input, cell, coin);
  }
}

std::vector<DeterministicVerifier> ensemble_expand(const VerifierSpec& spec, unsigned r) {
  if (!spec.coin_budget)
    fail(ErrorCode::precondition, "verifier '" + spec.name + "' has no constant coin budget");
  if (*spec.coin_budget > r)
    fail(ErrorCode::validation, "verifier '" + spec.name + "' may toss " + std::to_string(*spec.coin_budget) +
                                    " coins, more than r=" + std::to_string(r));
  if (r > 24) fail(ErrorCode::limit, "ensemble of 2^" + std::to_string(r) + " members is too large");
  std::vector<DeterministicVerifier> members;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << r); ++bits) {
    DeterministicVerifier member{&spec, {}};
    for (unsigned j = 0; j < r; ++j) member.coins.push_back(static_cast<int>((bits >> (r - 1 - j)) & 1u));
    members.push_back(std::move(member));
  }
  return members;
}

EnsembleBound compute_ensemble_bound(const VerifierSpec& spec, std::string_view input, unsigned r) {
  validate_coin_budget(spec, input, r);
  EnsembleBound bound;
  bound.coins = r;
  bound.member_configurations = count_reachable_configurations(spec, input);
  bound.complete = 1;
  const std::uint64_t members = std::uint64_t{1} << r;
  for (std::uint64_t i = 0; i < members; ++i) bound.complete *= bound.member_configurations;
  return bound;
}

}  // namespace debate

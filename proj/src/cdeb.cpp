// Complete-information checker for multihead alternating automata: P1
// reports the scanned symbols, the verifier tracks one random head.

#include "arena.hpp"
#include "builder.hpp"

#include "debate/constructions.hpp"
#include "debate/error.hpp"

#include <algorithm>

namespace debate {

namespace {

enum Phase : int { kCoin, kChoice, kChoiceDummy, kClaim, kClaimP0, kRestartDummy, kRewind, kAccept, kReject };

struct Key {
  int phase = kCoin;
  StateId q = 0;
  std::string tuple;  // claimed scanned symbols
  unsigned i = 0;     // claim index, or coin index
  unsigned stage = 0; // 0: claims after the existential step, 1: after the universal step
  unsigned j = 0;     // tracked head
  unsigned count = 1;
  unsigned x = 0;     // coin accumulator
  auto operator<=>(const Key&) const = default;
};

Key phase_key(int phase) {
  Key key;
  key.phase = phase;
  return key;
}

using Table = GeneratedStateTable<Key, VerifierState, VerifierRule>;

struct Ids {
  SymbolId e[2];
  SymbolId restart;
  SymbolId u[2];
  std::map<char, SymbolId> tape;
};

std::string describe(const MultiheadAlternatingMachine& m, const Key& key) {
  static const char* names[] = {"coin", "choice", "choice-dummy", "claim", "claim-p0", "restart-dummy", "rewind", "accept", "reject"};
  std::string out = names[key.phase];
  if (key.phase == kAccept || key.phase == kReject) return out;
  if (key.phase == kCoin) return out + "[" + std::to_string(key.i) + "," + std::to_string(key.x) + ";n=" + std::to_string(key.count) + "]";
  if (key.phase == kRestartDummy || key.phase == kRewind) return out + "[n=" + std::to_string(key.count) + "]";
  return out + "[" + m.states[key.q].name + ";" + key.tuple + ";i=" + std::to_string(key.i) + ";s=" +
         std::to_string(key.stage) + ";j=" + std::to_string(key.j) + ";n=" + std::to_string(key.count) + "]";
}

class CdebReplay {
 public:
  CdebReplay(const detail::AutomatonArena& arena, const Ids& ids) : arena_(arena), ids_(ids) { reset(); }

  SymbolId p1_symbol() const {
    const auto& m = arena_.machine();
    if (phase_ == kChoice) {
      if (m.states[q_].halt == Halting::accept) return ids_.restart;
      return ids_.e[arena_.winning_choice({q_, heads_}).value_or(0)];
    }
    return ids_.tape.at(arena_.symbol_at(heads_[i_]));
  }

  SymbolId p0_symbol(SymbolId p1) const {
    if (phase_ == kClaim && stage_ == 0 && i_ + 1 == arena_.machine().heads) {
      (void)p1;
      return ids_.u[arena_.refuting_choice({q_, heads_}).value_or(0)];
    }
    return ids_.u[0];
  }

  void apply(SymbolId p1, SymbolId p0) {
    const auto& m = arena_.machine();
    if (dead_) return;
    if (phase_ == kChoice) {
      if (p1 == ids_.restart) {
        reset();
      } else if (p1 == ids_.e[0] || p1 == ids_.e[1]) {
        step(p1 == ids_.e[0] ? 0 : 1);
        phase_ = kClaim;
        i_ = 0;
        stage_ = 0;
      } else {
        dead_ = true;
      }
      return;
    }
    auto it = std::find_if(ids_.tape.begin(), ids_.tape.end(), [&](const auto& e) { return e.second == p1; });
    if (it == ids_.tape.end()) {
      dead_ = true;
      return;
    }
    pending_ += it->first;
    if (i_ + 1 < m.heads) {
      ++i_;
      return;
    }
    tuple_ = pending_;
    pending_.clear();
    i_ = 0;
    if (stage_ == 0) {
      step(p0 == ids_.u[0] ? 0 : 1);
      stage_ = 1;
    } else {
      phase_ = kChoice;
    }
  }

 private:
  void reset() {
    q_ = arena_.machine().initial;
    heads_.assign(arena_.machine().heads, 0);
    tuple_.assign(arena_.machine().heads, kLeftEnd);
    phase_ = kChoice;
    i_ = stage_ = 0;
  }

  void step(unsigned b) {
    const auto& m = arena_.machine();
    const AutomatonRule* rule = m.states[q_].halting() ? nullptr : m.match(q_, tuple_);
    if (!rule || b >= rule->choices.size()) {
      dead_ = true;
      return;
    }
    const auto& choice = rule->choices[b];
    q_ = choice.next;
    for (std::size_t h = 0; h < heads_.size(); ++h) heads_[h] += choice.moves[h];
  }

  const detail::AutomatonArena& arena_;
  const Ids& ids_;
  StateId q_ = 0;
  std::vector<int> heads_;
  std::string tuple_, pending_;
  int phase_ = kChoice;
  unsigned i_ = 0, stage_ = 0;
  bool dead_ = false;
};

class CdebHonest final : public HonestPlayerFactory {
 public:
  CdebHonest(MultiheadAlternatingMachine machine, Ids ids)
      : machine_(std::make_shared<MultiheadAlternatingMachine>(std::move(machine))), ids_(std::make_shared<Ids>(std::move(ids))) {}

  HonestStrategies make(std::string_view input) const override {
    auto arena = std::make_shared<detail::AutomatonArena>(*machine_, input);
    auto machine = machine_;
    auto ids = ids_;
    HonestStrategies out;
    out.source_verdict = arena->verdict();
    out.p1 = std::make_shared<FunctionStrategyP1>([machine, arena, ids](const std::vector<VisibleSymbol>& seen) {
      CdebReplay replay(*arena, *ids);
      for (std::size_t t = 0;; ++t) {
        const SymbolId mine = replay.p1_symbol();
        if (t == seen.size()) return mine;
        if (!seen[t]) fail(ErrorCode::strategy, "complete-information protocol received a hidden symbol");
        replay.apply(mine, *seen[t]);
      }
    });
    out.p0 = std::make_shared<FunctionStrategyP0>([machine, arena, ids](const std::vector<SymbolId>& history) {
      CdebReplay replay(*arena, *ids);
      for (std::size_t t = 0; t + 1 < history.size(); t += 2) replay.apply(history[t], history[t + 1]);
      return replay.p0_symbol(history.back());
    });
    return out;
  }

 private:
  std::shared_ptr<const MultiheadAlternatingMachine> machine_;
  std::shared_ptr<const Ids> ids_;
};

}  // namespace

unsigned default_repetitions(unsigned r, const Rational& epsilon) {
  if (epsilon <= 0 || epsilon >= 1) fail(ErrorCode::validation, "epsilon must lie in (0, 1)");
  const Rational miss = 1 - Rational(1) / pow2(r);
  Rational power = miss;
  unsigned c = 1;
  while (power >= epsilon) {
    power *= miss;
    if (++c > 100000) fail(ErrorCode::limit, "repetition count for this epsilon is too large");
  }
  return c;
}

CompiledVerifier compile_cdeb_from_2afa(const MultiheadAlternatingMachine& machine, std::optional<unsigned> c_param,
                                        const Rational& epsilon) {
  detail::require_normalized(machine);
  if (machine.mode != MachineMode::complete)
    fail(ErrorCode::precondition, "machine '" + machine.name + "' is not a complete-information automaton");
  const unsigned k = machine.heads;
  const unsigned r = detail::ceil_log2_unsigned(k);
  const unsigned c = c_param ? *c_param : default_repetitions(r, epsilon);
  if (c == 0) fail(ErrorCode::validation, "repetition count c must be positive");

  CompiledVerifier out;
  VerifierSpec& spec = out.spec;
  spec.name = "cdeb(" + machine.name + ")";
  spec.input_alphabet = machine.alphabet;
  spec.coin_budget = c * r;
  Ids ids;
  ids.e[0] = detail::add_symbol(spec, "e0", SymbolClass::prover);
  ids.e[1] = detail::add_symbol(spec, "e1", SymbolClass::prover);
  ids.restart = detail::add_symbol(spec, kRestartSymbol, SymbolClass::prover);
  for (char ch : detail::scannable(machine.alphabet))
    ids.tape[ch] = detail::add_symbol(spec, std::string(1, ch), SymbolClass::prover);
  ids.u[0] = detail::add_symbol(spec, "u0", SymbolClass::refuter_public);
  ids.u[1] = detail::add_symbol(spec, "u1", SymbolClass::refuter_public);

  auto m = std::make_shared<MultiheadAlternatingMachine>(machine);
  auto builder = [m, ids, k, r, c](const Key& key, Table::Interner& id) -> Table::Definition {
    const auto& M = *m;
    const StateId accept = id(phase_key(kAccept));
    const StateId reject = id(phase_key(kReject));
    const std::string name = describe(M, key);
    Table::Definition def;
    auto with = [&](int phase) {
      Key next = key;
      next.phase = phase;
      return next;
    };
    switch (key.phase) {
      case kAccept: return {detail::halting("accept", Halting::accept), {}};
      case kReject: return {detail::halting("reject", Halting::reject), {}};
      case kCoin: {
        if (key.i < r) {
          def.info = detail::tossing(name);
          for (int bit = 0; bit < 2; ++bit) {
            Key next = key;
            next.i += 1;
            next.x = 2 * key.x + static_cast<unsigned>(bit);
            VerifierRule rule = detail::always(id(next));
            rule.coin = bit;
            def.rules.push_back(rule);
          }
        } else {
          def.info = detail::silent(name);
          Key next{kChoice, M.initial, std::string(k, kLeftEnd), 0, 0, key.x % k, key.count, 0};
          def.rules.push_back(detail::always(id(next)));
        }
        return def;
      }
      case kChoice: {
        def.info = detail::reading(name, Reader::prover);
        const auto& state = M.states[key.q];
        if (state.halt == Halting::accept) {
          Key next = phase_key(kRestartDummy);
          next.count = key.count + 1;
          def.rules.push_back(detail::on_cell(ids.restart, key.count + 1 > c ? accept : id(next)));
        } else if (state.halt == Halting::none) {
          if (const AutomatonRule* rule = M.match(key.q, key.tuple)) {
            for (unsigned b = 0; b < 2 && b < rule->choices.size(); ++b) {
              const auto& choice = rule->choices[b];
              Key next{kChoiceDummy, choice.next, "", 0, 0, key.j, key.count, 0};
              detail::guarded_move(def.rules, ids.e[b], choice.moves[key.j], id(next), reject);
            }
          }
        }
        def.rules.push_back(detail::always(reject));
        return def;
      }
      case kChoiceDummy: {
        def.info = detail::reading(name, Reader::refuter);
        Key next = with(kClaim);
        next.i = 0;
        next.stage = 0;
        next.tuple.clear();
        def.rules.push_back(detail::always(id(next)));
        return def;
      }
      case kClaim: {
        def.info = detail::reading(name, Reader::prover);
        for (const auto& [ch, sym] : ids.tape) {
          Key next = with(kClaimP0);
          next.tuple += ch;
          VerifierRule rule = detail::on_cell(sym, id(next));
          if (key.i == key.j) rule.input = ch;  // the tracked head's claim is checked
          def.rules.push_back(rule);
        }
        def.rules.push_back(detail::always(reject));
        return def;
      }
      case kClaimP0: {
        def.info = detail::reading(name, Reader::refuter);
        if (key.i + 1 < k) {
          Key next = with(kClaim);
          next.i += 1;
          def.rules.push_back(detail::always(id(next)));
        } else if (key.stage == 0) {
          const AutomatonRule* rule = M.states[key.q].halting() ? nullptr : M.match(key.q, key.tuple);
          if (rule) {
            for (unsigned b = 0; b < 2 && b < rule->choices.size(); ++b) {
              const auto& choice = rule->choices[b];
              Key next{kClaim, choice.next, "", 0, 1, key.j, key.count, 0};
              detail::guarded_move(def.rules, ids.u[b], choice.moves[key.j], id(next), reject);
            }
          }
          def.rules.push_back(detail::always(reject));
        } else {
          const auto halt = M.states[key.q].halt;
          Key next{kChoice, key.q, key.tuple, 0, 0, key.j, key.count, 0};
          def.rules.push_back(detail::always(halt == Halting::reject ? reject : id(next)));
        }
        return def;
      }
      case kRestartDummy: {
        def.info = detail::reading(name, Reader::refuter);
        Key next = phase_key(kRewind);
        next.count = key.count;
        def.rules.push_back(detail::always(id(next)));
        return def;
      }
      case kRewind: {
        def.info = detail::silent(name);
        Key next = phase_key(kCoin);
        next.count = key.count;
        VerifierRule home = detail::always(id(next));
        home.input = kLeftEnd;
        def.rules.push_back(home);
        def.rules.push_back(detail::always(id(key), -1));
        return def;
      }
    }
    fail(ErrorCode::validation, "unknown phase");
  };
  auto table = std::make_shared<Table>(builder, 2'000'000);
  spec.start = table->intern(phase_key(kCoin));
  spec.accept = table->intern(phase_key(kAccept));
  spec.reject = table->intern(phase_key(kReject));
  spec.program = table;
  spec.provenance["construction"] = "cdeb";
  spec.provenance["source"] = machine.name;
  spec.provenance["heads"] = std::to_string(k);
  spec.provenance["r"] = std::to_string(r);
  spec.provenance["c"] = std::to_string(c);
  spec.provenance["epsilon"] = to_string(epsilon);
  spec.provenance["nonmember_acceptance_bound"] = to_string(power(1 - Rational(1) / pow2(r), c));
  spec.validate();

  ProtocolPackageLayout layout;
  layout.heads = k;
  layout.p1_package = 1 + 2 * k;
  layout.p0_package = 1;
  layout.restart_symbol = kRestartSymbol;
  layout.schedule = "P1: choice, " + std::to_string(k) + " claims, " + std::to_string(k) +
                    " claims; P0: dummy after each P1 symbol except the universal choice after the " +
                    std::to_string(k) + "th claim";
  spec.provenance["schedule"] = layout.schedule;
  out.layout = layout;
  out.honest = std::make_shared<CdebHonest>(machine, ids);
  return out;
}

HonestStrategies honest_strategies(const CompiledVerifier& compiled, std::string_view input) {
  if (!compiled.honest) fail(ErrorCode::precondition, "construction provides no honest players");
  auto out = compiled.honest->make(input);
  if (out.source_verdict == Verdict::undetermined)
    fail(ErrorCode::precondition, "source machine verdict on this input is undetermined");
  return out;
}

}  // namespace debate

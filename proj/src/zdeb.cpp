// Checkers for blind and private multihead automata: P1 only sends
// existential choices, P0 reports the scanned symbols and the universal
// choices. A caught lie or a malformed P0 message accepts.

#include "arena.hpp"
#include "builder.hpp"

#include "debate/alternation_game.hpp"
#include "debate/constructions.hpp"
#include "debate/error.hpp"

#include <algorithm>

namespace debate {

namespace {

enum Phase : int { kCoin, kChoice, kClaim, kUniversal, kDummy, kAccept, kReject };

struct Key {
  int phase = kCoin;
  int after = kClaim;  // kDummy: the P0-reading phase that follows
  StateId q = 0;
  std::string tuple;   // claims so far in this stage (or the last full tuple at kChoice)
  unsigned i = 0;      // claim index, or coin index
  unsigned stage = 0;  // 0: claims for the universal step, 1: for the next existential step
  unsigned j = 0;      // tracked head
  unsigned x = 0;      // coin accumulator
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
  SymbolId u[2];  // universal choices at visible states (public when `split`)
  SymbolId v[2];  // universal choices at hidden states
  std::map<char, SymbolId> tape;
  bool split = false;  // private variant: visible choices travel over Gamma0
};

std::string describe(const MultiheadAlternatingMachine& m, const Key& key) {
  static const char* names[] = {"coin", "choice", "claim", "universal", "dummy", "accept", "reject"};
  std::string out = names[key.phase];
  if (key.phase == kAccept || key.phase == kReject) return out;
  if (key.phase == kCoin) return out + "[" + std::to_string(key.i) + "," + std::to_string(key.x) + "]";
  if (key.phase == kDummy) out += std::string("->") + names[key.after];
  return out + "[" + m.states[key.q].name + ";" + key.tuple + ";i=" + std::to_string(key.i) + ";s=" +
         std::to_string(key.stage) + ";j=" + std::to_string(key.j) + "]";
}

/// Position of a P0 symbol inside one exchange of 2k+1 P0 messages.
struct Slot {
  enum Kind { claim_before, universal, claim_after } kind;
  unsigned index;
};

Slot p0_slot(std::size_t position, unsigned k) {
  const unsigned within = static_cast<unsigned>(position % (2 * k + 1));
  if (within < k) return {Slot::claim_before, within};
  if (within == k) return {Slot::universal, 0};
  return {Slot::claim_after, within - k - 1};
}

class ZdebHonest final : public HonestPlayerFactory {
 public:
  ZdebHonest(MultiheadAlternatingMachine machine, Ids ids)
      : machine_(std::make_shared<MultiheadAlternatingMachine>(std::move(machine))),
        atm_(std::make_shared<AlternatingTM>(to_alternating_tm(*machine_))),
        ids_(std::make_shared<Ids>(std::move(ids))) {}

  HonestStrategies make(std::string_view input) const override {
    auto arena = std::make_shared<detail::AutomatonArena>(*machine_, input);
    auto atm = atm_;
    auto game = std::shared_ptr<AlternationGame>(new AlternationGame(*atm, input), [atm](AlternationGame* g) { delete g; });
    HonestStrategies out;
    out.source_verdict = game->solve(1'000'000'000);
    auto ids = ids_;
    const unsigned k = machine_->heads;

    // P1 sees only its own choices and the public universal choices, so it
    // follows the information-respecting alternation game.
    out.p1 = std::make_shared<FunctionStrategyP1>([game, ids, k](const std::vector<VisibleSymbol>& seen) {
      NodeId node = game->root();
      const std::size_t exchange = 2 * k + 1;
      for (std::size_t t = 0;; ++t) {
        const bool choosing = t % exchange == 0;
        unsigned choice = 0;
        if (choosing && node > AlternationGame::kLose && game->kind(node) == Quantifier::existential)
          choice = game->winning_choice(node).value_or(0);
        if (t == seen.size()) return ids->e[choosing ? choice : 0];
        if (choosing && node > AlternationGame::kLose && game->kind(node) == Quantifier::existential)
          node = game->after_choice(node, choice);
        if (p0_slot(t, k).kind == Slot::universal && node > AlternationGame::kLose) {
          int label = AlternationGame::kHiddenLabel;
          if (seen[t]) label = *seen[t] == ids->u[1] ? 1 : 0;
          node = game->after_label(node, label).value_or(AlternationGame::kLose);
        }
      }
    });

    // P0 knows the whole configuration: it reports truthfully and refutes
    // with the complete-information attractor when it can.
    out.p0 = std::make_shared<FunctionStrategyP0>([arena, ids, k](const std::vector<SymbolId>& history) {
      detail::HeadConfig c = arena->initial();
      bool alive = true;
      const std::size_t exchange = 2 * k + 1;
      const std::size_t turn = history.size() / 2;  // index of the P0 symbol being chosen
      for (std::size_t t = 0; t <= turn; ++t) {
        const SymbolId p1 = history[2 * t];
        if (t % exchange == 0 && alive) {
          auto next = arena->step(c, p1 == ids->e[1] ? 1 : 0);
          alive = next.has_value();
          if (alive) c = *next;
        }
        const Slot slot = p0_slot(t, k);
        const bool visible = arena->machine().states[c.state].visibility == Visibility::visible;
        if (t == turn) {
          if (!alive) return ids->u[0];
          if (slot.kind == Slot::universal) {
            const unsigned b = arena->refuting_choice(c).value_or(0);
            return (ids->split && !visible) ? ids->v[b] : ids->u[b];
          }
          return ids->tape.at(arena->scanned(c)[slot.index]);
        }
        if (slot.kind == Slot::universal && alive) {
          const SymbolId sent = history[2 * t + 1];
          auto next = arena->step(c, (sent == ids->u[1] || sent == ids->v[1]) ? 1 : 0);
          alive = next.has_value();
          if (alive) c = *next;
        }
      }
      return ids->u[0];
    });
    return out;
  }

 private:
  std::shared_ptr<const MultiheadAlternatingMachine> machine_;
  std::shared_ptr<const AlternatingTM> atm_;
  std::shared_ptr<const Ids> ids_;
};

CompiledVerifier compile_information_checker(const MultiheadAlternatingMachine& machine, bool split) {
  detail::require_normalized(machine);
  const unsigned k = machine.heads;
  const unsigned r = detail::ceil_log2_unsigned(k);

  CompiledVerifier out;
  VerifierSpec& spec = out.spec;
  spec.name = std::string(split ? "pdeb(" : "zdeb(") + machine.name + ")";
  spec.input_alphabet = machine.alphabet;
  spec.coin_budget = r;
  Ids ids;
  ids.split = split;
  ids.e[0] = detail::add_symbol(spec, "e0", SymbolClass::prover);
  ids.e[1] = detail::add_symbol(spec, "e1", SymbolClass::prover);
  const SymbolClass universal_class = split ? SymbolClass::refuter_public : SymbolClass::refuter_private;
  ids.u[0] = detail::add_symbol(spec, "u0", universal_class);
  ids.u[1] = detail::add_symbol(spec, "u1", universal_class);
  if (split) {
    ids.v[0] = detail::add_symbol(spec, "v0", SymbolClass::refuter_private);
    ids.v[1] = detail::add_symbol(spec, "v1", SymbolClass::refuter_private);
  } else {
    ids.v[0] = ids.u[0];
    ids.v[1] = ids.u[1];
  }
  for (char ch : detail::scannable(machine.alphabet))
    ids.tape[ch] = detail::add_symbol(spec, std::string(1, ch), SymbolClass::refuter_private);

  auto m = std::make_shared<MultiheadAlternatingMachine>(machine);
  auto builder = [m, ids, k, r](const Key& key, Table::Interner& id) -> Table::Definition {
    const auto& M = *m;
    const StateId accept = id(phase_key(kAccept));
    const StateId reject = id(phase_key(kReject));
    const std::string name = describe(M, key);
    Table::Definition def;
    // After a step of the simulated machine: halt, or continue reading.
    auto land = [&](StateId q, int phase, unsigned stage) -> StateId {
      const auto halt = M.states[q].halt;
      if (halt == Halting::accept) return accept;
      if (halt == Halting::reject) return reject;
      Key next = phase_key(kDummy);
      next.after = phase;
      next.q = q;
      next.stage = stage;
      next.j = key.j;
      return id(next);
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
          Key next = phase_key(kChoice);
          next.q = M.initial;
          next.tuple = std::string(k, kLeftEnd);
          next.j = key.x % k;
          const auto halt = M.states[M.initial].halt;
          def.rules.push_back(detail::always(halt == Halting::accept ? accept
                                             : halt == Halting::reject ? reject
                                                                       : id(next)));
        }
        return def;
      }
      case kChoice: {
        def.info = detail::reading(name, Reader::prover);
        const AutomatonRule* rule = M.match(key.q, key.tuple);
        for (unsigned b = 0; rule && b < 2 && b < rule->choices.size(); ++b) {
          const auto& choice = rule->choices[b];
          // Claims for the universal step start right away (P0 answers).
          Key next = phase_key(kClaim);
          next.q = choice.next;
          next.j = key.j;
          const StateId target = M.states[choice.next].halting() ? land(choice.next, kClaim, 0) : id(next);
          detail::guarded_move(def.rules, ids.e[b], choice.moves[key.j], target, reject);
        }
        def.rules.push_back(detail::always(reject));
        return def;
      }
      case kDummy: {
        def.info = detail::reading(name, Reader::prover);
        Key next = key;
        next.phase = key.after;
        next.after = kClaim;
        def.rules.push_back(detail::always(id(next)));
        return def;
      }
      case kClaim: {
        def.info = detail::reading(name, Reader::refuter);
        for (const auto& [ch, sym] : ids.tape) {
          Key next = key;
          next.tuple += ch;
          StateId target;
          if (key.i + 1 < k) {
            next.i += 1;
            next.phase = kDummy;
            next.after = kClaim;
            target = id(next);
          } else if (key.stage == 0) {
            next.i = 0;
            next.phase = kDummy;
            next.after = kUniversal;
            target = id(next);
          } else {
            next.i = 0;
            next.stage = 0;
            next.phase = kChoice;
            target = id(next);
          }
          VerifierRule rule = detail::on_cell(sym, target);
          if (key.i == key.j) {
            rule.input = ch;
            def.rules.push_back(rule);
            def.rules.push_back(detail::on_cell(sym, accept));  // caught lying about the tracked head
          } else {
            def.rules.push_back(rule);
          }
        }
        def.rules.push_back(detail::always(accept));  // not a tape symbol
        return def;
      }
      case kUniversal: {
        def.info = detail::reading(name, Reader::refuter);
        const bool visible = M.states[key.q].visibility == Visibility::visible;
        const SymbolId* expected = (ids.split && !visible) ? ids.v : ids.u;
        const AutomatonRule* rule = M.match(key.q, key.tuple);
        for (unsigned b = 0; rule && b < 2 && b < rule->choices.size(); ++b) {
          const auto& choice = rule->choices[b];
          const StateId target = land(choice.next, kClaim, 1);
          detail::guarded_move(def.rules, expected[b], choice.moves[key.j], target, reject);
        }
        def.rules.push_back(detail::always(rule ? accept : reject));  // wrong class or symbol
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
  spec.provenance["construction"] = split ? "pdeb" : "zdeb";
  spec.provenance["source"] = machine.name;
  spec.provenance["heads"] = std::to_string(k);
  spec.provenance["r"] = std::to_string(r);
  spec.provenance["member_acceptance_bound"] = to_string(Rational(1) / pow2(r));
  spec.validate();

  ProtocolPackageLayout layout;
  layout.heads = k;
  layout.p1_package = 1 + 2 * k;
  layout.p0_package = 1 + 2 * k;
  layout.schedule = "P1: choice, " + std::to_string(2 * k) + " dummies; P0: " + std::to_string(k) +
                    " claims, universal choice, " + std::to_string(k) + " claims";
  spec.provenance["schedule"] = layout.schedule;
  out.layout = layout;
  out.honest = std::make_shared<ZdebHonest>(machine, ids);
  return out;
}

}  // namespace

CompiledVerifier compile_zdeb_from_2bafa(const MultiheadAlternatingMachine& machine) {
  if (machine.mode == MachineMode::private_info)
    fail(ErrorCode::precondition, "machine '" + machine.name + "' has visible universal states; use the partial-information compiler");
  return compile_information_checker(machine, false);
}

CompiledVerifier compile_pdeb_from_2pafa(const MultiheadAlternatingMachine& machine) {
  return compile_information_checker(machine, true);
}

}  // namespace debate

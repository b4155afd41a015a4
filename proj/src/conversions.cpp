// Conversions between verifiers and alternating machines.

#include "builder.hpp"

#include "debate/alternation_game.hpp"
#include "debate/constructions.hpp"
#include "debate/error.hpp"

#include <algorithm>

namespace debate {

namespace {

// ---------------------------------------------------------------------------
// Verifier -> alternating machine. The machine's state holds the finite part
// of every ensemble member (state, work tape, coins used); member m's input
// head is machine head m.

struct Member {
  StateId state = 0;
  int work_pos = 0;
  std::string work;
  unsigned coins = 0;
  auto operator<=>(const Member&) const = default;
};

enum Phase : int { kAdvance, kBranch, kDeliver, kHiddenPick, kAccept, kReject };

struct EnsembleKey {
  int phase = kAdvance;
  std::vector<Member> members;
  unsigned cursor = 0;
  int pending = -1;
  auto operator<=>(const EnsembleKey&) const = default;
};

using EnsembleTable = GeneratedStateTable<EnsembleKey, MachineState, AtmRule>;

const VerifierRule* match_rule(const VerifierSpec& spec, const Member& m, char input, std::optional<SymbolId> cell,
                               std::optional<int> coin) {
  const char work = spec.work_cells == 0 ? kBlank : m.work[static_cast<std::size_t>(m.work_pos)];
  for (const auto& rule : spec.program->rules(m.state)) {
    if (rule.input && *rule.input != input) continue;
    if (rule.work && *rule.work != work) continue;
    if (rule.cell && (!cell || *rule.cell != *cell)) continue;
    if (rule.coin && (!coin || *rule.coin != *coin)) continue;
    return &rule;
  }
  fail(ErrorCode::validation, "verifier '" + spec.name + "': transition undefined in state '" + spec.state(m.state).name + "'");
}

Member apply_rule(const VerifierSpec& spec, Member m, const VerifierRule& rule) {
  m.state = rule.next;
  if (rule.write && spec.work_cells > 0) m.work[static_cast<std::size_t>(m.work_pos)] = *rule.write;
  m.work_pos += rule.work_move;
  if (m.work_pos < 0 || m.work_pos >= std::max<int>(1, static_cast<int>(spec.work_cells)))
    fail(ErrorCode::validation, "verifier '" + spec.name + "' moved its work head off the tape");
  return m;
}

bool silent(const VerifierSpec& spec, const Member& m) {
  const auto& info = spec.state(m.state);
  return info.halt == Halting::none && info.reader == Reader::none;
}

std::string member_text(const VerifierSpec& spec, const Member& m) {
  std::string out = spec.state(m.state).name;
  if (spec.work_cells > 0) out += "{" + m.work + "@" + std::to_string(m.work_pos) + "}";
  return out;
}

}  // namespace

AlternatingTM verifier_to_alternating(const VerifierSpec& spec_in, DebateMode mode) {
  spec_in.validate();
  spec_in.require_mode(mode);
  if (!spec_in.coin_budget)
    fail(ErrorCode::precondition, "verifier '" + spec_in.name + "' has an unbounded coin budget");
  const unsigned r = *spec_in.coin_budget;
  if (r > 10) fail(ErrorCode::limit, "ensemble of 2^" + std::to_string(r) + " members is too large to time-share");
  const unsigned count = 1u << r;
  auto spec = std::make_shared<VerifierSpec>(spec_in);
  const std::string scannable = detail::scannable(spec->input_alphabet);
  const auto prover = spec->alphabet(SymbolClass::prover);
  const auto visible = spec->alphabet(SymbolClass::refuter_public);
  const auto hidden = spec->alphabet(SymbolClass::refuter_private);

  auto settle = [spec, count](std::vector<Member> members) -> EnsembleKey {
    EnsembleKey key;
    for (unsigned m = 0; m < count; ++m)
      if (silent(*spec, members[m])) {
        key.phase = kAdvance;
        key.cursor = m;
        key.members = std::move(members);
        return key;
      }
    unsigned accepted = 0;
    bool active = false;
    for (const auto& m : members) {
      const auto halt = spec->state(m.state).halt;
      if (halt == Halting::accept) ++accepted;
      if (halt == Halting::none) active = true;
    }
    if (!active) {
      key.phase = 2 * accepted > count ? kAccept : kReject;
      return key;
    }
    key.phase = kBranch;
    key.members = std::move(members);
    return key;
  };

  auto builder = [spec, r, count, mode, scannable, prover, visible, hidden, settle](
                     const EnsembleKey& key, EnsembleTable::Interner& id) -> EnsembleTable::Definition {
    EnsembleTable::Definition def;
    MachineState& info = def.info;
    std::string name;
    static const char* phases[] = {"advance", "branch", "deliver", "hidden", "accept", "reject"};
    name = phases[key.phase];
    if (key.phase == kAccept || key.phase == kReject) {
      info.name = name;
      info.halt = key.phase == kAccept ? Halting::accept : Halting::reject;
      return def;
    }
    name += "[";
    for (unsigned m = 0; m < count; ++m) name += (m ? "," : "") + member_text(*spec, key.members[m]);
    name += ";" + std::to_string(key.cursor);
    if (key.pending >= 0) name += ";" + spec->symbol_info(static_cast<SymbolId>(key.pending)).name;
    name += "]";
    info.name = name;
    const std::string any(count, kWildcard);

    // One micro-step of member `m`, for every symbol its head may scan.
    auto micro_step = [&](unsigned m, std::optional<SymbolId> cell, auto&& then) {
      const Member& member = key.members[m];
      std::optional<int> coin;
      if (spec->state(member.state).coin) {
        if (member.coins >= r)
          fail(ErrorCode::validation, "verifier '" + spec->name + "' exceeded its coin budget of " + std::to_string(r));
        coin = static_cast<int>((m >> (r - 1 - member.coins)) & 1u);
      }
      for (char c : scannable) {
        const VerifierRule* rule = match_rule(*spec, member, c, cell, coin);
        auto members = key.members;
        members[m] = apply_rule(*spec, member, *rule);
        if (coin) members[m].coins += 1;
        AtmRule out;
        out.scan = any;
        out.scan[m] = c;
        std::vector<int> moves(count, 0);
        moves[m] = rule->input_move;
        out.choices.push_back(AtmChoice{id(then(std::move(members))), "", moves});
        def.rules.push_back(std::move(out));
      }
    };

    switch (key.phase) {
      case kAdvance:
        micro_step(key.cursor, std::nullopt, settle);
        return def;
      case kDeliver: {
        const SymbolId sym = static_cast<SymbolId>(key.pending);
        const Reader reader = spec->symbol_info(sym).cls == SymbolClass::prover ? Reader::prover : Reader::refuter;
        micro_step(key.cursor, sym, [&](std::vector<Member> members) {
          for (unsigned m = key.cursor + 1; m < count; ++m)
            if (spec->state(members[m].state).reader == reader) {
              EnsembleKey next;
              next.phase = kDeliver;
              next.members = std::move(members);
              next.cursor = m;
              next.pending = key.pending;
              return next;
            }
          return settle(std::move(members));
        });
        return def;
      }
      case kBranch:
      case kHiddenPick: {
        Reader reader = Reader::none;
        unsigned first = 0;
        for (unsigned m = 0; m < count; ++m)
          if (spec->state(key.members[m].state).reader != Reader::none) {
            if (reader == Reader::none) first = m;
            else if (reader != spec->state(key.members[m].state).reader)
              fail(ErrorCode::validation, "verifier '" + spec->name + "' reads out of C1/C0 alternation");
            reader = spec->state(key.members[m].state).reader;
          }
        auto deliver = [&](SymbolId s) {
          EnsembleKey next;
          next.phase = kDeliver;
          next.members = key.members;
          next.cursor = first;
          next.pending = static_cast<int>(s);
          return id(next);
        };
        AtmRule out;
        out.scan = any;
        std::vector<int> still(count, 0);
        if (reader == Reader::prover) {
          info.kind = Quantifier::existential;
          for (SymbolId s : prover) out.choices.push_back(AtmChoice{deliver(s), "", still});
        } else {
          info.kind = Quantifier::universal;
          const bool second = key.phase == kHiddenPick;
          if (mode == DebateMode::complete || (mode == DebateMode::partial && !second && hidden.empty())) {
            info.visibility = Visibility::visible;
            for (SymbolId s : visible) out.choices.push_back(AtmChoice{deliver(s), "", still});
          } else if (mode == DebateMode::zero || second || visible.empty()) {
            info.visibility = Visibility::hidden;
            for (SymbolId s : hidden) out.choices.push_back(AtmChoice{deliver(s), "", still});
          } else {
            // Partial information: public symbols are echoed, a private one
            // only shows that it was private.
            info.visibility = Visibility::visible;
            for (SymbolId s : visible) out.choices.push_back(AtmChoice{deliver(s), "", still});
            EnsembleKey next = key;
            next.phase = kHiddenPick;
            out.choices.push_back(AtmChoice{id(next), "", still});
          }
        }
        def.rules.push_back(std::move(out));
        return def;
      }
    }
    fail(ErrorCode::validation, "unknown phase");
  };

  AlternatingTM out;
  out.name = std::string(r == 0 ? "patm(" : "ensemble(") + spec->name + ")";
  out.input_heads = count;
  out.input_alphabet = spec->input_alphabet;
  out.tape_alphabet = std::string(1, kBlank);
  out.mode = mode == DebateMode::complete ? MachineMode::complete
             : mode == DebateMode::zero   ? MachineMode::blind
                                          : MachineMode::private_info;
  auto table = std::make_shared<EnsembleTable>(builder, 2'000'000);
  Member start;
  start.state = spec->start;
  start.work.assign(spec->work_cells, kBlank);
  EnsembleKey root = settle(std::vector<Member>(count, start));
  out.initial = table->intern(root);
  out.program = table;
  return out;
}

AlternatingTM verifier_to_patm(const VerifierSpec& spec) {
  if (!spec.coin_budget || *spec.coin_budget != 0)
    fail(ErrorCode::precondition, "verifier '" + spec.name + "' tosses coins; only coin-free verifiers convert to a PATM");
  return verifier_to_alternating(spec, spec.natural_mode());
}

// ---------------------------------------------------------------------------
// Private ATM -> deterministic verifier.

namespace {

enum PatmPhase : int { kDispatch, kReady, kExistsDummy, kForallDummy, kForall, kPAccept, kPReject };

struct PatmKey {
  int phase = kDispatch;
  StateId q = 0;
  char in = 0;
  char work = 0;
  int choice = -1;
  auto operator<=>(const PatmKey&) const = default;
};

PatmKey patm_key(int phase, StateId q = 0) {
  PatmKey key;
  key.phase = phase;
  key.q = q;
  return key;
}

using PatmTable = GeneratedStateTable<PatmKey, VerifierState, VerifierRule>;

struct PatmIds {
  std::vector<SymbolId> e, u, v;
};

class PatmHonest final : public HonestPlayerFactory {
 public:
  PatmHonest(AlternatingTM machine, PatmIds ids)
      : m_(std::make_shared<AlternatingTM>(std::move(machine))), ids_(std::make_shared<PatmIds>(std::move(ids))) {}

  HonestStrategies make(std::string_view input) const override {
    auto m = m_;
    auto ids = ids_;
    auto keep = [m](AlternationGame* g) { delete g; };
    auto info_game = std::shared_ptr<AlternationGame>(new AlternationGame(*m, input), keep);
    AlternationGame::Options relaxed;
    relaxed.respect_information = false;
    auto full_game = std::shared_ptr<AlternationGame>(new AlternationGame(*m, input, relaxed), keep);
    HonestStrategies out;
    out.source_verdict = info_game->solve(1'000'000'000);
    if (full_game->solve(1'000'000'000) == Verdict::accept && out.source_verdict == Verdict::reject)
      fail(ErrorCode::precondition,
           "the complete-information relaxation accepts this input, so no honest refuter strategy exists");

    // Rounds correspond one-to-one to branching nodes of the game.
    out.p1 = std::make_shared<FunctionStrategyP1>([info_game, ids](const std::vector<VisibleSymbol>& seen) {
      const auto& g = *info_game;
      NodeId node = g.root();
      for (std::size_t t = 0;; ++t) {
        const bool live = node > AlternationGame::kLose;
        const bool exists = live && g.kind(node) == Quantifier::existential;
        const unsigned choice = exists ? g.winning_choice(node).value_or(0) : 0;
        if (t == seen.size()) return ids->e[choice];
        if (!live) continue;
        if (exists) {
          node = g.after_choice(node, choice);
        } else {
          int label = AlternationGame::kHiddenLabel;
          if (seen[t]) {
            auto it = std::find(ids->u.begin(), ids->u.end(), *seen[t]);
            label = static_cast<int>(it - ids->u.begin());
          }
          node = g.after_label(node, label).value_or(AlternationGame::kLose);
        }
      }
    });

    out.p0 = std::make_shared<FunctionStrategyP0>([full_game, m, ids](const std::vector<SymbolId>& history) {
      const auto& g = *full_game;
      NodeId node = g.root();
      const std::size_t turn = history.size() / 2;
      for (std::size_t t = 0;; ++t) {
        const bool live = node > AlternationGame::kLose;
        if (!live) return ids->u.empty() ? ids->v[0] : ids->u[0];
        if (g.kind(node) == Quantifier::existential) {
          if (t == turn) return ids->u.empty() ? ids->v[0] : ids->u[0];
          auto it = std::find(ids->e.begin(), ids->e.end(), history[2 * t]);
          unsigned choice = static_cast<unsigned>(it - ids->e.begin());
          if (choice >= g.choice_count(node)) return ids->u.empty() ? ids->v[0] : ids->u[0];
          node = g.after_choice(node, choice);
        } else {
          const int label = g.refuting_label(node).value_or(0);
          if (t == turn) {
            const StateId q = g.config(g.belief(node).front()).state;
            const bool visible = m->program->info(q).visibility == Visibility::visible;
            return visible ? ids->u[static_cast<std::size_t>(label)] : ids->v[static_cast<std::size_t>(label)];
          }
          auto it = std::find(ids->u.begin(), ids->u.end(), history[2 * t + 1]);
          int sent = static_cast<int>(it - ids->u.begin());
          if (it == ids->u.end()) {
            auto jt = std::find(ids->v.begin(), ids->v.end(), history[2 * t + 1]);
            sent = static_cast<int>(jt - ids->v.begin());
          }
          node = g.after_label(node, sent).value_or(AlternationGame::kLose);
        }
      }
    });
    return out;
  }

 private:
  std::shared_ptr<const AlternatingTM> m_;
  std::shared_ptr<const PatmIds> ids_;
};

}  // namespace

CompiledVerifier patm_to_verifier(const AlternatingTM& machine) {
  machine.validate();
  if (machine.input_heads != 1) fail(ErrorCode::precondition, "PATM conversion needs exactly one input head");
  if (machine.tapes.size() > 1) fail(ErrorCode::precondition, "PATM conversion supports at most one work tape");
  if (machine.input_on_first_tape) fail(ErrorCode::precondition, "PATM conversion reads the input through the input head");
  unsigned cells = 0;
  if (!machine.tapes.empty()) {
    const auto& bound = machine.tapes[0].length;
    if (!bound.table.empty() || bound.polynomial.size() > 1)
      fail(ErrorCode::precondition, "PATM conversion needs a constant work-tape length");
    cells = bound(0);
  }

  // Widest rule decides the choice alphabets.
  unsigned widest = 1;
  {
    std::vector<StateId> stack{machine.initial};
    std::set<StateId> seen{machine.initial};
    while (!stack.empty()) {
      StateId s = stack.back();
      stack.pop_back();
      for (const auto& rule : machine.program->rules(s)) {
        widest = std::max(widest, static_cast<unsigned>(rule.choices.size()));
        for (const auto& c : rule.choices)
          if (seen.insert(c.next).second) {
            if (seen.size() > 1'000'000) fail(ErrorCode::limit, "machine has too many states");
            stack.push_back(c.next);
          }
      }
    }
  }

  CompiledVerifier out;
  VerifierSpec& spec = out.spec;
  spec.name = "verifier(" + machine.name + ")";
  spec.input_alphabet = machine.input_alphabet;
  spec.work_alphabet = machine.tape_alphabet.empty() ? std::string(1, kBlank) : machine.tape_alphabet;
  if (spec.work_alphabet.find(kBlank) == std::string::npos) spec.work_alphabet += kBlank;
  spec.work_cells = cells;
  spec.coin_budget = 0;
  PatmIds ids;
  for (unsigned i = 0; i < widest; ++i) ids.e.push_back(detail::add_symbol(spec, "e" + std::to_string(i), SymbolClass::prover));
  const bool has_public = machine.mode != MachineMode::blind;
  const bool has_private = machine.mode != MachineMode::complete;
  if (has_public)
    for (unsigned i = 0; i < widest; ++i)
      ids.u.push_back(detail::add_symbol(spec, "u" + std::to_string(i), SymbolClass::refuter_public));
  if (has_private)
    for (unsigned i = 0; i < widest; ++i)
      ids.v.push_back(detail::add_symbol(spec, "v" + std::to_string(i), SymbolClass::refuter_private));

  auto m = std::make_shared<AlternatingTM>(machine);
  const std::string inputs = detail::scannable(machine.input_alphabet);
  const std::string works = cells == 0 ? std::string(1, kBlank) : spec.work_alphabet;
  auto builder = [m, ids, inputs, works, cells](const PatmKey& key, PatmTable::Interner& id) -> PatmTable::Definition {
    const auto& M = *m;
    const StateId accept = id(patm_key(kPAccept));
    const StateId reject = id(patm_key(kPReject));
    PatmTable::Definition def;
    const std::string qname = key.phase == kPAccept || key.phase == kPReject ? "" : M.program->info(key.q).name;
    const AtmRule* rule = nullptr;
    if (key.phase != kDispatch && key.phase != kPAccept && key.phase != kPReject)
      rule = M.match(key.q, cells == 0 ? std::string(1, key.in) : std::string{key.in, key.work});
    // The machine step for `choice`, as a verifier rule guarded by `cell`.
    auto apply = [&](int choice, std::optional<SymbolId> cell) {
      const auto& c = rule->choices.at(static_cast<std::size_t>(choice));
      VerifierRule out = detail::always(id(patm_key(kDispatch, c.next)), c.moves.at(0));
      out.cell = cell;
      if (cells > 0) {
        if (!c.writes.empty() && c.writes[0] != kWildcard) out.write = c.writes[0];
        out.work_move = c.moves.at(1);
      }
      return out;
    };
    switch (key.phase) {
      case kPAccept: return {detail::halting("accept", Halting::accept), {}};
      case kPReject: return {detail::halting("reject", Halting::reject), {}};
      case kDispatch: {
        def.info = detail::silent(qname);
        const auto halt = M.program->info(key.q).halt;
        if (halt != Halting::none) {
          def.rules.push_back(detail::always(halt == Halting::accept ? accept : reject));
          return def;
        }
        for (char c : inputs)
          for (char w : works) {
            PatmKey next = key;
            next.phase = kReady;
            next.in = c;
            next.work = w;
            VerifierRule r = detail::always(id(next));
            r.input = c;
            if (cells > 0) r.work = w;
            def.rules.push_back(r);
          }
        return def;
      }
      case kReady: {
        const std::string name = qname + "[" + key.in + (cells ? std::string(1, key.work) : "") + "]";
        if (!rule || rule->choices.empty()) {
          def.info = detail::silent(name);
          def.rules.push_back(detail::always(reject));  // stuck
          return def;
        }
        if (rule->choices.size() == 1) {
          def.info = detail::silent(name);
          def.rules.push_back(apply(0, std::nullopt));
          return def;
        }
        if (M.program->info(key.q).kind == Quantifier::existential) {
          def.info = detail::reading(name, Reader::prover);
          for (std::size_t i = 0; i < rule->choices.size(); ++i) {
            PatmKey next = key;
            next.phase = kExistsDummy;
            next.choice = static_cast<int>(i);
            def.rules.push_back(detail::on_cell(ids.e[i], id(next)));
          }
          def.rules.push_back(detail::always(reject));  // out-of-range choice
        } else {
          def.info = detail::reading(name, Reader::prover);
          PatmKey next = key;
          next.phase = kForall;
          def.rules.push_back(detail::always(id(next)));  // P1 dummy
        }
        return def;
      }
      case kExistsDummy: {
        def.info = detail::reading(qname + "[e" + std::to_string(key.choice) + "]", Reader::refuter);
        def.rules.push_back(apply(key.choice, std::nullopt));
        return def;
      }
      case kForall: {
        def.info = detail::reading(qname + "[" + key.in + "]?", Reader::refuter);
        const bool visible = M.program->info(key.q).visibility == Visibility::visible;
        const auto& expected = visible ? ids.u : ids.v;
        for (std::size_t i = 0; i < rule->choices.size() && i < expected.size(); ++i)
          def.rules.push_back(apply(static_cast<int>(i), expected[i]));
        def.rules.push_back(detail::always(accept));  // wrong class or out of range
        return def;
      }
      case kForallDummy: break;
    }
    fail(ErrorCode::validation, "unknown phase");
  };

  auto table = std::make_shared<PatmTable>(builder, 2'000'000);
  spec.start = table->intern(patm_key(kDispatch, machine.initial));
  spec.accept = table->intern(patm_key(kPAccept));
  spec.reject = table->intern(patm_key(kPReject));
  spec.program = table;
  spec.provenance["construction"] = "patm-to-verifier";
  spec.provenance["source"] = machine.name;
  spec.provenance["mode"] = to_string(machine.mode);
  spec.validate();
  out.honest = std::make_shared<PatmHonest>(machine, ids);
  return out;
}

}  // namespace debate

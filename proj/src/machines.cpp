#include "debate/machines.hpp"

#include "debate/error.hpp"

#include <algorithm>
#include <set>

namespace debate {

const char* to_string(MachineMode mode) {
  switch (mode) {
    case MachineMode::complete: return "complete";
    case MachineMode::blind: return "blind";
    case MachineMode::private_info: return "private";
  }
  return "?";
}

MachineMode parse_machine_mode(std::string_view text) {
  if (text == "complete") return MachineMode::complete;
  if (text == "blind") return MachineMode::blind;
  if (text == "private") return MachineMode::private_info;
  fail(ErrorCode::parse, "unknown machine mode '" + std::string(text) + "'");
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::accept: return "accept";
    case Verdict::reject: return "reject";
    case Verdict::undetermined: return "undetermined";
  }
  return "?";
}

void check_input(std::string_view alphabet, std::string_view input) {
  for (char c : input) {
    if (alphabet.find(c) == std::string_view::npos || c == kLeftEnd || c == kRightEnd)
      fail(ErrorCode::validation, std::string("input symbol '") + c + "' is outside the alphabet");
  }
}

namespace {

bool pattern_matches(std::string_view pattern, std::string_view scanned) {
  for (std::size_t i = 0; i < pattern.size(); ++i)
    if (pattern[i] != kWildcard && pattern[i] != scanned[i]) return false;
  return true;
}

bool all_wildcard(std::string_view pattern) {
  return std::all_of(pattern.begin(), pattern.end(), [](char c) { return c == kWildcard; });
}

Quantifier effective_kind(const MachineState& state) {
  return state.halting() ? Quantifier::existential : state.kind;
}

void check_mode(MachineMode mode, const MachineState& state, const std::string& where) {
  if (state.kind != Quantifier::universal || state.halting()) return;
  if (mode == MachineMode::complete && state.visibility == Visibility::hidden)
    fail(ErrorCode::validation, where + ": complete-information machine has hidden universal state '" +
                                    state.name + "'");
  if (mode == MachineMode::blind && state.visibility == Visibility::visible)
    fail(ErrorCode::validation, where + ": blind machine has visible universal state '" + state.name + "'");
}

}  // namespace

StateId MultiheadAlternatingMachine::find_state(std::string_view state_name) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i].name == state_name) return static_cast<StateId>(i);
  fail(ErrorCode::validation, "unknown state '" + std::string(state_name) + "'");
}

const AutomatonRule* MultiheadAlternatingMachine::match(StateId state, std::string_view scanned) const {
  for (const auto& rule : rules.at(state))
    if (pattern_matches(rule.scan, scanned)) return &rule;
  return nullptr;
}

void MultiheadAlternatingMachine::validate() const {
  const std::string where = "machine '" + name + "'";
  if (heads == 0) fail(ErrorCode::validation, where + ": head count must be positive");
  if (states.empty()) fail(ErrorCode::validation, where + ": no states");
  if (initial >= states.size()) fail(ErrorCode::validation, where + ": initial state out of range");
  if (rules.size() != states.size()) fail(ErrorCode::validation, where + ": rule table size mismatch");
  for (char c : alphabet)
    if (c == kLeftEnd || c == kRightEnd || c == kWildcard)
      fail(ErrorCode::validation, where + ": alphabet contains a reserved symbol");
  for (std::size_t s = 0; s < states.size(); ++s) {
    const auto& state = states[s];
    check_mode(mode, state, where);
    if (state.halting() && !rules[s].empty())
      fail(ErrorCode::validation, where + ": halting state '" + state.name + "' has transitions");
    for (const auto& rule : rules[s]) {
      if (rule.scan.size() != heads)
        fail(ErrorCode::validation, where + ": rule in '" + state.name + "' scans the wrong number of heads");
      for (char c : rule.scan)
        if (c != kWildcard && c != kLeftEnd && c != kRightEnd && alphabet.find(c) == std::string::npos)
          fail(ErrorCode::validation, where + ": rule in '" + state.name + "' scans unknown symbol");
      for (const auto& choice : rule.choices) {
        if (choice.next >= states.size())
          fail(ErrorCode::validation, where + ": transition target out of range");
        if (choice.moves.size() != heads)
          fail(ErrorCode::validation, where + ": move vector has the wrong length");
        for (unsigned h = 0; h < heads; ++h) {
          int d = choice.moves[h];
          if (d < -1 || d > 1) fail(ErrorCode::validation, where + ": head move outside {-1,0,+1}");
          if ((rule.scan[h] == kLeftEnd && d < 0) || (rule.scan[h] == kRightEnd && d > 0))
            fail(ErrorCode::validation, where + ": transition in '" + state.name + "' crosses an end-marker");
        }
      }
    }
  }
  if (!origin.empty() && origin.size() != states.size())
    fail(ErrorCode::validation, where + ": padding map size mismatch");
}

bool MultiheadAlternatingMachine::is_normalized() const {
  if (effective_kind(states.at(initial)) != Quantifier::existential) return false;
  for (std::size_t s = 0; s < states.size(); ++s) {
    const auto& state = states[s];
    if (state.halting()) {
      if (state.kind != Quantifier::existential) return false;
      continue;
    }
    if (rules[s].empty() || !all_wildcard(rules[s].back().scan)) return false;
    for (const auto& rule : rules[s]) {
      if (rule.choices.size() != 2) return false;
      for (const auto& choice : rule.choices)
        if (effective_kind(states[choice.next]) == state.kind) return false;
    }
  }
  return true;
}

namespace {

class Normalizer {
 public:
  explicit Normalizer(const MultiheadAlternatingMachine& source) : src_(source) {
    out_ = source;
    out_.origin.clear();
    for (std::size_t s = 0; s < out_.states.size(); ++s) out_.origin.emplace_back(static_cast<StateId>(s));
    for (auto& state : out_.states)
      if (state.halting()) state.kind = Quantifier::existential;
  }

  MultiheadAlternatingMachine run() {
    const std::size_t original = src_.states.size();
    for (std::size_t s = 0; s < original; ++s) {
      if (out_.states[s].halting()) continue;
      std::vector<AutomatonRule> rewritten;
      bool has_catch_all = false;
      for (const auto& rule : src_.rules[s]) {
        rewritten.push_back(rewrite(static_cast<StateId>(s), rule));
        has_catch_all = has_catch_all || all_wildcard(rule.scan);
        if (has_catch_all) break;
      }
      if (!has_catch_all)
        rewritten.push_back(rewrite(static_cast<StateId>(s), AutomatonRule{std::string(src_.heads, kWildcard), {}}));
      out_.rules[s] = std::move(rewritten);
    }
    out_.initial = bridge(src_.initial, Quantifier::existential);
    return std::move(out_);
  }

 private:
  Quantifier kind_of(StateId s) const { return effective_kind(out_.states[s]); }

  static Quantifier opposite(Quantifier q) {
    return q == Quantifier::existential ? Quantifier::universal : Quantifier::existential;
  }

  std::vector<int> still() const { return std::vector<int>(src_.heads, 0); }

  StateId add_state(MachineState state, std::vector<AutomatonRule> rules) {
    out_.states.push_back(std::move(state));
    out_.rules.push_back(std::move(rules));
    out_.origin.emplace_back(std::nullopt);
    return static_cast<StateId>(out_.states.size() - 1);
  }

  // A state of kind `required` that hands control to `target` without
  // moving any head.
  StateId bridge(StateId target, Quantifier required) {
    if (kind_of(target) == required) return target;
    auto key = std::make_pair(target, required);
    if (auto it = bridges_.find(key); it != bridges_.end()) return it->second;
    MachineState pad;
    pad.name = "pad" + std::string(required == Quantifier::existential ? "E" : "A") + "." + out_.states[target].name;
    pad.kind = required;
    pad.visibility = (required == Quantifier::universal && src_.mode == MachineMode::blind) ? Visibility::hidden
                                                                                             : Visibility::visible;
    HeadChoice hop{target, still()};
    StateId id = add_state(pad, {AutomatonRule{std::string(src_.heads, kWildcard), {hop, hop}}});
    bridges_.emplace(key, id);
    return id;
  }

  StateId reject_state() {
    for (std::size_t s = 0; s < out_.states.size(); ++s)
      if (out_.states[s].halt == Halting::reject) return static_cast<StateId>(s);
    return add_state(MachineState{"reject", Quantifier::existential, Visibility::visible, Halting::reject}, {});
  }

  std::vector<HeadChoice> cascade(StateId owner, Quantifier kind, std::vector<HeadChoice> targets) {
    if (targets.size() == 2) return targets;
    // targets.size() > 2: keep the first, defer the rest to a helper of the
    // same kind reached through a padding state of the opposite kind.
    MachineState helper = out_.states[owner];
    helper.name = out_.states[owner].name + ".rest" + std::to_string(targets.size() - 1);
    std::vector<HeadChoice> rest(targets.begin() + 1, targets.end());
    StateId helper_id = add_state(helper, {});
    auto helper_choices = cascade(owner, kind, std::move(rest));
    out_.rules[helper_id] = {AutomatonRule{std::string(src_.heads, kWildcard), std::move(helper_choices)}};
    return {targets.front(), HeadChoice{bridge(helper_id, opposite(kind)), still()}};
  }

  AutomatonRule rewrite(StateId s, const AutomatonRule& rule) {
    const Quantifier kind = kind_of(s);
    std::vector<HeadChoice> targets;
    for (const auto& choice : rule.choices) targets.push_back(HeadChoice{bridge(choice.next, opposite(kind)), choice.moves});
    if (targets.empty()) targets.push_back(HeadChoice{bridge(reject_state(), opposite(kind)), still()});
    if (targets.size() == 1) targets.push_back(targets.front());
    return AutomatonRule{rule.scan, cascade(s, kind, std::move(targets))};
  }

  const MultiheadAlternatingMachine& src_;
  MultiheadAlternatingMachine out_;
  std::map<std::pair<StateId, Quantifier>, StateId> bridges_;
};

}  // namespace

MultiheadAlternatingMachine normalize_alternation(const MultiheadAlternatingMachine& machine) {
  machine.validate();
  if (machine.is_normalized()) {
    MultiheadAlternatingMachine same = machine;
    if (same.origin.empty())
      for (std::size_t s = 0; s < same.states.size(); ++s) same.origin.emplace_back(static_cast<StateId>(s));
    return same;
  }
  auto result = Normalizer(machine).run();
  result.validate();
  return result;
}

unsigned LengthBound::operator()(unsigned n) const {
  if (!table.empty()) {
    auto it = table.find(n);
    if (it == table.end()) fail(ErrorCode::precondition, "length bound table has no entry for n=" + std::to_string(n));
    return it->second;
  }
  std::int64_t value = 0;
  std::int64_t power = 1;
  for (auto coefficient : polynomial) {
    value += coefficient * power;
    power *= static_cast<std::int64_t>(n);
  }
  if (value < 0) fail(ErrorCode::precondition, "length bound evaluates negative");
  return static_cast<unsigned>(value);
}

const AtmRule* AlternatingTM::match(StateId state, std::string_view scanned) const {
  for (const auto& rule : program->rules(state))
    if (pattern_matches(rule.scan, scanned)) return &rule;
  return nullptr;
}

void AlternatingTM::validate(std::size_t state_cap) const {
  const std::string where = "machine '" + name + "'";
  if (!program) fail(ErrorCode::validation, where + ": no program");
  if (input_on_first_tape && tapes.empty())
    fail(ErrorCode::validation, where + ": input_on_first_tape needs a tape");
  if (tape_alphabet.find(kBlank) == std::string::npos && !tapes.empty())
    fail(ErrorCode::validation, where + ": tape alphabet must contain the blank");
  const std::size_t width = input_heads + tapes.size();
  std::vector<StateId> stack{initial};
  std::set<StateId> seen{initial};
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    if (seen.size() > state_cap) fail(ErrorCode::limit, where + ": state cap exceeded during validation");
    const auto& state = program->info(s);
    check_mode(mode, state, where);
    const auto& rules = program->rules(s);
    if (state.halting() && !rules.empty())
      fail(ErrorCode::validation, where + ": halting state '" + state.name + "' has transitions");
    for (const auto& rule : rules) {
      if (rule.scan.size() != width) fail(ErrorCode::validation, where + ": rule scan width mismatch in '" + state.name + "'");
      for (const auto& choice : rule.choices) {
        if (choice.writes.size() != tapes.size() || choice.moves.size() != width)
          fail(ErrorCode::validation, where + ": choice shape mismatch in '" + state.name + "'");
        for (int d : choice.moves)
          if (d < -1 || d > 1) fail(ErrorCode::validation, where + ": head move outside {-1,0,+1}");
        for (unsigned h = 0; h < input_heads; ++h)
          if ((rule.scan[h] == kLeftEnd && choice.moves[h] < 0) || (rule.scan[h] == kRightEnd && choice.moves[h] > 0))
            fail(ErrorCode::validation, where + ": transition in '" + state.name + "' crosses an end-marker");
        if (state.kind == Quantifier::universal && state.visibility == Visibility::hidden) {
          for (std::size_t t = 0; t < tapes.size(); ++t) {
            if (tapes[t].visibility != Visibility::visible) continue;
            if (choice.writes[t] != kWildcard || choice.moves[input_heads + t] != 0)
              fail(ErrorCode::validation, where + ": hidden universal state '" + state.name +
                                              "' changes common memory");
          }
        }
        if (seen.insert(choice.next).second) stack.push_back(choice.next);
      }
    }
  }
}

AlternatingTM to_alternating_tm(const MultiheadAlternatingMachine& machine) {
  machine.validate();
  std::vector<std::vector<AtmRule>> rules;
  for (const auto& state_rules : machine.rules) {
    auto& out = rules.emplace_back();
    for (const auto& rule : state_rules) {
      AtmRule converted{rule.scan, {}};
      for (const auto& choice : rule.choices) converted.choices.push_back(AtmChoice{choice.next, "", choice.moves});
      out.push_back(std::move(converted));
    }
  }
  AlternatingTM tm;
  tm.name = machine.name;
  tm.input_heads = machine.heads;
  tm.input_alphabet = machine.alphabet;
  tm.mode = machine.mode;
  tm.program = std::make_shared<ExplicitStateTable<MachineState, AtmRule>>(machine.states, std::move(rules));
  tm.initial = machine.initial;
  return tm;
}

}  // namespace debate

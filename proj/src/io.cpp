#include "debate/io.hpp"

#include "debate/error.hpp"

#include <deque>
#include <fstream>
#include <set>
#include <sstream>

namespace debate::io {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::parse, what); }

const Json& field(const Json& json, const char* key) {
  if (!json.is_object() || !json.contains(key)) bad(std::string("missing field '") + key + "'");
  return json.at(key);
}

template <class T>
T get(const Json& json, const char* key) {
  try {
    return field(json, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T get_or(const Json& json, const char* key, T fallback) {
  if (!json.contains(key) || json.at(key).is_null()) return fallback;
  return get<T>(json, key);
}

char single_char(const std::string& text, const char* what) {
  if (text.size() != 1) bad(std::string(what) + " must be a single character, got '" + text + "'");
  return text[0];
}

const char* kind_name(Quantifier q) { return q == Quantifier::existential ? "exists" : "forall"; }
Quantifier parse_kind(const std::string& s) {
  if (s == "exists") return Quantifier::existential;
  if (s == "forall") return Quantifier::universal;
  bad("unknown state kind '" + s + "'");
}
const char* visibility_name(Visibility v) { return v == Visibility::visible ? "visible" : "hidden"; }
Visibility parse_visibility(const std::string& s) {
  if (s == "visible" || s == "public") return Visibility::visible;
  if (s == "hidden" || s == "private") return Visibility::hidden;
  bad("unknown visibility '" + s + "'");
}
const char* halt_name(Halting h) {
  switch (h) {
    case Halting::accept: return "accept";
    case Halting::reject: return "reject";
    case Halting::none: return "none";
  }
  return "none";
}
Halting parse_halt(const std::string& s) {
  if (s == "accept") return Halting::accept;
  if (s == "reject") return Halting::reject;
  if (s == "none") return Halting::none;
  bad("unknown halting tag '" + s + "'");
}

Json state_json(const MachineState& s) {
  Json j;
  j["name"] = s.name;
  j["kind"] = kind_name(s.kind);
  j["visibility"] = visibility_name(s.visibility);
  j["halt"] = halt_name(s.halt);
  return j;
}

MachineState state_from(const Json& j) {
  MachineState s;
  s.name = get<std::string>(j, "name");
  s.kind = parse_kind(get_or<std::string>(j, "kind", "exists"));
  s.visibility = parse_visibility(get_or<std::string>(j, "visibility", "visible"));
  s.halt = parse_halt(get_or<std::string>(j, "halt", "none"));
  return s;
}

Json bound_json(const LengthBound& b) {
  Json j = Json::object();
  if (!b.table.empty()) {
    Json t = Json::object();
    for (const auto& [n, v] : b.table) t[std::to_string(n)] = v;
    j["table"] = t;
  } else {
    j["polynomial"] = b.polynomial;
  }
  return j;
}

LengthBound bound_from(const Json& j) {
  LengthBound b;
  if (j.is_number_unsigned() || j.is_number_integer()) return LengthBound::constant(j.get<unsigned>());
  if (j.contains("table")) {
    for (const auto& [n, v] : j.at("table").items()) b.table[static_cast<unsigned>(std::stoul(n))] = v.get<unsigned>();
  } else {
    b.polynomial = get<std::vector<std::int64_t>>(j, "polynomial");
  }
  return b;
}

std::map<std::string, StateId> index_names(const std::vector<std::string>& names) {
  std::map<std::string, StateId> out;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!out.emplace(names[i], static_cast<StateId>(i)).second) bad("duplicate state name '" + names[i] + "'");
  return out;
}

StateId lookup(const std::map<std::string, StateId>& ids, const std::string& name) {
  auto it = ids.find(name);
  if (it == ids.end()) bad("unknown state '" + name + "'");
  return it->second;
}

/// Reachable states of a state table in discovery order.
template <class Info, class Rule, class Next>
std::vector<StateId> reachable(const StateTable<Info, Rule>& table, std::vector<StateId> roots, std::size_t cap,
                               Next next_of) {
  std::vector<StateId> order;
  std::set<StateId> seen;
  std::deque<StateId> queue;
  for (StateId r : roots)
    if (seen.insert(r).second) queue.push_back(r);
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    order.push_back(s);
    if (order.size() > cap) fail(ErrorCode::limit, "program has more than " + std::to_string(cap) + " reachable states");
    for (const auto& rule : table.rules(s))
      for (StateId n : next_of(rule))
        if (seen.insert(n).second) queue.push_back(n);
  }
  return order;
}

/// Explicit tables keep every state in id order so files round-trip.
template <class Info, class Rule>
std::optional<std::vector<StateId>> explicit_order(const StateTable<Info, Rule>& table) {
  if (!dynamic_cast<const ExplicitStateTable<Info, Rule>*>(&table)) return std::nullopt;
  std::vector<StateId> order(table.known_states());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<StateId>(i);
  return order;
}

std::string unique_name(std::string base, std::set<std::string>& used) {
  if (used.insert(base).second) return base;
  for (int i = 2;; ++i) {
    std::string candidate = base + "#" + std::to_string(i);
    if (used.insert(candidate).second) return candidate;
  }
}

}  // namespace

std::string document_type(const Json& json) { return get<std::string>(json, "type"); }

Json to_json(const MultiheadAlternatingMachine& m) {
  Json j;
  j["type"] = "automaton";
  j["name"] = m.name;
  j["heads"] = m.heads;
  j["alphabet"] = m.alphabet;
  j["mode"] = to_string(m.mode);
  j["initial"] = m.states.at(m.initial).name;
  Json states = Json::array();
  for (const auto& s : m.states) states.push_back(state_json(s));
  j["states"] = states;
  Json rules = Json::object();
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    if (m.rules[s].empty()) continue;
    Json list = Json::array();
    for (const auto& rule : m.rules[s]) {
      Json r;
      r["scan"] = rule.scan;
      Json choices = Json::array();
      for (const auto& c : rule.choices) choices.push_back(Json{{"next", m.states.at(c.next).name}, {"moves", c.moves}});
      r["choices"] = choices;
      list.push_back(r);
    }
    rules[m.states[s].name] = list;
  }
  j["rules"] = rules;
  if (!m.origin.empty()) {
    Json origin = Json::array();
    for (const auto& o : m.origin) origin.push_back(o ? Json(m.states.at(*o).name) : Json(nullptr));
    j["origin"] = origin;
  }
  return j;
}

MultiheadAlternatingMachine automaton_from_json(const Json& j) {
  if (document_type(j) != "automaton") bad("expected an automaton document");
  MultiheadAlternatingMachine m;
  m.name = get_or<std::string>(j, "name", "machine");
  m.heads = get<unsigned>(j, "heads");
  m.alphabet = get<std::string>(j, "alphabet");
  m.mode = parse_machine_mode(get_or<std::string>(j, "mode", "complete"));
  std::vector<std::string> names;
  for (const auto& s : field(j, "states")) {
    m.states.push_back(state_from(s));
    names.push_back(m.states.back().name);
  }
  const auto ids = index_names(names);
  m.initial = lookup(ids, get<std::string>(j, "initial"));
  m.rules.resize(m.states.size());
  if (j.contains("rules")) {
    for (const auto& [state, list] : j.at("rules").items()) {
      auto& out = m.rules[lookup(ids, state)];
      for (const auto& r : list) {
        AutomatonRule rule;
        rule.scan = get<std::string>(r, "scan");
        for (const auto& c : field(r, "choices"))
          rule.choices.push_back(HeadChoice{lookup(ids, get<std::string>(c, "next")), get<std::vector<int>>(c, "moves")});
        out.push_back(std::move(rule));
      }
    }
  }
  if (j.contains("origin")) {
    for (const auto& o : j.at("origin"))
      m.origin.push_back(o.is_null() ? std::nullopt : std::optional<StateId>(lookup(ids, o.get<std::string>())));
  }
  m.validate();
  return m;
}

Json to_json(const AlternatingTM& m, std::size_t state_cap) {
  auto order = explicit_order(*m.program);
  if (!order)
    order = reachable(*m.program, {m.initial}, state_cap, [](const AtmRule& rule) {
      std::vector<StateId> out;
      for (const auto& c : rule.choices) out.push_back(c.next);
      return out;
    });
  std::map<StateId, std::string> names;
  std::set<std::string> used;
  for (StateId s : *order) names[s] = unique_name(m.program->info(s).name, used);
  Json j;
  j["type"] = "atm";
  j["name"] = m.name;
  j["input_heads"] = m.input_heads;
  Json tapes = Json::array();
  for (const auto& t : m.tapes)
    tapes.push_back(Json{{"name", t.name}, {"visibility", visibility_name(t.visibility)}, {"length", bound_json(t.length)}});
  j["tapes"] = tapes;
  j["input_on_first_tape"] = m.input_on_first_tape;
  j["input_alphabet"] = m.input_alphabet;
  j["tape_alphabet"] = m.tape_alphabet;
  j["mode"] = to_string(m.mode);
  j["time_bound"] = bound_json(m.time_bound);
  j["initial"] = names.at(m.initial);
  Json states = Json::array();
  Json rules = Json::object();
  for (StateId s : *order) {
    MachineState info = m.program->info(s);
    info.name = names.at(s);
    states.push_back(state_json(info));
    const auto& list = m.program->rules(s);
    if (list.empty()) continue;
    Json out = Json::array();
    for (const auto& rule : list) {
      Json choices = Json::array();
      for (const auto& c : rule.choices)
        choices.push_back(Json{{"next", names.at(c.next)}, {"writes", c.writes}, {"moves", c.moves}});
      out.push_back(Json{{"scan", rule.scan}, {"choices", choices}});
    }
    rules[info.name] = out;
  }
  j["states"] = states;
  j["rules"] = rules;
  return j;
}

AlternatingTM atm_from_json(const Json& j) {
  if (document_type(j) != "atm") bad("expected an atm document");
  AlternatingTM m;
  m.name = get_or<std::string>(j, "name", "atm");
  m.input_heads = get_or<unsigned>(j, "input_heads", 1);
  if (j.contains("tapes")) {
    for (const auto& t : j.at("tapes"))
      m.tapes.push_back(TapeSpec{get_or<std::string>(t, "name", "tape"),
                                 parse_visibility(get_or<std::string>(t, "visibility", "hidden")),
                                 bound_from(field(t, "length"))});
  }
  m.input_on_first_tape = get_or<bool>(j, "input_on_first_tape", false);
  m.input_alphabet = get<std::string>(j, "input_alphabet");
  m.tape_alphabet = get_or<std::string>(j, "tape_alphabet", std::string(1, kBlank));
  m.mode = parse_machine_mode(get_or<std::string>(j, "mode", "complete"));
  if (j.contains("time_bound")) m.time_bound = bound_from(j.at("time_bound"));
  std::vector<MachineState> states;
  std::vector<std::string> names;
  for (const auto& s : field(j, "states")) {
    states.push_back(state_from(s));
    names.push_back(states.back().name);
  }
  const auto ids = index_names(names);
  std::vector<std::vector<AtmRule>> rules(states.size());
  if (j.contains("rules")) {
    for (const auto& [state, list] : j.at("rules").items()) {
      auto& out = rules[lookup(ids, state)];
      for (const auto& r : list) {
        AtmRule rule;
        rule.scan = get<std::string>(r, "scan");
        for (const auto& c : field(r, "choices"))
          rule.choices.push_back(AtmChoice{lookup(ids, get<std::string>(c, "next")), get_or<std::string>(c, "writes", ""),
                                           get<std::vector<int>>(c, "moves")});
        out.push_back(std::move(rule));
      }
    }
  }
  m.initial = lookup(ids, get<std::string>(j, "initial"));
  m.program = std::make_shared<ExplicitStateTable<MachineState, AtmRule>>(std::move(states), std::move(rules));
  m.validate();
  return m;
}

namespace {

const char* reader_name(Reader r) {
  switch (r) {
    case Reader::prover: return "prover";
    case Reader::refuter: return "refuter";
    case Reader::none: return "none";
  }
  return "none";
}
Reader parse_reader(const std::string& s) {
  if (s == "prover" || s == "C1") return Reader::prover;
  if (s == "refuter" || s == "C0") return Reader::refuter;
  if (s == "none") return Reader::none;
  bad("unknown reader '" + s + "'");
}
const char* class_name(SymbolClass c) {
  switch (c) {
    case SymbolClass::prover: return "prover";
    case SymbolClass::refuter_public: return "public";
    case SymbolClass::refuter_private: return "private";
  }
  return "prover";
}
SymbolClass parse_class(const std::string& s) {
  if (s == "prover") return SymbolClass::prover;
  if (s == "public") return SymbolClass::refuter_public;
  if (s == "private") return SymbolClass::refuter_private;
  bad("unknown symbol class '" + s + "'");
}

SymbolId symbol_by_name(const VerifierSpec& spec, const std::string& name) {
  auto id = spec.find_symbol(name);
  if (!id) bad("unknown debate symbol '" + name + "'");
  return *id;
}

}  // namespace

Json to_json(const VerifierSpec& spec, std::size_t state_cap) {
  auto order = explicit_order(*spec.program);
  if (!order)
    order = reachable(*spec.program, {spec.start, spec.accept, spec.reject}, state_cap,
                      [](const VerifierRule& rule) { return std::vector<StateId>{rule.next}; });
  std::map<StateId, std::string> names;
  std::set<std::string> used;
  for (StateId s : *order) names[s] = unique_name(spec.state(s).name, used);
  Json j;
  j["type"] = "verifier";
  j["name"] = spec.name;
  j["input_alphabet"] = spec.input_alphabet;
  j["work_alphabet"] = spec.work_alphabet;
  j["work_cells"] = spec.work_cells;
  j["coin_budget"] = spec.coin_budget ? Json(*spec.coin_budget) : Json(nullptr);
  Json symbols = Json::array();
  for (const auto& s : spec.symbols) symbols.push_back(Json{{"name", s.name}, {"class", class_name(s.cls)}});
  j["symbols"] = symbols;
  j["start"] = names.at(spec.start);
  j["accept"] = names.at(spec.accept);
  j["reject"] = names.at(spec.reject);
  Json states = Json::array();
  Json rules = Json::object();
  for (StateId s : *order) {
    const auto& info = spec.state(s);
    Json st{{"name", names.at(s)}, {"reader", reader_name(info.reader)}, {"coin", info.coin}, {"halt", halt_name(info.halt)}};
    states.push_back(st);
    const auto& list = spec.program->rules(s);
    if (list.empty()) continue;
    Json out = Json::array();
    for (const auto& rule : list) {
      Json r = Json::object();
      if (rule.input) r["input"] = std::string(1, *rule.input);
      if (rule.work) r["work"] = std::string(1, *rule.work);
      if (rule.cell) r["cell"] = spec.symbol_info(*rule.cell).name;
      if (rule.coin) r["coin"] = *rule.coin;
      r["next"] = names.at(rule.next);
      if (rule.write) r["write"] = std::string(1, *rule.write);
      if (rule.input_move) r["input_move"] = rule.input_move;
      if (rule.work_move) r["work_move"] = rule.work_move;
      out.push_back(r);
    }
    rules[names.at(s)] = out;
  }
  j["states"] = states;
  j["rules"] = rules;
  Json prov = Json::object();
  for (const auto& [k, v] : spec.provenance) prov[k] = v;
  j["provenance"] = prov;
  return j;
}

VerifierSpec verifier_from_json(const Json& j) {
  if (document_type(j) != "verifier") bad("expected a verifier document");
  VerifierSpec spec;
  spec.name = get_or<std::string>(j, "name", "verifier");
  spec.input_alphabet = get<std::string>(j, "input_alphabet");
  spec.work_alphabet = get_or<std::string>(j, "work_alphabet", std::string(1, kBlank));
  spec.work_cells = get_or<unsigned>(j, "work_cells", 0);
  if (j.contains("coin_budget") && !j.at("coin_budget").is_null()) spec.coin_budget = get<unsigned>(j, "coin_budget");
  for (const auto& s : field(j, "symbols"))
    spec.symbols.push_back(DebateSymbol{get<std::string>(s, "name"), parse_class(get<std::string>(s, "class"))});
  std::vector<VerifierState> states;
  std::vector<std::string> names;
  for (const auto& s : field(j, "states")) {
    VerifierState st;
    st.name = get<std::string>(s, "name");
    st.reader = parse_reader(get_or<std::string>(s, "reader", "none"));
    st.coin = get_or<bool>(s, "coin", false);
    st.halt = parse_halt(get_or<std::string>(s, "halt", "none"));
    states.push_back(st);
    names.push_back(st.name);
  }
  const auto ids = index_names(names);
  std::vector<std::vector<VerifierRule>> rules(states.size());
  if (j.contains("rules")) {
    for (const auto& [state, list] : j.at("rules").items()) {
      auto& out = rules[lookup(ids, state)];
      for (const auto& r : list) {
        VerifierRule rule;
        if (r.contains("input")) rule.input = single_char(get<std::string>(r, "input"), "input");
        if (r.contains("work")) rule.work = single_char(get<std::string>(r, "work"), "work");
        if (r.contains("cell")) rule.cell = symbol_by_name(spec, get<std::string>(r, "cell"));
        if (r.contains("coin")) rule.coin = get<int>(r, "coin");
        rule.next = lookup(ids, get<std::string>(r, "next"));
        if (r.contains("write")) rule.write = single_char(get<std::string>(r, "write"), "write");
        rule.input_move = get_or<int>(r, "input_move", 0);
        rule.work_move = get_or<int>(r, "work_move", 0);
        out.push_back(rule);
      }
    }
  }
  spec.start = lookup(ids, get<std::string>(j, "start"));
  spec.accept = lookup(ids, get<std::string>(j, "accept"));
  spec.reject = lookup(ids, get<std::string>(j, "reject"));
  spec.program = std::make_shared<ExplicitStateTable<VerifierState, VerifierRule>>(std::move(states), std::move(rules));
  if (j.contains("provenance"))
    for (const auto& [k, v] : j.at("provenance").items()) spec.provenance[k] = v.get<std::string>();
  spec.validate();
  return spec;
}

namespace {

Json visible_json(const std::vector<VisibleSymbol>& seen, const VerifierSpec& spec) {
  Json out = Json::array();
  HidingMap h(spec);
  for (const auto& s : seen) out.push_back(h.render(s));
  return out;
}

std::vector<VisibleSymbol> visible_from(const Json& j, const VerifierSpec& spec) {
  std::vector<VisibleSymbol> out;
  for (const auto& s : j) {
    const auto name = s.get<std::string>();
    if (name == kFlat) {
      out.emplace_back(std::nullopt);
    } else {
      const SymbolId id = symbol_by_name(spec, name);
      if (spec.symbol_info(id).cls != SymbolClass::refuter_public)
        bad("visible P0 sequences may only hold public symbols or " + std::string(kFlat));
      out.emplace_back(id);
    }
  }
  return out;
}

Json names_json(const std::vector<SymbolId>& symbols, const VerifierSpec& spec) {
  Json out = Json::array();
  for (SymbolId s : symbols) out.push_back(spec.symbol_info(s).name);
  return out;
}

std::vector<SymbolId> names_from(const Json& j, const VerifierSpec& spec) {
  std::vector<SymbolId> out;
  for (const auto& s : j) out.push_back(symbol_by_name(spec, s.get<std::string>()));
  return out;
}

}  // namespace

Json to_json(const TableStrategyP1& strategy, const VerifierSpec& spec) {
  Json j;
  j["type"] = "strategy";
  j["player"] = "P1";
  Json table = Json::array();
  for (const auto& [seen, symbol] : strategy.table)
    table.push_back(Json{{"seen", visible_json(seen, spec)}, {"symbol", spec.symbol_info(symbol).name}});
  j["table"] = table;
  if (strategy.fallback) j["default"] = spec.symbol_info(*strategy.fallback).name;
  return j;
}

Json to_json(const TableStrategyP0& strategy, const VerifierSpec& spec) {
  Json j;
  j["type"] = "strategy";
  j["player"] = "P0";
  Json table = Json::array();
  for (const auto& [history, symbol] : strategy.table)
    table.push_back(Json{{"history", names_json(history, spec)}, {"symbol", spec.symbol_info(symbol).name}});
  j["table"] = table;
  if (strategy.fallback) j["default"] = spec.symbol_info(*strategy.fallback).name;
  return j;
}

Json to_json(const BranchStrategyP0& strategy, const VerifierSpec& spec) {
  Json j;
  j["type"] = "strategy";
  j["player"] = "P0";
  j["branch"] = names_json(strategy.symbols, spec);
  if (strategy.fallback) j["default"] = spec.symbol_info(*strategy.fallback).name;
  return j;
}

std::shared_ptr<const StrategyP1> p1_strategy_from_json(const Json& j, const VerifierSpec& spec) {
  if (document_type(j) != "strategy" || get<std::string>(j, "player") != "P1") bad("expected a P1 strategy document");
  auto out = std::make_shared<TableStrategyP1>();
  if (j.contains("table"))
    for (const auto& row : j.at("table"))
      out->table[visible_from(field(row, "seen"), spec)] = symbol_by_name(spec, get<std::string>(row, "symbol"));
  if (j.contains("default")) out->fallback = symbol_by_name(spec, get<std::string>(j, "default"));
  for (const auto& [seen, s] : out->table)
    if (spec.symbol_info(s).cls != SymbolClass::prover) bad("P1 strategy uses a non-prover symbol");
  return out;
}

std::shared_ptr<const StrategyP0> p0_strategy_from_json(const Json& j, const VerifierSpec& spec) {
  if (document_type(j) != "strategy" || get<std::string>(j, "player") != "P0") bad("expected a P0 strategy document");
  std::optional<SymbolId> fallback;
  if (j.contains("default")) fallback = symbol_by_name(spec, get<std::string>(j, "default"));
  if (j.contains("branch")) {
    auto out = std::make_shared<BranchStrategyP0>();
    out->symbols = names_from(j.at("branch"), spec);
    out->fallback = fallback;
    return out;
  }
  auto out = std::make_shared<TableStrategyP0>();
  if (j.contains("table"))
    for (const auto& row : j.at("table"))
      out->table[names_from(field(row, "history"), spec)] = symbol_by_name(spec, get<std::string>(row, "symbol"));
  out->fallback = fallback;
  return out;
}

TableStrategyP1 materialize(const StrategyP1& strategy, const VerifierSpec& spec, std::size_t depth) {
  TableStrategyP1 out;
  std::vector<VisibleSymbol> options;
  for (SymbolId s : spec.alphabet(SymbolClass::refuter_public)) options.emplace_back(s);
  if (!spec.alphabet(SymbolClass::refuter_private).empty()) options.emplace_back(std::nullopt);
  std::vector<VisibleSymbol> seen;
  std::function<void()> walk = [&] {
    out.table[seen] = strategy.choose(seen);
    if (seen.size() == depth) return;
    for (const auto& o : options) {
      seen.push_back(o);
      walk();
      seen.pop_back();
    }
  };
  walk();
  return out;
}

namespace {

Rational rational_from(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      bad(std::string("bad rational: ") + e.what());
    }
  }
  bad("rationals are written as \"p/q\" strings or integers, got " + j.dump());
}

Json vector_json(const RationalVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

RationalVector vector_from(const Json& j) {
  if (!j.is_array()) bad("expected an array of rationals");
  RationalVector out;
  for (const auto& x : j) out.push_back(rational_from(x));
  return out;
}

}  // namespace

Json to_json(const QmwInstance& q) {
  Json j;
  j["type"] = "qmw";
  j["name"] = q.name;
  j["dimension"] = q.dimension;
  j["prefix"] = q.prefix;
  Json matrices = Json::object();
  for (std::size_t i = 0; i < q.matrices.size(); ++i) {
    Json grid = Json::array();
    for (const auto& row : q.matrices[i]) grid.push_back(vector_json(row));
    matrices[q.matrix_names[i]] = grid;
  }
  j["matrices"] = matrices;
  Json menus = Json::array();
  for (const auto& menu : q.menus) {
    Json names = Json::array();
    for (std::size_t idx : menu) names.push_back(q.matrix_names.at(idx));
    menus.push_back(names);
  }
  j["menus"] = menus;
  j["v"] = vector_json(q.v);
  j["w"] = vector_json(q.w);
  j["threshold"] = to_string(q.threshold);
  Json prov = Json::object();
  for (const auto& [k, v] : q.provenance) prov[k] = v;
  j["provenance"] = prov;
  return j;
}

QmwInstance qmw_from_json(const Json& j) {
  if (document_type(j) != "qmw") bad("expected a qmw document");
  QmwInstance q;
  q.name = get_or<std::string>(j, "name", "qmw");
  q.dimension = get<unsigned>(j, "dimension");
  q.prefix = get<std::string>(j, "prefix");
  std::map<std::string, std::size_t> ids;
  const Json& matrices = field(j, "matrices");
  if (!matrices.is_object()) bad("'matrices' must map names to grids");
  for (const auto& [name, grid] : matrices.items()) {
    if (!grid.is_array()) bad("matrix '" + name + "' must be an array of rows");
    RationalMatrix m;
    for (const auto& row : grid) m.push_back(vector_from(row));
    ids[name] = q.add_matrix(name, std::move(m));
  }
  for (const auto& menu : field(j, "menus")) {
    std::vector<std::size_t> out;
    for (const auto& name : menu) {
      auto it = ids.find(name.get<std::string>());
      if (it == ids.end()) bad("menu names unknown matrix '" + name.get<std::string>() + "'");
      out.push_back(it->second);
    }
    q.menus.push_back(std::move(out));
  }
  q.v = vector_from(field(j, "v"));
  q.w = vector_from(field(j, "w"));
  q.threshold = rational_from(field(j, "threshold"));
  if (j.contains("provenance"))
    for (const auto& [k, v] : j.at("provenance").items()) q.provenance[k] = v.get<std::string>();
  q.validate();
  return q;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad("'" + path.string() + "': " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& json) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write '" + path.string() + "'");
  out << json.dump(2) << '\n';
  if (!out) fail(ErrorCode::io, "write to '" + path.string() + "' failed");
}

}  // namespace debate::io

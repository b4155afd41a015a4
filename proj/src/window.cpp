// Window-checking verifier for time-bounded alternating TMs: P0 transmits
// whole configurations, the verifier spot-checks one random 3-cell window
// of every consecutive pair.

#include "builder.hpp"

#include "debate/constructions.hpp"
#include "debate/error.hpp"

#include <array>
#include <cmath>
#include <deque>
#include <mutex>
#include <set>

namespace debate {

namespace {

constexpr char kPad = '#';

struct Cell {
  bool pad = false;
  bool head = false;
  StateId q = 0;
  char x = kBlank;
};

/// Flat configuration alphabet: tape characters, "state@char" head cells and
/// the padding symbol.
class CellCodec {
 public:
  CellCodec(const AlternatingTM& m, std::size_t state_cap) {
    std::string chars = m.tape_alphabet;
    for (char c : m.input_alphabet)
      if (chars.find(c) == std::string::npos) chars += c;
    if (chars.find(kBlank) == std::string::npos) chars += kBlank;
    if (chars.find(kPad) != std::string::npos)
      fail(ErrorCode::validation, std::string("tape alphabet may not contain the padding symbol '") + kPad + "'");
    chars_ = chars;
    // Reachable states in discovery order.
    std::deque<StateId> queue{m.initial};
    std::set<StateId> seen{m.initial};
    while (!queue.empty()) {
      StateId s = queue.front();
      queue.pop_front();
      states_.push_back(s);
      for (const auto& rule : m.program->rules(s))
        for (const auto& c : rule.choices)
          if (seen.insert(c.next).second) {
            if (seen.size() > state_cap) fail(ErrorCode::limit, "machine has too many states for a window encoding");
            queue.push_back(c.next);
          }
    }
    for (char c : chars_) add(Cell{false, false, 0, c}, std::string(1, c));
    std::set<std::string> names;
    for (StateId s : states_) {
      std::string base = m.program->info(s).name;
      if (!names.insert(base).second) base += "#" + std::to_string(s);
      for (char c : chars_) add(Cell{false, true, s, c}, base + "@" + c);
    }
    add(Cell{true, false, 0, kPad}, std::string(1, kPad));
  }

  std::size_t size() const { return cells_.size(); }
  const Cell& cell(int index) const { return cells_.at(static_cast<std::size_t>(index)); }
  const std::string& name(int index) const { return names_.at(static_cast<std::size_t>(index)); }
  const std::string& chars() const { return chars_; }
  int index(const Cell& c) const {
    auto it = index_.find(key(c));
    if (it == index_.end()) fail(ErrorCode::validation, "configuration cell outside the encoding");
    return it->second;
  }

 private:
  static std::tuple<bool, bool, StateId, char> key(const Cell& c) { return {c.pad, c.head, c.head ? c.q : 0, c.pad ? kPad : c.x}; }
  void add(const Cell& c, std::string name) {
    index_[key(c)] = static_cast<int>(cells_.size());
    cells_.push_back(c);
    names_.push_back(std::move(name));
  }

  std::string chars_;
  std::vector<StateId> states_;
  std::vector<Cell> cells_;
  std::vector<std::string> names_;
  std::map<std::tuple<bool, bool, StateId, char>, int> index_;
};

/// The step the verifier expects between two configurations.
struct Transition {
  bool repeat = true;  // halting or stuck: the configuration must repeat
  StateId next = 0;
  char write = kBlank;
  int move = 0;
};

const AtmRule* live_rule(const AlternatingTM& m, StateId q, char x) {
  if (m.program->info(q).halting()) return nullptr;
  const AtmRule* rule = m.match(q, std::string(1, x));
  return rule && !rule->choices.empty() ? rule : nullptr;
}

Transition transition(const AlternatingTM& m, StateId q, char x, int choice) {
  Transition t;
  const AtmRule* rule = live_rule(m, q, x);
  if (!rule || choice < 0) return t;
  const auto& c = rule->choices.at(static_cast<std::size_t>(choice));
  t.repeat = false;
  t.next = c.next;
  t.write = (c.writes.empty() || c.writes[0] == kWildcard) ? x : c.writes[0];
  t.move = c.moves.empty() ? 0 : c.moves[0];
  return t;
}

/// Whether cells k..k+2 of the next configuration are consistent with the
/// old cells under `t`, for some placement of the head outside the window.
bool legal_window(const CellCodec& codec, const std::array<int, 3>& old, const std::array<int, 3>& cur, unsigned k,
                  unsigned length, const Transition& t) {
  if (t.repeat) return old == cur;
  std::array<Cell, 3> expected;
  int h = -1;
  for (int o = 0; o < 3; ++o) {
    expected[o] = codec.cell(old[o]);
    if (expected[o].head) h = o;
    expected[o].head = false;
    expected[o].q = 0;
  }
  auto matches = [&](const std::array<Cell, 3>& e) {
    for (int o = 0; o < 3; ++o)
      if (codec.index(e[o]) != cur[o]) return false;
    return true;
  };
  const int first = static_cast<int>(k);
  if (h >= 0) {
    const int target_cell = first + h + t.move;
    if (target_cell < 1 || target_cell > static_cast<int>(length)) return false;
    expected[h].x = t.write;
    const int target = h + t.move;
    if (target >= 0 && target < 3) {
      expected[target].head = true;
      expected[target].q = t.next;
    }
    return matches(expected);
  }
  if (matches(expected)) return true;
  if (t.move == 1 && first > 1 && !expected[0].pad) {
    auto e = expected;
    e[0].head = true;
    e[0].q = t.next;
    if (matches(e)) return true;
  }
  if (t.move == -1 && first + 3 <= static_cast<int>(length)) {
    auto e = expected;
    e[2].head = true;
    e[2].q = t.next;
    if (matches(e)) return true;
  }
  return false;
}

enum Phase : int { kCoin, kCellP1, kCellP0, kEndInit, kRewind, kChoiceP1, kChoiceP0, kAccept, kReject };

struct Key {
  int phase = kCoin;
  unsigned sim = 0;  // rejecting simulations completed
  unsigned k = 0;    // window start (1-based)
  unsigned coin_i = 0, coin_v = 0;
  unsigned i = 1;  // configuration being read, or the step c_i -> c_{i+1} at choice rounds
  unsigned p = 1;  // cell being read
  int q_old = -1, x_old = 0, ch = -1;
  int q_cur = -1, x_cur = 0;
  unsigned heads = 0;
  std::array<int, 3> old{-1, -1, -1};
  std::array<int, 3> cur{-1, -1, -1};
  auto operator<=>(const Key&) const = default;
};

Key phase_key(int phase) {
  Key key;
  key.phase = phase;
  return key;
}

using Table = GeneratedStateTable<Key, VerifierState, VerifierRule>;

struct Layout {
  unsigned t = 0, n = 0, length = 0, d = 0;
  unsigned choices = 1;  // widest rule
  bool zero = false;
  std::vector<SymbolId> pick;   // P1 choice symbols
  std::vector<SymbolId> reply;  // P0 choice symbols
  std::vector<SymbolId> cell;   // codec index -> symbol
  std::map<SymbolId, int> cell_of;
  std::map<SymbolId, unsigned> reply_of;

  unsigned rounds_per_simulation() const { return t + (t - 1) * (t + 1); }
};

/// Round structure of one simulation, from the round index.
struct RoundInfo {
  bool choice = false;
  unsigned config = 1;  // configuration whose cell is sent (or step index at choice rounds)
  unsigned cell = 1;
  std::size_t start = 0;  // first round of this simulation
};

RoundInfo round_info(const Layout& l, std::size_t round) {
  RoundInfo info;
  const std::size_t per = l.rounds_per_simulation();
  info.start = round - round % per;
  const unsigned r = static_cast<unsigned>(round % per);
  if (r < l.t) {
    info.config = 1;
    info.cell = r + 1;
    return info;
  }
  const unsigned s = r - l.t;
  const unsigned step = s / (l.t + 1) + 1;
  const unsigned w = s % (l.t + 1);
  if (w == 0) {
    info.choice = true;
    info.config = step;
  } else {
    info.config = step + 1;
    info.cell = w;
  }
  return info;
}

/// First round carrying cell 1 of configuration i within a simulation.
std::size_t config_round(const Layout& l, unsigned i) { return i == 1 ? 0 : l.t + (i - 2) * (l.t + 1) + 1; }

/// Time-synchronized acceptance game of the machine over the configuration
/// sequence c_1..c_t: P1 wins iff c_t is not rejecting.
class TimedGame {
 public:
  TimedGame(const AlternatingTM& m, const Layout& l) : m_(m), l_(l) {}

  MachineConfiguration initial(std::string_view input) const {
    MachineConfiguration c;
    c.state = m_.initial;
    c.tapes.push_back(std::string(l_.length, kBlank));
    std::copy(input.begin(), input.end(), c.tapes[0].begin());
    c.tape_heads.push_back(0);
    return c;
  }

  const AtmRule* rule(const MachineConfiguration& c) const { return live_rule(m_, c.state, scanned(c)); }
  char scanned(const MachineConfiguration& c) const { return c.tapes[0][static_cast<std::size_t>(c.tape_heads[0])]; }
  bool rejecting(const MachineConfiguration& c) const {
    const auto halt = m_.program->info(c.state).halt;
    if (halt == Halting::accept) return false;
    return halt == Halting::reject || rule(c) == nullptr;
  }
  bool universal(const MachineConfiguration& c) const {
    return rule(c) && m_.program->info(c.state).kind == Quantifier::universal;
  }

  MachineConfiguration successor(const MachineConfiguration& c, unsigned choice) const {
    const AtmRule* r = rule(c);
    if (!r) return c;
    const Transition t = transition(m_, c.state, scanned(c), static_cast<int>(choice));
    MachineConfiguration next = c;
    next.state = t.next;
    next.tapes[0][static_cast<std::size_t>(c.tape_heads[0])] = t.write;
    next.tape_heads[0] += t.move;
    if (next.tape_heads[0] < 0 || next.tape_heads[0] >= static_cast<int>(l_.length))
      fail(ErrorCode::validation, "machine '" + m_.name + "' moved its head off the bounded tape");
    return next;
  }

  bool wins(std::vector<MachineConfiguration> belief, unsigned i, bool complete) const {
    std::lock_guard lock(mutex_);
    return wins_locked(std::move(belief), i, complete);
  }

  /// Best P1 choice index for a belief at step i (0 when none wins).
  unsigned best_choice(const std::vector<MachineConfiguration>& belief, unsigned i, bool complete) const {
    std::lock_guard lock(mutex_);
    for (unsigned a = 0; a < l_.choices; ++a) {
      auto next = after_choice(belief, a, complete);
      if (next && wins_locked(std::move(*next), i + 1, complete)) return a;
    }
    return 0;
  }

  /// A universal choice from which P1 loses with complete information.
  unsigned refutation(const MachineConfiguration& c, unsigned i) const {
    std::lock_guard lock(mutex_);
    const AtmRule* r = rule(c);
    for (unsigned b = 0; r && b < r->choices.size(); ++b)
      if (!wins_locked({successor(c, b)}, i + 1, true)) return b;
    return 0;
  }

  /// Successor belief after P1 sends choice `a`; nullopt when the choice is
  /// invalid for some configuration (the verifier rejects).
  std::optional<std::vector<MachineConfiguration>> after_choice(const std::vector<MachineConfiguration>& belief,
                                                                unsigned a, bool complete) const {
    std::vector<MachineConfiguration> out;
    for (const auto& c : belief) {
      const AtmRule* r = rule(c);
      if (!r) {
        out.push_back(c);
      } else if (m_.program->info(c.state).kind == Quantifier::existential) {
        if (a >= r->choices.size()) return std::nullopt;
        out.push_back(successor(c, a));
      } else {
        if (complete) return std::nullopt;  // universal steps are split by the caller
        for (unsigned b = 0; b < r->choices.size(); ++b) out.push_back(successor(c, b));
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  bool wins_locked(std::vector<MachineConfiguration> belief, unsigned i, bool complete) const {
    std::sort(belief.begin(), belief.end());
    belief.erase(std::unique(belief.begin(), belief.end()), belief.end());
    if (i >= l_.t) return std::none_of(belief.begin(), belief.end(), [&](const auto& c) { return rejecting(c); });
    auto key = std::make_tuple(belief, i, complete);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool result = false;
    if (complete && belief.size() == 1 && universal(belief[0])) {
      result = true;
      for (unsigned b = 0; b < rule(belief[0])->choices.size() && result; ++b)
        result = wins_locked({successor(belief[0], b)}, i + 1, true);
    } else {
      for (unsigned a = 0; a < l_.choices && !result; ++a) {
        auto next = after_choice(belief, a, complete);
        result = next && wins_locked(std::move(*next), i + 1, complete);
      }
    }
    memo_.emplace(std::move(key), result);
    return result;
  }

  const AlternatingTM& m_;
  const Layout& l_;
  mutable std::mutex mutex_;
  mutable std::map<std::tuple<std::vector<MachineConfiguration>, unsigned, bool>, bool> memo_;
};

class WindowHonest final : public HonestPlayerFactory {
 public:
  WindowHonest(AlternatingTM machine, Layout layout, std::shared_ptr<const CellCodec> codec)
      : m_(std::make_shared<AlternatingTM>(std::move(machine))),
        l_(std::make_shared<Layout>(std::move(layout))),
        codec_(std::move(codec)) {}

  HonestStrategies make(std::string_view input_view) const override {
    if (input_view.size() != l_->n)
      fail(ErrorCode::precondition, "window verifier was compiled for inputs of length " + std::to_string(l_->n));
    check_input(m_->input_alphabet, input_view);
    const std::string input(input_view);
    auto m = m_;
    auto l = l_;
    auto codec = codec_;
    auto game = std::shared_ptr<TimedGame>(new TimedGame(*m, *l), [m, l](TimedGame* g) { delete g; });
    const bool complete = !l->zero;
    const MachineConfiguration init = game->initial(input);

    HonestStrategies out;
    out.source_verdict = game->wins({init}, 1, complete) ? Verdict::accept : Verdict::reject;
    if (out.source_verdict == Verdict::reject && game->wins({init}, 1, true))
      fail(ErrorCode::precondition,
           "the complete-information relaxation accepts this input, so no honest refuter strategy exists");

    auto describe = [l, codec](const MachineConfiguration& c, unsigned cell) -> SymbolId {
      Cell out;
      if (cell > l->length) {
        out.pad = true;
        out.x = kPad;
      } else {
        out.x = c.tapes[0][cell - 1];
        if (static_cast<int>(cell - 1) == c.tape_heads[0]) {
          out.head = true;
          out.q = c.state;
        }
      }
      return l->cell[static_cast<std::size_t>(codec->index(out))];
    };

    // Decodes configuration i of the current simulation from visible cells.
    auto decode = [l, codec](const std::vector<VisibleSymbol>& seen, std::size_t start,
                             unsigned i) -> std::optional<MachineConfiguration> {
      MachineConfiguration c;
      c.tapes.emplace_back();
      c.tape_heads.push_back(-1);
      const std::size_t base = start + config_round(*l, i);
      for (unsigned p = 1; p <= l->length; ++p) {
        const auto& s = seen.at(base + p - 1);
        if (!s) return std::nullopt;
        auto it = l->cell_of.find(*s);
        if (it == l->cell_of.end()) return std::nullopt;
        const Cell& cell = codec->cell(it->second);
        if (cell.pad) return std::nullopt;
        c.tapes[0] += cell.x;
        if (cell.head) {
          if (c.tape_heads[0] >= 0) return std::nullopt;
          c.tape_heads[0] = static_cast<int>(p - 1);
          c.state = cell.q;
        }
      }
      if (c.tape_heads[0] < 0) return std::nullopt;
      return c;
    };

    out.p1 = std::make_shared<FunctionStrategyP1>([l, game, init, complete, decode](const std::vector<VisibleSymbol>& seen) {
      const RoundInfo info = round_info(*l, seen.size());
      if (!info.choice) return l->pick[0];
      if (complete) {
        auto c = decode(seen, info.start, info.config);
        if (!c) return l->pick[0];
        return l->pick[game->best_choice({*c}, info.config, true)];
      }
      std::vector<MachineConfiguration> belief{init};
      for (unsigned step = 1; step < info.config; ++step) {
        auto next = game->after_choice(belief, game->best_choice(belief, step, false), false);
        if (!next) return l->pick[0];
        belief = std::move(*next);
      }
      return l->pick[game->best_choice(belief, info.config, false)];
    });

    out.p0 = std::make_shared<FunctionStrategyP0>([l, game, init, describe](const std::vector<SymbolId>& history) {
      const std::size_t round = history.size() / 2;
      const RoundInfo info = round_info(*l, round);
      // Replay the true configuration up to this round.
      MachineConfiguration c = init;
      for (unsigned step = 1; step < info.config || (info.choice && step == info.config); ++step) {
        const std::size_t choice_round = info.start + config_round(*l, step) + l->t;
        const bool universal = game->universal(c);
        const AtmRule* rule = game->rule(c);
        unsigned pick = 0;
        if (universal) {
          pick = game->refutation(c, step);
        } else if (rule) {
          const SymbolId sent = history.at(2 * choice_round);
          auto it = std::find(l->pick.begin(), l->pick.end(), sent);
          pick = static_cast<unsigned>(it - l->pick.begin());
          if (pick >= rule->choices.size()) pick = 0;
        }
        if (info.choice && step == info.config) return universal ? l->reply[pick] : l->reply[0];
        c = game->successor(c, pick);
      }
      return describe(c, info.cell);
    });
    return out;
  }

 private:
  std::shared_ptr<const AlternatingTM> m_;
  std::shared_ptr<const Layout> l_;
  std::shared_ptr<const CellCodec> codec_;
};

}  // namespace

unsigned default_simulations(unsigned t, const Rational& epsilon) {
  if (epsilon <= 0 || epsilon >= 1) fail(ErrorCode::validation, "epsilon must lie in (0, 1)");
  const double ln = std::log(1.0 / static_cast<double>(epsilon));
  return std::max(1u, static_cast<unsigned>(std::ceil(ln))) * t;
}

CompiledVerifier compile_window_verifier_from_atm(const AlternatingTM& machine, std::size_t input_length,
                                                  const WindowParams& params) {
  machine.validate();
  if (machine.input_heads != 0 || machine.tapes.size() != 1 || !machine.input_on_first_tape)
    fail(ErrorCode::precondition, "window compiler needs a machine with no input heads and a single tape holding the input");
  const unsigned t = params.t;
  if (t < 3) fail(ErrorCode::validation, "t must be at least 3");
  const unsigned n = static_cast<unsigned>(input_length);
  const unsigned length = machine.tapes[0].length(n);
  if (length < std::max(n, 1u)) fail(ErrorCode::precondition, "tape bound is shorter than the input");
  if (length > t)
    fail(ErrorCode::validation, "t = " + std::to_string(t) + " is too small for configuration descriptions of " +
                                    std::to_string(length) + " cells");
  const unsigned d = params.simulations ? *params.simulations : default_simulations(t, params.epsilon);
  if (d == 0) fail(ErrorCode::validation, "simulation count must be positive");

  auto codec = std::make_shared<const CellCodec>(machine, 100'000);
  CompiledVerifier out;
  VerifierSpec& spec = out.spec;
  spec.name = "window(" + machine.name + ",n=" + std::to_string(n) + ",t=" + std::to_string(t) + ")";
  spec.input_alphabet = machine.input_alphabet;
  spec.coin_budget = std::nullopt;  // rejection sampling of the window index

  Layout layout;
  layout.t = t;
  layout.n = n;
  layout.length = length;
  layout.d = d;
  layout.zero = params.mode == WindowMode::zero;
  {
    std::deque<StateId> queue{machine.initial};
    std::set<StateId> seen{machine.initial};
    while (!queue.empty()) {
      StateId s = queue.front();
      queue.pop_front();
      for (const auto& rule : machine.program->rules(s)) {
        layout.choices = std::max(layout.choices, static_cast<unsigned>(rule.choices.size()));
        for (const auto& c : rule.choices)
          if (seen.insert(c.next).second) queue.push_back(c.next);
      }
    }
  }
  const SymbolClass p0_class = layout.zero ? SymbolClass::refuter_private : SymbolClass::refuter_public;
  for (unsigned a = 0; a < layout.choices; ++a)
    layout.pick.push_back(detail::add_symbol(spec, "c" + std::to_string(a), SymbolClass::prover));
  for (std::size_t c = 0; c < codec->size(); ++c) {
    layout.cell.push_back(detail::add_symbol(spec, codec->name(static_cast<int>(c)), p0_class));
    layout.cell_of[layout.cell.back()] = static_cast<int>(c);
  }
  for (unsigned b = 0; b < layout.choices; ++b) {
    layout.reply.push_back(detail::add_symbol(spec, "a" + std::to_string(b), p0_class));
    layout.reply_of[layout.reply.back()] = b;
  }

  auto m = std::make_shared<AlternatingTM>(machine);
  auto L = std::make_shared<Layout>(layout);
  const unsigned window_count = t - 2;
  const unsigned coin_bits = ceil_log2(window_count);

  auto builder = [m, L, codec, window_count, coin_bits](const Key& key, Table::Interner& id) -> Table::Definition {
    const auto& M = *m;
    const Layout& l = *L;
    const StateId accept = id(phase_key(kAccept));
    const StateId reject = id(phase_key(kReject));
    const std::string name = "window[" + std::to_string(key.phase) + ";sim=" + std::to_string(key.sim) +
                             ";k=" + std::to_string(key.k) + ";i=" + std::to_string(key.i) + ";p=" +
                             std::to_string(key.p) + "]";
    Table::Definition def;
    auto next_simulation = [&]() {
      if (key.sim + 1 >= l.d) return reject;
      Key next = phase_key(kCoin);
      next.sim = key.sim + 1;
      return id(next);
    };
    switch (key.phase) {
      case kAccept: return {detail::halting("accept", Halting::accept), {}};
      case kReject: return {detail::halting("reject", Halting::reject), {}};
      case kCoin: {
        if (key.coin_i < coin_bits) {
          def.info = detail::tossing(name);
          for (int bit = 0; bit < 2; ++bit) {
            Key next = key;
            next.coin_i += 1;
            next.coin_v = 2 * key.coin_v + static_cast<unsigned>(bit);
            VerifierRule rule = detail::always(id(next));
            rule.coin = bit;
            def.rules.push_back(rule);
          }
        } else {
          def.info = detail::silent(name);
          Key next = phase_key(kCoin);
          next.sim = key.sim;
          int move = 0;
          if (key.coin_v < window_count) {
            next.phase = kCellP1;
            next.k = key.coin_v + 1;
            move = 1;  // the input head sits on cell p while cell p of c_1 is read
          }
          def.rules.push_back(detail::always(id(next), move));
        }
        return def;
      }
      case kCellP1: {
        def.info = detail::reading(name, Reader::prover);
        Key next = key;
        next.phase = kCellP0;
        def.rules.push_back(detail::always(id(next)));
        return def;
      }
      case kCellP0: {
        def.info = detail::reading(name, Reader::refuter);
        const bool init = key.i == 1;
        const bool on_input = init && key.p <= l.n;
        if (on_input) {
          VerifierRule shorter = detail::always(reject);  // input shorter than compiled length
          shorter.input = kRightEnd;
          def.rules.push_back(shorter);
        }
        for (std::size_t ci = 0; ci < codec->size(); ++ci) {
          const Cell& cell = codec->cell(static_cast<int>(ci));
          if (cell.pad != (key.p > l.length)) continue;   // length violation: catch-all accepts
          if (cell.head && key.heads >= 1) continue;     // second head: accept
          if (init) {
            const bool want_head = key.p == 1;
            if (cell.head != want_head || (cell.head && cell.q != M.initial)) continue;
            if (!on_input && !cell.pad && cell.x != kBlank) continue;
          }
          Key next = key;
          if (cell.head) {
            next.heads += 1;
            next.q_cur = static_cast<int>(cell.q);
            next.x_cur = cell.x;
          }
          if (key.p >= key.k && key.p <= key.k + 2) next.cur[key.p - key.k] = static_cast<int>(ci);
          StateId target;
          if (!init && key.p == key.k + 2 &&
              !legal_window(*codec, key.old, next.cur, key.k, l.length,
                            transition(M, static_cast<StateId>(key.q_old), static_cast<char>(key.x_old), key.ch))) {
            target = accept;  // a forged transition inside the window
          } else if (key.p < l.t) {
            next.phase = kCellP1;
            next.p += 1;
            target = id(next);
          } else if (next.heads != 1) {
            target = accept;
          } else {
            Key step = next;
            step.old = next.cur;
            step.cur = {-1, -1, -1};
            step.q_old = next.q_cur;
            step.x_old = next.x_cur;
            step.q_cur = -1;
            step.x_cur = 0;
            step.heads = 0;
            step.ch = -1;
            step.p = 1;
            if (init) {
              step.phase = kEndInit;
              target = id(step);
            } else if (key.i == l.t) {
              const StateId q = static_cast<StateId>(next.q_cur);
              const auto halt = M.program->info(q).halt;
              const bool rejecting = halt == Halting::reject ||
                                     (halt == Halting::none && !live_rule(M, q, static_cast<char>(next.x_cur)));
              target = rejecting ? next_simulation() : accept;
            } else {
              step.phase = kChoiceP1;
              target = id(step);
            }
          }
          VerifierRule rule = detail::on_cell(l.cell[ci], target, on_input ? 1 : 0);
          if (on_input) rule.input = cell.x;
          def.rules.push_back(rule);
        }
        def.rules.push_back(detail::always(accept));
        return def;
      }
      case kEndInit: {
        def.info = detail::silent(name);
        Key next = key;
        next.phase = kRewind;
        VerifierRule exact = detail::always(id(next));
        exact.input = kRightEnd;
        def.rules.push_back(exact);
        def.rules.push_back(detail::always(reject));  // input longer than compiled length
        return def;
      }
      case kRewind: {
        def.info = detail::silent(name);
        Key next = key;
        next.phase = kChoiceP1;
        VerifierRule home = detail::always(id(next));
        home.input = kLeftEnd;
        def.rules.push_back(home);
        def.rules.push_back(detail::always(id(key), -1));
        return def;
      }
      case kChoiceP1: {
        def.info = detail::reading(name, Reader::prover);
        const StateId q = static_cast<StateId>(key.q_old);
        const AtmRule* rule = live_rule(M, q, static_cast<char>(key.x_old));
        Key next = key;
        next.phase = kChoiceP0;
        if (rule && M.program->info(q).kind == Quantifier::existential) {
          for (unsigned a = 0; a < rule->choices.size(); ++a) {
            next.ch = static_cast<int>(a);
            def.rules.push_back(detail::on_cell(l.pick[a], id(next)));
          }
          def.rules.push_back(detail::always(reject));
        } else {
          def.rules.push_back(detail::always(id(next)));
        }
        return def;
      }
      case kChoiceP0: {
        def.info = detail::reading(name, Reader::refuter);
        const StateId q = static_cast<StateId>(key.q_old);
        const AtmRule* rule = live_rule(M, q, static_cast<char>(key.x_old));
        Key next = key;
        next.phase = kCellP1;
        next.i = key.i + 1;
        next.p = 1;
        if (rule && M.program->info(q).kind == Quantifier::universal) {
          for (unsigned b = 0; b < rule->choices.size(); ++b) {
            next.ch = static_cast<int>(b);
            def.rules.push_back(detail::on_cell(l.reply[b], id(next)));
          }
          def.rules.push_back(detail::always(accept));
        } else {
          def.rules.push_back(detail::always(id(next)));
        }
        return def;
      }
    }
    fail(ErrorCode::validation, "unknown phase");
  };

  auto table = std::make_shared<Table>(builder, 4'000'000);
  spec.start = table->intern(phase_key(kCoin));
  spec.accept = table->intern(phase_key(kAccept));
  spec.reject = table->intern(phase_key(kReject));
  spec.program = table;
  spec.provenance["construction"] = "window";
  spec.provenance["source"] = machine.name;
  spec.provenance["mode"] = layout.zero ? "zero" : "complete";
  spec.provenance["input_length"] = std::to_string(n);
  spec.provenance["tape_length"] = std::to_string(length);
  spec.provenance["t"] = std::to_string(t);
  spec.provenance["epsilon"] = to_string(params.epsilon);
  spec.provenance["d"] = std::to_string(d);
  spec.provenance["member_rejection_bound"] = to_string(power(Rational(t - 1, t), d));
  spec.provenance["window_catch_probability"] = to_string(Rational(1, window_count));
  spec.validate();

  ProtocolPackageLayout package;
  package.heads = 1;
  package.p1_package = 1;
  package.p0_package = t;
  package.schedule = "per simulation: " + std::to_string(t) + " cells of c_1, then for each of " + std::to_string(t - 1) +
                     " steps a choice round (P1 'c' index at existential, P0 'a' index at universal configurations) "
                     "and " + std::to_string(t) + " cells of the next configuration; P1 sends dummies during cells";
  spec.provenance["schedule"] = package.schedule;
  out.layout = package;
  out.honest = std::make_shared<WindowHonest>(machine, layout, codec);
  return out;
}

}  // namespace debate

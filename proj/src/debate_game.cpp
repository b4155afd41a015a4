#include "debate/debate_game.hpp"

#include "debate/error.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <exception>
#include <mutex>
#include <random>
#include <set>
#include <thread>
#include <tuple>

namespace debate {

VisibleSymbol HidingMap::operator()(SymbolId symbol) const {
  const auto cls = spec_->symbol_info(symbol).cls;
  if (cls == SymbolClass::prover)
    fail(ErrorCode::validation, "h is undefined on prover symbol '" + spec_->symbol_info(symbol).name + "'");
  if (cls == SymbolClass::refuter_private) return std::nullopt;
  return symbol;
}

std::string HidingMap::render(VisibleSymbol symbol) const {
  return symbol ? spec_->symbol_info(*symbol).name : std::string(kFlat);
}

std::vector<VisibleSymbol> HidingMap::apply(const std::vector<SymbolId>& p0_symbols) const {
  std::vector<VisibleSymbol> out;
  out.reserve(p0_symbols.size());
  for (SymbolId s : p0_symbols) out.push_back((*this)(s));
  return out;
}

SymbolId TableStrategyP1::choose(const std::vector<VisibleSymbol>& visible_p0) const {
  if (auto it = table.find(visible_p0); it != table.end()) return it->second;
  if (fallback) return *fallback;
  fail(ErrorCode::strategy, "P1 strategy undefined after " + std::to_string(visible_p0.size()) + " P0 symbols");
}

SymbolId TableStrategyP0::choose(const std::vector<SymbolId>& history) const {
  if (auto it = table.find(history); it != table.end()) return it->second;
  if (fallback) return *fallback;
  fail(ErrorCode::strategy, "P0 strategy undefined on a history of length " + std::to_string(history.size()));
}

SymbolId BranchStrategyP0::choose(const std::vector<SymbolId>& history) const {
  const std::size_t turn = history.size() / 2;
  if (turn < symbols.size()) return symbols[turn];
  if (fallback) return *fallback;
  fail(ErrorCode::strategy, "P0 branch has no symbol for turn " + std::to_string(turn));
}

const char* to_string(ValueKind kind) {
  return kind == ValueKind::accept_maxmin ? "accept-maxmin" : "reject-minmax";
}

const char* to_string(Side side) {
  switch (side) {
    case Side::member: return "member-side";
    case Side::nonmember: return "nonmember-side";
    case Side::neither: return "neither";
    case Side::undetermined: return "undetermined";
  }
  return "?";
}

namespace {

using CoreLess = VerifierConfiguration::CoreLess;

/// Coin distribution of the verifier between debate symbols.
struct Dist {
  std::vector<std::pair<VerifierConfiguration, Rational>> reading;  // sorted by core
  Rational accept = 0;
  Rational reject = 0;
};

int compare(const Dist& a, const Dist& b) {
  CoreLess less;
  const std::size_t n = std::min(a.reading.size(), b.reading.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (less(a.reading[i].first, b.reading[i].first)) return -1;
    if (less(b.reading[i].first, a.reading[i].first)) return 1;
    if (a.reading[i].second != b.reading[i].second) return a.reading[i].second < b.reading[i].second ? -1 : 1;
  }
  if (a.reading.size() != b.reading.size()) return a.reading.size() < b.reading.size() ? -1 : 1;
  if (a.accept != b.accept) return a.accept < b.accept ? -1 : 1;
  if (a.reject != b.reject) return a.reject < b.reject ? -1 : 1;
  return 0;
}

struct DistLess {
  bool operator()(const Dist& a, const Dist& b) const { return compare(a, b) < 0; }
};

Dist to_dist(const Absorption& abs) {
  Dist d;
  std::map<VerifierConfiguration, Rational, CoreLess> merged;
  for (const auto& [c, p] : abs.reading) merged[c] += p;
  for (auto& [c, p] : merged) {
    VerifierConfiguration core = c;
    core.prover_symbols = core.refuter_symbols = 0;
    d.reading.emplace_back(std::move(core), p);
  }
  d.accept = abs.accept;
  d.reject = abs.reject;
  return d;
}

/// Advances distributions by one debate symbol, caching per-configuration
/// absorption results.
class Stepper {
 public:
  Stepper(const VerifierSpec& spec, std::string_view input) : spec_(spec), input_(input) {}

  Dist initial() const { return to_dist(settle(spec_, initial_configuration(spec_), input_)); }

  Dist advance(const Dist& d, SymbolId symbol, Reader expected) {
    if (symbol >= spec_.symbols.size()) fail(ErrorCode::strategy, "symbol id out of range");
    const bool from_prover = spec_.symbol_info(symbol).cls == SymbolClass::prover;
    if (from_prover != (expected == Reader::prover))
      fail(ErrorCode::strategy, "symbol '" + spec_.symbol_info(symbol).name + "' played on the wrong turn");
    Absorption merged;
    merged.accept = d.accept;
    merged.reject = d.reject;
    for (const auto& [c, p] : d.reading) {
      if (spec_.state(c.state).reader != expected)
        fail(ErrorCode::validation, "verifier '" + spec_.name + "' reads out of C1/C0 alternation in state '" +
                                        spec_.state(c.state).name + "'");
      const Absorption& abs = consume_cached(c, symbol);
      for (const auto& [rc, q] : abs.reading) merged.reading.emplace_back(rc, p * q);
      merged.accept += p * abs.accept;
      merged.reject += p * abs.reject;
    }
    return to_dist(merged);
  }

 private:
  const Absorption& consume_cached(const VerifierConfiguration& c, SymbolId symbol) {
    auto key = std::make_pair(c, symbol);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, consume(spec_, c, input_, symbol)).first;
    return it->second;
  }

  struct KeyLess {
    bool operator()(const std::pair<VerifierConfiguration, SymbolId>& a,
                    const std::pair<VerifierConfiguration, SymbolId>& b) const {
      CoreLess less;
      if (a.second != b.second) return a.second < b.second;
      return less(a.first, b.first);
    }
  };

  const VerifierSpec& spec_;
  std::string_view input_;
  std::map<std::pair<VerifierConfiguration, SymbolId>, Absorption, KeyLess> cache_;
};

}  // namespace

Outcome acceptance_probability(const VerifierSpec& spec, std::string_view input, const StrategyP1& s1,
                               const StrategyP0& s0, std::uint64_t horizon, std::vector<SymbolId>& debate_out) {
  Stepper stepper(spec, input);
  HidingMap h(spec);
  Dist d = stepper.initial();
  std::vector<SymbolId>& history = debate_out;
  history.clear();
  std::vector<VisibleSymbol> visible;
  for (std::uint64_t t = 0; t < horizon && !d.reading.empty(); ++t) {
    if (t % 2 == 0) {
      const SymbolId s = s1.choose(visible);
      d = stepper.advance(d, s, Reader::prover);
      history.push_back(s);
    } else {
      const SymbolId s = s0.choose(history);
      if (s >= spec.symbols.size() || spec.symbol_info(s).cls == SymbolClass::prover)
        fail(ErrorCode::strategy, "P0 strategy returned a symbol outside Gamma0 and Delta");
      d = stepper.advance(d, s, Reader::refuter);
      history.push_back(s);
      visible.push_back(h(s));
    }
  }
  Outcome out;
  out.accept = d.accept;
  out.reject = d.reject;
  out.unresolved = 1 - d.accept - d.reject;
  return out;
}

Outcome acceptance_probability(const VerifierSpec& spec, std::string_view input, const StrategyP1& s1,
                               const StrategyP0& s0, std::uint64_t horizon) {
  std::vector<SymbolId> debate;
  return acceptance_probability(spec, input, s1, s0, horizon, debate);
}

struct DebateSolver::Impl {
  struct Node {
    std::vector<std::uint32_t> belief;  // sorted distribution ids
    int parity = 0;                     // 0: P1 to move
    std::uint64_t depth = 0;
    bool expanded = false;
    bool final = false;  // no coin outcome reads the debate any more
    std::vector<std::uint32_t> children;
    std::vector<SymbolId> moves;            // P1 nodes: symbol per child
    std::vector<VisibleSymbol> labels;      // P0 nodes: visible symbol per child
  };

  struct Solved {
    std::vector<Rational> value;
    std::vector<std::uint64_t> reached;  // iteration of the last change
    GameValue report;
  };

  const VerifierSpec& spec;
  std::string input;
  DebateMode mode;
  SolveOptions options;
  Stepper stepper;
  std::vector<Dist> dists;
  std::map<Dist, std::uint32_t, DistLess> dist_index;
  std::map<std::pair<std::uint32_t, SymbolId>, std::uint32_t> transitions;
  std::vector<Node> nodes;
  std::map<std::pair<int, std::vector<std::uint32_t>>, std::uint32_t> node_index;
  std::optional<BigInt> horizon;
  std::string horizon_text;
  bool closed = true;
  bool built = false;
  std::optional<Solved> solved[2];

  Impl(const VerifierSpec& s, std::string in, DebateMode m, SolveOptions o)
      : spec(s), input(std::move(in)), mode(m), options(std::move(o)), stepper(spec, input) {}

  std::uint32_t intern_dist(Dist d) {
    auto [it, inserted] = dist_index.try_emplace(std::move(d), static_cast<std::uint32_t>(dists.size()));
    if (inserted) dists.push_back(it->first);
    return it->second;
  }

  std::uint32_t transition(std::uint32_t d, SymbolId symbol, Reader reader) {
    auto key = std::make_pair(d, symbol);
    if (auto it = transitions.find(key); it != transitions.end()) return it->second;
    const std::uint32_t next = intern_dist(stepper.advance(dists[d], symbol, reader));
    transitions.emplace(key, next);
    return next;
  }

  std::uint32_t intern_node(std::vector<std::uint32_t> belief, int parity, std::uint64_t depth,
                            std::deque<std::uint32_t>& queue) {
    std::sort(belief.begin(), belief.end());
    belief.erase(std::unique(belief.begin(), belief.end()), belief.end());
    auto key = std::make_pair(parity, belief);
    if (auto it = node_index.find(key); it != node_index.end()) return it->second;
    if (nodes.size() >= options.node_cap)
      fail(ErrorCode::limit, "debate game exceeded " + std::to_string(options.node_cap) +
                                 " belief nodes; give an explicit horizon or raise the cap");
    const auto id = static_cast<std::uint32_t>(nodes.size());
    Node node;
    node.belief = std::move(belief);
    node.parity = parity;
    node.depth = depth;
    node.final = std::all_of(node.belief.begin(), node.belief.end(),
                             [&](std::uint32_t d) { return dists[d].reading.empty(); });
    nodes.push_back(std::move(node));
    node_index.emplace(std::move(key), id);
    queue.push_back(id);
    return id;
  }

  void resolve_horizon() {
    if (options.horizon) {
      if (*options.horizon < 1) fail(ErrorCode::validation, "horizon must be at least 1");
      horizon = options.horizon;
      horizon_text = options.horizon->str();
      return;
    }
    if (!spec.coin_budget) {
      horizon_text = "unbounded";
      return;
    }
    const auto bound = compute_ensemble_bound(spec, input, *spec.coin_budget);
    if (mode == DebateMode::complete) {
      horizon = bound.complete;
      horizon_text = bound.complete.str();
    } else {
      horizon_text = bound.partial_text();
    }
  }

  void build() {
    if (built) return;
    built = true;
    spec.require_mode(mode);
    resolve_horizon();
    const auto gamma1 = spec.alphabet(SymbolClass::prover);
    const auto gamma0 = spec.alphabet(SymbolClass::refuter_public);
    const auto delta = spec.alphabet(SymbolClass::refuter_private);
    std::deque<std::uint32_t> queue;
    intern_node({intern_dist(stepper.initial())}, 0, 0, queue);
    while (!queue.empty()) {
      const std::uint32_t id = queue.front();
      queue.pop_front();
      if (nodes[id].final) continue;
      if (horizon && BigInt(nodes[id].depth) >= *horizon) {
        closed = false;
        continue;
      }
      const auto belief = nodes[id].belief;
      const int parity = nodes[id].parity;
      const std::uint64_t depth = nodes[id].depth + 1;
      std::vector<std::uint32_t> children;
      std::vector<SymbolId> moves;
      std::vector<VisibleSymbol> labels;
      auto successor = [&](const std::vector<SymbolId>& symbols, Reader reader) {
        std::vector<std::uint32_t> next;
        for (SymbolId s : symbols)
          for (std::uint32_t d : belief) next.push_back(transition(d, s, reader));
        return intern_node(std::move(next), 1 - parity, depth, queue);
      };
      if (parity == 0) {
        for (SymbolId s : gamma1) {
          children.push_back(successor({s}, Reader::prover));
          moves.push_back(s);
        }
      } else {
        for (SymbolId s : gamma0) {
          children.push_back(successor({s}, Reader::refuter));
          labels.emplace_back(s);
        }
        if (!delta.empty()) {
          children.push_back(successor(delta, Reader::refuter));
          labels.emplace_back(std::nullopt);
        }
      }
      Node& node = nodes[id];
      node.children = std::move(children);
      node.moves = std::move(moves);
      node.labels = std::move(labels);
      node.expanded = true;
    }
  }

  Rational leaf(const Node& node, ValueKind kind) const {
    Rational best = kind == ValueKind::accept_maxmin ? Rational(1) : Rational(0);
    for (std::uint32_t d : node.belief) {
      if (kind == ValueKind::accept_maxmin)
        best = std::min(best, dists[d].accept);
      else
        best = std::max(best, dists[d].reject);
    }
    return best;
  }

  const Solved& solve(ValueKind kind) {
    auto& slot = solved[kind == ValueKind::accept_maxmin ? 0 : 1];
    if (slot) return *slot;
    build();
    Solved out;
    const std::size_t n = nodes.size();
    std::vector<Rational> leaves(n);
    for (std::size_t i = 0; i < n; ++i) leaves[i] = leaf(nodes[i], kind);
    out.value = leaves;
    out.reached.assign(n, 0);
    std::uint64_t k = 0;
    bool fixed = false;
    const bool maximize_p1 = kind == ValueKind::accept_maxmin;
    std::vector<Rational> next(n);
    while (true) {
      if (horizon && BigInt(k) >= *horizon) break;
      if (k >= options.iteration_cap) break;
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        const Node& node = nodes[i];
        if (!node.expanded) {
          next[i] = leaves[i];
          continue;
        }
        const bool take_max = (node.parity == 0) == maximize_p1;
        Rational v = out.value[node.children.front()];
        for (std::uint32_t c : node.children) {
          const Rational& cv = out.value[c];
          if (take_max ? cv > v : cv < v) v = cv;
        }
        if (v != out.value[i]) {
          changed = true;
          out.reached[i] = k + 1;
        }
        next[i] = std::move(v);
      }
      ++k;
      std::swap(out.value, next);
      if (!changed && closed) {
        fixed = true;
        break;
      }
    }
    out.report.value = out.value[0];
    out.report.kind = kind;
    out.report.horizon = horizon;
    out.report.horizon_text = horizon_text;
    out.report.truncated = !fixed;
    out.report.nodes = n;
    out.report.iterations = k;
    slot = std::move(out);
    return *slot;
  }
};

namespace {

/// Follows the solved belief graph along the visible history.
class SolvedStrategyP1 final : public StrategyP1 {
 public:
  struct Step {
    bool p1 = true;
    bool playable = false;  // expanded node
    SymbolId choice = 0;
    std::vector<std::uint32_t> children;
    std::vector<VisibleSymbol> labels;
  };
  std::vector<Step> steps;
  SymbolId idle = 0;

  SymbolId choose(const std::vector<VisibleSymbol>& visible_p0) const override {
    std::uint32_t at = 0;
    for (const auto& seen : visible_p0) {
      const Step& p1 = steps[at];
      if (!p1.playable) return idle;
      at = p1.children.front();
      const Step& p0 = steps[at];
      if (!p0.playable) return idle;
      auto it = std::find(p0.labels.begin(), p0.labels.end(), seen);
      if (it == p0.labels.end()) fail(ErrorCode::strategy, "visible P0 symbol not available at this point");
      at = p0.children[static_cast<std::size_t>(it - p0.labels.begin())];
    }
    const Step& here = steps[at];
    return here.playable ? here.choice : idle;
  }
};

}  // namespace

DebateSolver::DebateSolver(const VerifierSpec& spec, std::string input, DebateMode mode, SolveOptions options)
    : impl_(std::make_unique<Impl>(spec, std::move(input), mode, std::move(options))) {}

DebateSolver::~DebateSolver() = default;

GameValue DebateSolver::accept_value() { return impl_->solve(ValueKind::accept_maxmin).report; }
GameValue DebateSolver::reject_value() { return impl_->solve(ValueKind::reject_minmax).report; }

std::shared_ptr<const StrategyP1> DebateSolver::prover_strategy(ValueKind kind) {
  const auto& solved = impl_->solve(kind);
  if (solved.report.truncated)
    fail(ErrorCode::precondition, "optimal strategies are only extracted from exact (non-truncated) solves");
  auto strategy = std::make_shared<SolvedStrategyP1>();
  const auto gamma1 = impl_->spec.alphabet(SymbolClass::prover);
  strategy->idle = gamma1.front();
  for (const auto& node : impl_->nodes) {
    SolvedStrategyP1::Step step;
    step.p1 = node.parity == 0;
    step.playable = node.expanded;
    if (node.expanded && step.p1) {
      // Prefer the child that attains the value earliest so cycles cannot
      // postpone acceptance forever.
      std::size_t best = 0;
      for (std::size_t i = 1; i < node.children.size(); ++i) {
        const auto& bv = solved.value[node.children[best]];
        const auto& cv = solved.value[node.children[i]];
        const bool better = kind == ValueKind::accept_maxmin ? cv > bv : cv < bv;
        const bool tie_earlier = cv == bv && solved.reached[node.children[i]] < solved.reached[node.children[best]];
        if (better || tie_earlier) best = i;
      }
      step.choice = node.moves[best];
      step.children = {node.children[best]};
    } else if (node.expanded) {
      step.children = node.children;
      step.labels = node.labels;
    }
    strategy->steps.push_back(std::move(step));
  }
  return strategy;
}

GameValue game_value_accept(const VerifierSpec& spec, std::string_view input, DebateMode mode,
                            std::optional<BigInt> horizon) {
  DebateSolver solver(spec, std::string(input), mode, SolveOptions{horizon});
  return solver.accept_value();
}

GameValue game_value_reject(const VerifierSpec& spec, std::string_view input, DebateMode mode,
                            std::optional<BigInt> horizon) {
  DebateSolver solver(spec, std::string(input), mode, SolveOptions{horizon});
  return solver.reject_value();
}

namespace {

void require_epsilon(const Rational& epsilon) {
  if (epsilon < 0 || epsilon >= Rational(1, 2))
    fail(ErrorCode::validation, "error bound must satisfy 0 <= epsilon < 1/2");
}

}  // namespace

CheckReport check_strong(const VerifierSpec& spec, std::string_view input, DebateMode mode, const Rational& epsilon,
                         std::optional<BigInt> horizon) {
  require_epsilon(epsilon);
  DebateSolver solver(spec, std::string(input), mode, SolveOptions{horizon});
  CheckReport report;
  report.accept = solver.accept_value();
  report.reject = solver.reject_value();
  // Truncated values are lower bounds, so reaching the threshold is final.
  if (report.accept.value >= 1 - epsilon)
    report.side = Side::member;
  else if (report.reject->value >= 1 - epsilon)
    report.side = Side::nonmember;
  else if (report.accept.truncated || report.reject->truncated)
    report.side = Side::undetermined;
  else
    report.side = Side::neither;
  return report;
}

CheckReport check_weak(const VerifierSpec& spec, std::string_view input, DebateMode mode, const Rational& epsilon,
                       std::optional<BigInt> horizon) {
  require_epsilon(epsilon);
  DebateSolver solver(spec, std::string(input), mode, SolveOptions{horizon});
  CheckReport report;
  report.accept = solver.accept_value();
  if (report.accept.value >= 1 - epsilon)
    report.side = Side::member;
  else if (report.accept.truncated)
    report.side = Side::undetermined;
  else if (report.accept.value <= epsilon)
    report.side = Side::nonmember;
  else
    report.side = Side::neither;
  return report;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class SampleResult { accept, reject, unresolved };

SampleResult run_sample(const VerifierSpec& spec, std::string_view input, const StrategyP1& s1,
                        const StrategyP0& s0, std::mt19937_64& rng, const MonteCarloOptions& options) {
  HidingMap h(spec);
  VerifierConfiguration c = initial_configuration(spec);
  std::vector<SymbolId> history;
  std::vector<VisibleSymbol> visible;
  std::uint64_t silent = 0;
  for (;;) {
    const auto& info = spec.state(c.state);
    if (info.halt == Halting::accept) return SampleResult::accept;
    if (info.halt == Halting::reject) return SampleResult::reject;
    std::optional<SymbolId> cell;
    std::optional<int> coin;
    if (info.reader != Reader::none) {
      if (history.size() >= options.horizon) return SampleResult::unresolved;
      const bool p1_turn = history.size() % 2 == 0;
      if ((info.reader == Reader::prover) != p1_turn)
        fail(ErrorCode::validation, "verifier '" + spec.name + "' reads out of C1/C0 alternation");
      if (p1_turn) {
        cell = s1.choose(visible);
      } else {
        cell = s0.choose(history);
        if (*cell >= spec.symbols.size() || spec.symbol_info(*cell).cls == SymbolClass::prover)
          fail(ErrorCode::strategy, "P0 strategy returned a symbol outside Gamma0 and Delta");
        visible.push_back(h(*cell));
      }
      if (*cell >= spec.symbols.size()) fail(ErrorCode::strategy, "symbol id out of range");
      history.push_back(*cell);
      silent = 0;
    } else if (++silent > options.silent_step_cap) {
      return SampleResult::unresolved;
    }
    if (info.coin) coin = static_cast<int>(rng() & 1u);
    c = step_verifier(spec, c, input, cell, coin);
  }
}

}  // namespace

MonteCarloResult monte_carlo_estimate(const VerifierSpec& spec, std::string_view input, const StrategyP1& s1,
                                      const StrategyP0& s0, std::uint64_t samples, std::uint64_t seed,
                                      MonteCarloOptions options) {
  if (samples == 0) fail(ErrorCode::validation, "sample count must be positive");
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, samples));
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> counts[3] = {0, 0, 0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    try {
      for (;;) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= samples) return;
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(i)));
        const auto result = run_sample(spec, input, s1, s0, rng, options);
        counts[static_cast<int>(result)].fetch_add(1);
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(samples);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  MonteCarloResult out;
  out.samples = samples;
  out.accept = counts[0];
  out.reject = counts[1];
  out.unresolved = counts[2];
  return out;
}

}  // namespace debate

// Quantified max word problem and the reduction from complete-information
// debates.

#include "debate/qmw.hpp"

#include "debate/error.hpp"

#include <deque>
#include <set>

namespace debate {

std::size_t QmwInstance::add_matrix(std::string matrix_name, RationalMatrix matrix) {
  matrix_names.push_back(std::move(matrix_name));
  matrices.push_back(std::move(matrix));
  return matrices.size() - 1;
}

void QmwInstance::validate() const {
  auto bad = [&](const std::string& what) { fail(ErrorCode::validation, "QMW instance '" + name + "': " + what); };
  if (dimension == 0) bad("dimension must be positive");
  if (v.size() != dimension || w.size() != dimension) bad("vector length differs from the dimension");
  if (matrix_names.size() != matrices.size()) bad("matrix names and matrices differ in number");
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    if (matrices[i].size() != dimension) bad("matrix '" + matrix_names[i] + "' has the wrong number of rows");
    for (const auto& row : matrices[i])
      if (row.size() != dimension) bad("matrix '" + matrix_names[i] + "' has a row of the wrong length");
  }
  if (menus.size() != prefix.size()) bad("one menu is needed per quantifier");
  for (std::size_t p = 0; p < prefix.size(); ++p) {
    if (prefix[p] != 'E' && prefix[p] != 'A') bad("prefix letters must be E or A");
    if (menus[p].empty()) bad("menu " + std::to_string(p + 1) + " is empty");
    for (std::size_t idx : menus[p])
      if (idx >= matrices.size()) bad("menu " + std::to_string(p + 1) + " names an unknown matrix");
  }
}

void QmwInstance::validate_shared_menu() const {
  validate();
  const auto as_set = [&](std::size_t p) { return std::set<std::size_t>(menus[p].begin(), menus[p].end()); };
  for (std::size_t p = 1; p < menus.size(); ++p)
    if (as_set(p) != as_set(0))
      fail(ErrorCode::validation, "QMW instance '" + name + "': menu " + std::to_string(p + 1) + " differs from menu 1");
}

namespace {

using Sparse = std::vector<std::vector<std::pair<std::size_t, Rational>>>;

class Evaluator {
 public:
  explicit Evaluator(const QmwInstance& instance) : q_(instance) {
    q_.validate();
    for (const auto& m : q_.matrices) {
      Sparse rows(q_.dimension);
      for (std::size_t i = 0; i < q_.dimension; ++i)
        for (std::size_t j = 0; j < q_.dimension; ++j)
          if (m[i][j] != 0) rows[i].emplace_back(j, m[i][j]);
      sparse_.push_back(std::move(rows));
    }
  }

  RationalVector times(const RationalVector& x, std::size_t matrix) const {
    RationalVector out(q_.dimension);
    const Sparse& rows = sparse_[matrix];
    for (std::size_t i = 0; i < q_.dimension; ++i) {
      if (x[i] == 0) continue;
      for (const auto& [j, a] : rows[i]) out[j] += x[i] * a;
    }
    return out;
  }

  Rational dot_w(const RationalVector& x) const {
    Rational s = 0;
    for (std::size_t i = 0; i < q_.dimension; ++i) s += x[i] * q_.w[i];
    return s;
  }

  // Depth-first search; short-circuits on the first witness either way.
  bool holds(std::size_t pos, const RationalVector& x) {
    if (pos == q_.prefix.size()) return dot_w(x) > q_.threshold;
    auto key = std::make_pair(pos, x);
    if (auto it = truth_.find(key); it != truth_.end()) return it->second;
    const bool exists = q_.prefix[pos] == 'E';
    bool result = !exists;
    for (std::size_t m : q_.menus[pos])
      if (holds(pos + 1, times(x, m)) == exists) {
        result = exists;
        break;
      }
    truth_.emplace(std::move(key), result);
    return result;
  }

  Rational value(std::size_t pos, const RationalVector& x) {
    if (pos == q_.prefix.size()) return dot_w(x);
    auto key = std::make_pair(pos, x);
    if (auto it = value_.find(key); it != value_.end()) return it->second;
    const bool exists = q_.prefix[pos] == 'E';
    std::optional<Rational> best;
    for (std::size_t m : q_.menus[pos]) {
      Rational child = value(pos + 1, times(x, m));
      if (!best || (exists ? child > *best : child < *best)) best = child;
    }
    value_.emplace(std::move(key), *best);
    return *best;
  }

  const QmwInstance& instance() const { return q_; }

 private:
  const QmwInstance& q_;
  std::vector<Sparse> sparse_;
  std::map<std::pair<std::size_t, RationalVector>, bool> truth_;
  std::map<std::pair<std::size_t, RationalVector>, Rational> value_;
};

VerifierConfiguration core_of(VerifierConfiguration c) {
  c.prover_symbols = c.refuter_symbols = 0;
  return c;
}

}  // namespace

bool qmw_eval(const QmwInstance& instance) {
  Evaluator e(instance);
  return e.holds(0, instance.v);
}

Rational max_qmw(const QmwInstance& instance) {
  Evaluator e(instance);
  return e.value(0, instance.v);
}

Rational ReadingChain::p(std::size_t i, std::size_t j, SymbolId sigma) const {
  auto it = steps.find({i, sigma});
  if (it == steps.end()) return 0;
  for (const auto& [target, prob] : it->second.targets)
    if (target == j) return prob;
  return 0;
}

ReadingChain reading_probabilities(const VerifierSpec& spec, std::string_view input, std::size_t cap) {
  spec.validate();
  using CoreMap = std::map<VerifierConfiguration, std::size_t, VerifierConfiguration::CoreLess>;
  // Discovery pass: reachable reading configurations with their raw steps.
  CoreMap found;
  std::vector<VerifierConfiguration> order;
  std::vector<std::vector<std::pair<SymbolId, Absorption>>> raw;
  std::deque<std::size_t> queue;
  auto discover = [&](const VerifierConfiguration& c) {
    auto core = core_of(c);
    auto [it, fresh] = found.emplace(core, order.size());
    if (fresh) {
      if (order.size() >= cap) fail(ErrorCode::limit, "more than " + std::to_string(cap) + " reading configurations");
      order.push_back(core);
      raw.emplace_back();
      queue.push_back(it->second);
    }
    return it->second;
  };
  const Absorption start = settle(spec, initial_configuration(spec), input);
  for (const auto& [c, p] : start.reading) discover(c);
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    const VerifierConfiguration c = order[i];
    const Reader reader = spec.state(c.state).reader;
    for (SymbolId s = 0; s < spec.symbols.size(); ++s) {
      const bool prover_symbol = spec.symbol_info(s).cls == SymbolClass::prover;
      if (prover_symbol != (reader == Reader::prover)) continue;
      Absorption a = consume(spec, c, input, s);
      for (const auto& [next, p] : a.reading) {
        if (spec.state(next.state).reader == reader && p != 0)
          fail(ErrorCode::validation, "verifier '" + spec.name + "' reads out of C1/C0 alternation in state '" +
                                          spec.state(next.state).name + "'");
        discover(next);
      }
      raw[i].emplace_back(s, std::move(a));
    }
  }

  // Index pass: prover readers first, each side in discovery order.
  ReadingChain chain;
  std::vector<std::size_t> index(order.size());
  for (int side = 0; side < 2; ++side)
    for (std::size_t i = 0; i < order.size(); ++i)
      if ((spec.state(order[i].state).reader == Reader::prover) == (side == 0)) {
        index[i] = chain.configs.size();
        chain.configs.push_back(order[i]);
      }
  for (std::size_t i = 0; i < order.size(); ++i)
    if (spec.state(order[i].state).reader == Reader::prover) ++chain.prover_count;
  if (chain.prover_count == 0 && !order.empty())
    fail(ErrorCode::validation, "verifier '" + spec.name + "' does not start by reading C1");

  auto collect = [&](const std::vector<std::pair<VerifierConfiguration, Rational>>& reading) {
    std::map<std::size_t, Rational> merged;
    for (const auto& [c, p] : reading) merged[index[found.at(core_of(c))]] += p;
    return std::vector<std::pair<std::size_t, Rational>>(merged.begin(), merged.end());
  };
  chain.initial = collect(start.reading);
  chain.initial_accept = start.accept;
  chain.initial_reject = start.reject;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (const auto& [s, a] : raw[i]) {
      ReadingChain::Step step;
      step.targets = collect(a.reading);
      step.accept = a.accept;
      step.reject = a.reject;
      step.diverge = a.diverge;
      chain.steps.emplace(std::make_pair(index[i], s), std::move(step));
    }
  return chain;
}

QmwInstance reduce_cdeb_to_qmw(const VerifierSpec& spec, std::string_view input, unsigned t, const Rational& epsilon) {
  if (!spec.alphabet(SymbolClass::refuter_private).empty())
    fail(ErrorCode::precondition, "the QMW reduction needs a complete-information verifier (empty private alphabet)");
  if (t == 0) fail(ErrorCode::usage, "t must be positive");
  const ReadingChain chain = reading_probabilities(spec, input);
  const std::size_t m1 = chain.prover_count;
  const std::size_t m0 = chain.configs.size() - m1;
  const std::size_t m = std::max<std::size_t>({m1, m0, 1});
  const std::size_t sink = m;
  const unsigned dim = static_cast<unsigned>(m + 1);

  QmwInstance q;
  q.name = "qmw(" + spec.name + ",\"" + std::string(input) + "\")";
  q.dimension = dim;
  auto blank = [dim] {
    RationalMatrix z(dim, RationalVector(dim));
    z[dim - 1][dim - 1] = 1;
    return z;
  };
  // P1 symbols map prover-side coordinates to refuter-side ones, P0 symbols
  // the reverse; accepted mass moves to the sink and stays there.
  auto family = [&](SymbolClass cls, std::size_t from_base, std::size_t from_count, std::size_t to_base,
                    const std::string& prefix) {
    std::vector<std::size_t> menu;
    for (SymbolId s : spec.alphabet(cls)) {
      RationalMatrix w = blank();
      for (std::size_t i = 0; i < from_count; ++i) {
        auto it = chain.steps.find({from_base + i, s});
        if (it == chain.steps.end()) continue;
        for (const auto& [j, p] : it->second.targets) w[i][j - to_base] += p;
        w[i][sink] += it->second.accept;
      }
      menu.push_back(q.add_matrix(prefix + "[" + spec.symbol_info(s).name + "]", std::move(w)));
    }
    if (menu.empty()) fail(ErrorCode::precondition, "verifier '" + spec.name + "' has an empty " + prefix + " alphabet");
    return menu;
  };
  const auto w1 = family(SymbolClass::prover, 0, m1, m1, "W1");
  const auto w0 = family(SymbolClass::refuter_public, m1, m0, 0, "W0");
  for (unsigned e = 0; e < t; ++e) {
    q.prefix += "EA";
    q.menus.push_back(w1);
    q.menus.push_back(w0);
  }
  q.v.assign(dim, 0);
  for (const auto& [i, p] : chain.initial) q.v[i] += p;
  q.v[sink] += chain.initial_accept;
  q.w.assign(dim, 0);
  q.w[sink] = 1;
  q.threshold = 1 - epsilon;
  q.provenance["construction"] = "cdeb-to-qmw";
  q.provenance["source"] = spec.name;
  q.provenance["input"] = std::string(input);
  q.provenance["t"] = std::to_string(t);
  q.provenance["epsilon"] = to_string(epsilon);
  q.provenance["prover_configurations"] = std::to_string(m1);
  q.provenance["refuter_configurations"] = std::to_string(m0);
  q.provenance["accept_coordinate"] = std::to_string(sink + 1);
  return q;
}

}  // namespace debate

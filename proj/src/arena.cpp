#include "arena.hpp"

#include "debate/error.hpp"

#include <deque>

namespace debate::detail {

AutomatonArena::AutomatonArena(const MultiheadAlternatingMachine& machine, std::string_view input)
    : machine_(machine) {
  check_input(machine.alphabet, input);
  tape_ = std::string(1, kLeftEnd) + std::string(input) + kRightEnd;
  std::deque<std::size_t> queue;
  auto intern = [&](const HeadConfig& c) {
    auto [it, inserted] = ids_.try_emplace(c, configs_.size());
    if (inserted) {
      configs_.push_back(c);
      queue.push_back(it->second);
    }
    return it->second;
  };
  intern(initial());
  while (!queue.empty()) {
    const std::size_t id = queue.front();
    queue.pop_front();
    std::vector<std::size_t> next;
    const HeadConfig c = configs_[id];
    for (unsigned i = 0; i < choice_count(c); ++i) next.push_back(intern(*step(c, i)));
    if (successors_.size() <= id) successors_.resize(id + 1);
    successors_[id] = std::move(next);
  }
  successors_.resize(configs_.size());

  const std::size_t n = configs_.size();
  accept_rank_.assign(n, std::nullopt);
  reject_rank_.assign(n, std::nullopt);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& state = machine_.states[configs_[i].state];
    if (state.halt == Halting::accept) accept_rank_[i] = 0;
    if (state.halt == Halting::reject || (state.halt == Halting::none && successors_[i].empty()))
      reject_rank_[i] = 0;
  }
  auto attract = [&](std::vector<std::optional<std::size_t>>& rank, Quantifier owner) {
    for (std::size_t round = 1;; ++round) {
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (rank[i] || successors_[i].empty()) continue;
        auto before = [&](std::size_t s) { return rank[s] && *rank[s] < round; };
        const bool mine = machine_.states[configs_[i].state].kind == owner;
        const auto& succ = successors_[i];
        const bool wins = mine ? std::any_of(succ.begin(), succ.end(), before)
                               : std::all_of(succ.begin(), succ.end(), before);
        if (wins) {
          rank[i] = round;
          changed = true;
        }
      }
      if (!changed) return;
    }
  };
  attract(accept_rank_, Quantifier::existential);
  attract(reject_rank_, Quantifier::universal);
}

HeadConfig AutomatonArena::initial() const { return HeadConfig{machine_.initial, std::vector<int>(machine_.heads, 0)}; }

std::string AutomatonArena::scanned(const HeadConfig& c) const {
  std::string out;
  for (int h : c.heads) out += tape_[static_cast<std::size_t>(h)];
  return out;
}

unsigned AutomatonArena::choice_count(const HeadConfig& c) const {
  if (machine_.states[c.state].halting()) return 0;
  const AutomatonRule* rule = machine_.match(c.state, scanned(c));
  return rule ? static_cast<unsigned>(rule->choices.size()) : 0;
}

std::optional<HeadConfig> AutomatonArena::step(const HeadConfig& c, unsigned index) const {
  if (machine_.states[c.state].halting()) return std::nullopt;
  const AutomatonRule* rule = machine_.match(c.state, scanned(c));
  if (!rule || index >= rule->choices.size()) return std::nullopt;
  const auto& choice = rule->choices[index];
  HeadConfig next{choice.next, c.heads};
  for (std::size_t h = 0; h < next.heads.size(); ++h) {
    next.heads[h] += choice.moves[h];
    if (next.heads[h] < 0 || next.heads[h] >= static_cast<int>(tape_.size()))
      fail(ErrorCode::validation, "machine '" + machine_.name + "' moved a head across an end-marker");
  }
  return next;
}

std::optional<std::size_t> AutomatonArena::index_of(const HeadConfig& c) const {
  auto it = ids_.find(c);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

bool AutomatonArena::accepting(const HeadConfig& c) const {
  auto i = index_of(c);
  return i && accept_rank_[*i].has_value();
}

bool AutomatonArena::refutable(const HeadConfig& c) const {
  auto i = index_of(c);
  return i && reject_rank_[*i].has_value();
}

std::optional<unsigned> AutomatonArena::winning_choice(const HeadConfig& c) const {
  auto i = index_of(c);
  if (!i || !accept_rank_[*i]) return std::nullopt;
  const auto& succ = successors_[*i];
  for (unsigned k = 0; k < succ.size(); ++k)
    if (accept_rank_[succ[k]] && *accept_rank_[succ[k]] < *accept_rank_[*i]) return k;
  return std::nullopt;
}

std::optional<unsigned> AutomatonArena::refuting_choice(const HeadConfig& c) const {
  auto i = index_of(c);
  if (!i || !reject_rank_[*i]) return std::nullopt;
  const auto& succ = successors_[*i];
  for (unsigned k = 0; k < succ.size(); ++k)
    if (reject_rank_[succ[k]] && *reject_rank_[succ[k]] < *reject_rank_[*i]) return k;
  return std::nullopt;
}

Verdict AutomatonArena::verdict() const {
  return accept_rank_[0] ? Verdict::accept : Verdict::reject;
}

}  // namespace debate::detail

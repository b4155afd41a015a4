#include "debate/alternation_game.hpp"

#include "debate/error.hpp"

#include <algorithm>
#include <set>

namespace debate {

AlternationGame::AlternationGame(const AlternatingTM& machine, std::string_view input, Options options)
    : machine_(machine), options_(options) {
  if (!machine.program) fail(ErrorCode::validation, "machine has no program");
  check_input(machine.input_alphabet, input);
  tape_ = std::string(1, kLeftEnd) + std::string(input) + kRightEnd;
  for (const auto& tape : machine.tapes) tape_lengths_.push_back(tape.length(static_cast<unsigned>(input.size())));

  nodes_.push_back(Node{});  // kWin
  nodes_.push_back(Node{});  // kLose

  auto [settled, start] = settle(initial_configuration());
  if (settled == Settled::accept) {
    root_ = kWin;
  } else if (settled != Settled::branch) {
    root_ = kLose;
  } else {
    root_ = intern_node({intern_config(start)});
  }
  for (NodeId id = 2; id < nodes_.size(); ++id) expand(id);
}

MachineConfiguration AlternationGame::initial_configuration() const {
  MachineConfiguration c;
  c.state = machine_.initial;
  c.heads.assign(machine_.input_heads, 0);
  for (std::size_t t = 0; t < machine_.tapes.size(); ++t) c.tapes.emplace_back(tape_lengths_[t], kBlank);
  c.tape_heads.assign(machine_.tapes.size(), 0);
  if (machine_.input_on_first_tape) {
    const std::string input = tape_.substr(1, tape_.size() - 2);
    if (input.size() > c.tapes[0].size())
      fail(ErrorCode::precondition, "input longer than the first tape's length bound");
    std::copy(input.begin(), input.end(), c.tapes[0].begin());
  }
  return c;
}

std::string AlternationGame::scanned(const MachineConfiguration& c) const {
  std::string out;
  for (int h : c.heads) out += tape_[static_cast<std::size_t>(h)];
  for (std::size_t t = 0; t < c.tapes.size(); ++t)
    out += c.tapes[t].empty() ? kBlank : c.tapes[t][static_cast<std::size_t>(c.tape_heads[t])];
  return out;
}

const AtmRule* AlternationGame::rule_at(const MachineConfiguration& c) const {
  return machine_.match(c.state, scanned(c));
}

MachineConfiguration AlternationGame::apply(const MachineConfiguration& c, const AtmChoice& choice) const {
  MachineConfiguration next = c;
  next.state = choice.next;
  const std::size_t inputs = machine_.input_heads;
  for (std::size_t t = 0; t < next.tapes.size(); ++t) {
    if (choice.writes[t] != kWildcard) {
      if (next.tapes[t].empty()) fail(ErrorCode::validation, "write to a zero-length tape");
      next.tapes[t][static_cast<std::size_t>(next.tape_heads[t])] = choice.writes[t];
    }
  }
  for (std::size_t h = 0; h < inputs; ++h) {
    next.heads[h] += choice.moves[h];
    if (next.heads[h] < 0 || next.heads[h] > static_cast<int>(tape_.size()) - 1)
      fail(ErrorCode::validation, "machine '" + machine_.name + "' moved an input head across an end-marker");
  }
  for (std::size_t t = 0; t < next.tapes.size(); ++t) {
    int& pos = next.tape_heads[t];
    pos += choice.moves[inputs + t];
    const int length = static_cast<int>(next.tapes[t].size());
    if (pos < 0 || (length == 0 ? pos != 0 : pos >= length))
      fail(ErrorCode::validation, "machine '" + machine_.name + "' moved a tape head off its bounded tape");
  }
  return next;
}

std::pair<AlternationGame::Settled, MachineConfiguration> AlternationGame::settle(MachineConfiguration c) const {
  std::set<MachineConfiguration> visited;
  for (;;) {
    const auto& info = machine_.program->info(c.state);
    if (info.halt == Halting::accept) return {Settled::accept, c};
    if (info.halt == Halting::reject) return {Settled::reject, c};
    const AtmRule* rule = rule_at(c);
    if (rule == nullptr || rule->choices.empty()) return {Settled::reject, c};
    if (rule->choices.size() > 1) return {Settled::branch, c};
    if (!visited.insert(c).second) return {Settled::loop, c};
    c = apply(c, rule->choices.front());
  }
}

ConfigId AlternationGame::intern_config(const MachineConfiguration& c) {
  auto [it, inserted] = config_ids_.try_emplace(c, static_cast<ConfigId>(configs_.size()));
  if (inserted) configs_.push_back(c);
  return it->second;
}

NodeId AlternationGame::intern_node(std::vector<ConfigId> belief) {
  std::sort(belief.begin(), belief.end());
  belief.erase(std::unique(belief.begin(), belief.end()), belief.end());
  auto [it, inserted] = node_ids_.try_emplace(belief, static_cast<NodeId>(nodes_.size()));
  if (inserted) {
    if (nodes_.size() >= options_.node_cap)
      fail(ErrorCode::limit, "alternation game exceeded its node cap of " + std::to_string(options_.node_cap));
    Node node;
    node.kind = machine_.program->info(configs_[belief.front()].state).kind;
    for (ConfigId id : belief)
      if (machine_.program->info(configs_[id].state).kind != node.kind)
        fail(ErrorCode::validation, "machine '" + machine_.name +
                                        "' is not turn-synchronized: a belief mixes existential and universal "
                                        "configurations");
    node.belief = std::move(belief);
    nodes_.push_back(std::move(node));
  }
  return it->second;
}

NodeId AlternationGame::node_from(const std::vector<MachineConfiguration>& successors, bool any_losing) {
  if (any_losing) return kLose;
  std::vector<ConfigId> belief;
  for (const auto& c : successors) belief.push_back(intern_config(c));
  if (belief.empty()) return kWin;
  return intern_node(std::move(belief));
}

void AlternationGame::expand(NodeId id) {
  const std::vector<ConfigId> belief = nodes_[id].belief;
  const Quantifier kind = nodes_[id].kind;
  std::vector<NodeId> children;
  std::vector<int> labels;
  if (kind == Quantifier::existential) {
    std::size_t count = 0;
    for (ConfigId cid : belief) {
      std::size_t n = rule_at(configs_[cid])->choices.size();
      if (count != 0 && n != count)
        fail(ErrorCode::validation, "machine '" + machine_.name +
                                        "': indistinguishable existential configurations offer different "
                                        "numbers of choices");
      count = n;
    }
    for (std::size_t c = 0; c < count; ++c) {
      std::vector<MachineConfiguration> next;
      bool losing = false;
      for (ConfigId cid : belief) {
        const MachineConfiguration current = configs_[cid];
        auto [settled, successor] = settle(apply(current, rule_at(current)->choices[c]));
        if (settled == Settled::branch) next.push_back(std::move(successor));
        losing = losing || settled == Settled::reject || settled == Settled::loop;
      }
      children.push_back(node_from(next, losing));
    }
  } else {
    std::map<int, std::pair<std::vector<MachineConfiguration>, bool>> groups;
    for (ConfigId cid : belief) {
      const MachineConfiguration current = configs_[cid];
      const bool visible = machine_.program->info(current.state).visibility == Visibility::visible ||
                           !options_.respect_information;
      const AtmRule* rule = rule_at(current);
      for (std::size_t i = 0; i < rule->choices.size(); ++i) {
        auto [settled, successor] = settle(apply(current, rule->choices[i]));
        auto& group = groups[visible ? static_cast<int>(i) : kHiddenLabel];
        if (settled == Settled::branch) group.first.push_back(std::move(successor));
        group.second = group.second || settled == Settled::reject || settled == Settled::loop;
      }
    }
    for (auto& [label, group] : groups) {
      labels.push_back(label);
      children.push_back(node_from(group.first, group.second));
    }
  }
  nodes_[id].children = std::move(children);
  nodes_[id].labels = std::move(labels);
}

Verdict AlternationGame::solve(std::uint64_t step_bound) {
  if (step_bound == 0) fail(ErrorCode::precondition, "step bound must be positive");
  rank_.assign(nodes_.size(), std::nullopt);
  rank_[kWin] = 0;
  for (std::uint64_t round = 1; round <= step_bound; ++round) {
    bool changed = false;
    for (NodeId id = 2; id < nodes_.size(); ++id) {
      if (rank_[id]) continue;
      const auto& node = nodes_[id];
      auto settled_before = [&](NodeId child) { return rank_[child] && *rank_[child] < round; };
      bool wins = node.kind == Quantifier::existential
                      ? std::any_of(node.children.begin(), node.children.end(), settled_before)
                      : std::all_of(node.children.begin(), node.children.end(), settled_before);
      if (wins) {
        rank_[id] = round;
        changed = true;
      }
    }
    if (rank_[root_]) return Verdict::accept;
    if (!changed) return Verdict::reject;
  }
  return rank_[root_] ? Verdict::accept : Verdict::undetermined;
}

NodeId AlternationGame::after_choice(NodeId node, unsigned choice) const {
  const auto& n = nodes_.at(node);
  if (n.kind != Quantifier::existential || choice >= n.children.size())
    fail(ErrorCode::precondition, "no existential choice " + std::to_string(choice) + " at this node");
  return n.children[choice];
}

std::optional<NodeId> AlternationGame::after_label(NodeId node, int label) const {
  const auto& n = nodes_.at(node);
  for (std::size_t i = 0; i < n.labels.size(); ++i)
    if (n.labels[i] == label) return n.children[i];
  return std::nullopt;
}

std::vector<int> AlternationGame::labels(NodeId node) const { return nodes_.at(node).labels; }

unsigned AlternationGame::choice_count(NodeId node) const {
  return static_cast<unsigned>(nodes_.at(node).children.size());
}

std::optional<unsigned> AlternationGame::winning_choice(NodeId node) const {
  if (!rank_.at(node) || nodes_[node].kind != Quantifier::existential) return std::nullopt;
  const auto& children = nodes_[node].children;
  for (unsigned c = 0; c < children.size(); ++c)
    if (rank_[children[c]] && *rank_[children[c]] < *rank_[node]) return c;
  return std::nullopt;
}

std::optional<int> AlternationGame::refuting_label(NodeId node) const {
  const auto& n = nodes_.at(node);
  if (n.kind != Quantifier::universal) return std::nullopt;
  for (std::size_t i = 0; i < n.children.size(); ++i)
    if (!rank_.at(n.children[i])) return n.labels[i];
  return std::nullopt;
}

std::optional<NodeId> AlternationGame::node_of(const MachineConfiguration& configuration) const {
  auto [settled, c] = settle(configuration);
  if (settled == Settled::accept) return kWin;
  if (settled != Settled::branch) return kLose;
  auto cid = config_ids_.find(c);
  if (cid == config_ids_.end()) return std::nullopt;
  auto it = node_ids_.find(std::vector<ConfigId>{cid->second});
  if (it == node_ids_.end()) return std::nullopt;
  return it->second;
}

Verdict decide_alternating(const AlternatingTM& machine, std::string_view input, std::uint64_t step_bound) {
  AlternationGame game(machine, input);
  return game.solve(step_bound);
}

Verdict decide_alternating(const MultiheadAlternatingMachine& machine, std::string_view input,
                           std::uint64_t step_bound) {
  return decide_alternating(to_alternating_tm(machine), input, step_bound);
}

}  // namespace debate

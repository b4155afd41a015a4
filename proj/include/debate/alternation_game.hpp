#pragma once

#include "debate/machines.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace debate {

using ConfigId = std::uint32_t;
using NodeId = std::uint32_t;

/// The acceptance game of an alternating machine on one input, played over
/// belief sets: each node is the set of configurations the existential
/// player cannot tell apart given the public history (its own choices and
/// the labels of visible universal moves; hidden universal moves show as a
/// blank). Deterministic steps are taken silently. With every universal move
/// visible, beliefs are singletons and this is the ordinary alternation game.
///
/// Acceptance is the least fixed point: a belief that can only cycle is
/// losing for the existential player.
class AlternationGame {
 public:
  struct Options {
    /// When false, hidden universal moves are treated as visible (the
    /// complete-information relaxation).
    bool respect_information = true;
    std::size_t node_cap = 2'000'000;
  };

  static constexpr NodeId kWin = 0;
  static constexpr NodeId kLose = 1;
  static constexpr int kHiddenLabel = -1;

  AlternationGame(const AlternatingTM& machine, std::string_view input, Options options);
  AlternationGame(const AlternatingTM& machine, std::string_view input)
      : AlternationGame(machine, input, Options{}) {}

  NodeId root() const { return root_; }
  std::size_t node_count() const { return nodes_.size(); }

  /// Runs the attractor computation for at most `step_bound` rounds.
  Verdict solve(std::uint64_t step_bound);
  bool winning(NodeId node) const { return rank_.at(node).has_value(); }

  Quantifier kind(NodeId node) const { return nodes_.at(node).kind; }
  const std::vector<ConfigId>& belief(NodeId node) const { return nodes_.at(node).belief; }
  const MachineConfiguration& config(ConfigId id) const { return configs_.at(id); }

  /// Existential node: the child reached by choice index `choice`.
  NodeId after_choice(NodeId node, unsigned choice) const;
  /// Universal node: the child reached by a move showing `label`
  /// (kHiddenLabel for hidden moves).
  std::optional<NodeId> after_label(NodeId node, int label) const;
  std::vector<int> labels(NodeId node) const;
  unsigned choice_count(NodeId node) const;

  /// A choice that strictly decreases the attractor rank (requires solve()).
  std::optional<unsigned> winning_choice(NodeId node) const;
  /// A universal label leading outside the winning region.
  std::optional<int> refuting_label(NodeId node) const;

  /// Node for a belief consisting of exactly `configuration` (after silent
  /// deterministic steps); nullopt when it was never reached.
  std::optional<NodeId> node_of(const MachineConfiguration& configuration) const;

 private:
  struct Node {
    Quantifier kind = Quantifier::existential;
    std::vector<ConfigId> belief;
    // existential: children[c] is the child for choice c.
    // universal: children[i] is the child for labels[i].
    std::vector<NodeId> children;
    std::vector<int> labels;
  };

  enum class Settled { branch, accept, reject, loop };

  MachineConfiguration initial_configuration() const;
  std::string scanned(const MachineConfiguration& c) const;
  MachineConfiguration apply(const MachineConfiguration& c, const AtmChoice& choice) const;
  const AtmRule* rule_at(const MachineConfiguration& c) const;
  std::pair<Settled, MachineConfiguration> settle(MachineConfiguration c) const;
  ConfigId intern_config(const MachineConfiguration& c);
  NodeId intern_node(std::vector<ConfigId> belief);
  NodeId node_from(const std::vector<MachineConfiguration>& successors, bool any_losing);
  void expand(NodeId id);

  const AlternatingTM& machine_;
  std::string tape_;  // end-marked input
  Options options_;
  std::vector<unsigned> tape_lengths_;
  std::vector<MachineConfiguration> configs_;
  std::map<MachineConfiguration, ConfigId> config_ids_;
  std::vector<Node> nodes_;
  std::map<std::vector<ConfigId>, NodeId> node_ids_;
  std::vector<std::optional<std::uint64_t>> rank_;
  NodeId root_ = kLose;
};

}  // namespace debate

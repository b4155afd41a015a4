#pragma once

// Concrete configuration graph of a multihead automaton on one input, with
// the complete-information attractors used by honest players.

#include "debate/machines.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace debate::detail {

struct HeadConfig {
  StateId state = 0;
  std::vector<int> heads;
  auto operator<=>(const HeadConfig&) const = default;
};

class AutomatonArena {
 public:
  AutomatonArena(const MultiheadAlternatingMachine& machine, std::string_view input);

  const MultiheadAlternatingMachine& machine() const { return machine_; }
  HeadConfig initial() const;
  std::string scanned(const HeadConfig& c) const;
  char symbol_at(int position) const { return tape_[static_cast<std::size_t>(position)]; }
  /// Successor for choice `index` of the matching rule; nullopt when the
  /// configuration is stuck, halting or the index is out of range.
  std::optional<HeadConfig> step(const HeadConfig& c, unsigned index) const;
  unsigned choice_count(const HeadConfig& c) const;

  /// Existential player forces acceptance (least fixed point).
  bool accepting(const HeadConfig& c) const;
  /// Universal player forces rejection (halting reject or stuck).
  bool refutable(const HeadConfig& c) const;
  std::optional<unsigned> winning_choice(const HeadConfig& c) const;
  std::optional<unsigned> refuting_choice(const HeadConfig& c) const;
  Verdict verdict() const;

 private:
  std::optional<std::size_t> index_of(const HeadConfig& c) const;

  const MultiheadAlternatingMachine& machine_;
  std::string tape_;
  std::vector<HeadConfig> configs_;
  std::map<HeadConfig, std::size_t> ids_;
  std::vector<std::vector<std::size_t>> successors_;
  std::vector<std::optional<std::size_t>> accept_rank_;
  std::vector<std::optional<std::size_t>> reject_rank_;
};

}  // namespace debate::detail

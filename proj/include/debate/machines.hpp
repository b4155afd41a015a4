#pragma once

#include "debate/state_table.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace debate {

// Input tapes are end-marked: position 0 holds kLeftEnd, position n+1 holds
// kRightEnd. Work tapes are blank-filled with kBlank.
inline constexpr char kLeftEnd = '<';
inline constexpr char kRightEnd = '>';
inline constexpr char kBlank = '_';
inline constexpr char kWildcard = '*';

enum class Quantifier { existential, universal };
enum class Visibility { visible, hidden };
enum class Halting { none, accept, reject };

/// complete: no hidden universal states. blind: every universal state is
/// hidden. private_info: mixed.
enum class MachineMode { complete, blind, private_info };

const char* to_string(MachineMode mode);
MachineMode parse_machine_mode(std::string_view text);

struct MachineState {
  std::string name;
  Quantifier kind = Quantifier::existential;
  Visibility visibility = Visibility::visible;
  Halting halt = Halting::none;

  bool halting() const { return halt != Halting::none; }
};

struct HeadChoice {
  StateId next = 0;
  std::vector<int> moves;  // one per head, each in {-1, 0, +1}

  auto operator<=>(const HeadChoice&) const = default;
};

/// First matching rule wins. `scan` has one character per head; '*' matches
/// anything.
struct AutomatonRule {
  std::string scan;
  std::vector<HeadChoice> choices;
};

/// A two-way k-head alternating finite automaton (2afa(k), 2bafa(k) or
/// 2pafa(k) depending on `mode`).
struct MultiheadAlternatingMachine {
  std::string name;
  unsigned heads = 1;
  std::string alphabet;
  MachineMode mode = MachineMode::complete;
  std::vector<MachineState> states;
  std::vector<std::vector<AutomatonRule>> rules;  // indexed by state
  StateId initial = 0;
  /// Turn-padding map: source state of every state after normalization,
  /// nullopt for inserted padding states. Empty for source machines.
  std::vector<std::optional<StateId>> origin;

  StateId find_state(std::string_view state_name) const;
  /// Throws Error(validation) on malformed machines.
  void validate() const;
  /// Strict alternation, two choices per non-halting state, existential
  /// start and halting states.
  bool is_normalized() const;
  /// Rules matching a concrete scanned tuple, or nullptr when stuck.
  const AutomatonRule* match(StateId state, std::string_view scanned) const;
};

/// Explicit per-input-length bound: either a polynomial in n (coefficients
/// from the constant term upward) or a lookup table.
struct LengthBound {
  std::vector<std::int64_t> polynomial;
  std::map<unsigned, unsigned> table;

  static LengthBound constant(unsigned value) { return LengthBound{{static_cast<std::int64_t>(value)}, {}}; }
  unsigned operator()(unsigned n) const;
  bool operator==(const LengthBound&) const = default;
};

struct TapeSpec {
  std::string name;
  Visibility visibility = Visibility::hidden;
  LengthBound length;
};

struct AtmChoice {
  StateId next = 0;
  std::string writes;      // one per tape, '*' keeps the cell
  std::vector<int> moves;  // input heads first, then tape heads
};

struct AtmRule {
  std::string scan;  // input heads first, then tapes; '*' matches anything
  std::vector<AtmChoice> choices;
};

using AtmProgram = StateTable<MachineState, AtmRule>;

/// Alternating Turing machine with read-only end-marked input heads and
/// bounded work tapes, each tape either common or private.
struct AlternatingTM {
  std::string name;
  unsigned input_heads = 1;
  std::vector<TapeSpec> tapes;
  bool input_on_first_tape = false;
  std::string input_alphabet;
  std::string tape_alphabet;  // includes kBlank
  MachineMode mode = MachineMode::complete;
  std::shared_ptr<const AtmProgram> program;
  StateId initial = 0;
  LengthBound time_bound;

  const AtmRule* match(StateId state, std::string_view scanned) const;
  /// Structural checks on every state reachable in the program graph.
  void validate(std::size_t state_cap = 1'000'000) const;
};

AlternatingTM to_alternating_tm(const MultiheadAlternatingMachine& machine);

struct MachineConfiguration {
  StateId state = 0;
  std::vector<int> heads;
  std::vector<std::string> tapes;
  std::vector<int> tape_heads;

  auto operator<=>(const MachineConfiguration&) const = default;
};

enum class Verdict { accept, reject, undetermined };
const char* to_string(Verdict verdict);

MultiheadAlternatingMachine normalize_alternation(const MultiheadAlternatingMachine& machine);

Verdict decide_alternating(const MultiheadAlternatingMachine& machine, std::string_view input,
                           std::uint64_t step_bound);
Verdict decide_alternating(const AlternatingTM& machine, std::string_view input,
                           std::uint64_t step_bound);

/// Checks `input` against the machine's input alphabet.
void check_input(std::string_view alphabet, std::string_view input);

}  // namespace debate

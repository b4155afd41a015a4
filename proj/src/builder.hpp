#pragma once

// Shared helpers for the verifier compilers.

#include "debate/constructions.hpp"
#include "debate/error.hpp"

#include <string>
#include <vector>

namespace debate::detail {

inline SymbolId add_symbol(VerifierSpec& spec, std::string name, SymbolClass cls) {
  spec.symbols.push_back(DebateSymbol{std::move(name), cls});
  return static_cast<SymbolId>(spec.symbols.size() - 1);
}

/// Input alphabet plus both end-markers: the symbols a head can scan.
inline std::string scannable(const std::string& alphabet) { return alphabet + kLeftEnd + kRightEnd; }

inline VerifierState reading(std::string name, Reader reader) { return VerifierState{std::move(name), reader, false, Halting::none}; }
inline VerifierState silent(std::string name) { return VerifierState{std::move(name), Reader::none, false, Halting::none}; }
inline VerifierState tossing(std::string name) { return VerifierState{std::move(name), Reader::none, true, Halting::none}; }
inline VerifierState halting(std::string name, Halting h) { return VerifierState{std::move(name), Reader::none, false, h}; }

inline VerifierRule on_cell(SymbolId cell, StateId next, int input_move = 0) {
  VerifierRule rule;
  rule.cell = cell;
  rule.next = next;
  rule.input_move = input_move;
  return rule;
}

inline VerifierRule always(StateId next, int input_move = 0) {
  VerifierRule rule;
  rule.next = next;
  rule.input_move = input_move;
  return rule;
}

/// Rules for a move of the tracked input head that refuse to cross an
/// end-marker: crossing sends the verifier to `refuse`.
inline void guarded_move(std::vector<VerifierRule>& rules, std::optional<SymbolId> cell, int move, StateId next,
                         StateId refuse) {
  if (move != 0) {
    VerifierRule guard;
    guard.input = move < 0 ? kLeftEnd : kRightEnd;
    guard.cell = cell;
    guard.next = refuse;
    rules.push_back(guard);
  }
  VerifierRule rule;
  rule.cell = cell;
  rule.next = next;
  rule.input_move = move;
  rules.push_back(rule);
}

inline void require_normalized(const MultiheadAlternatingMachine& machine) {
  machine.validate();
  if (!machine.is_normalized())
    fail(ErrorCode::precondition, "machine '" + machine.name + "' is not normalized (use normalize_alternation)");
}

inline unsigned ceil_log2_unsigned(unsigned k) {
  unsigned r = 0;
  while ((1u << r) < k) ++r;
  return r;
}

}  // namespace debate::detail

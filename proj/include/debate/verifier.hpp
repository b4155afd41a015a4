#pragma once

#include "debate/machines.hpp"
#include "debate/rational.hpp"
#include "debate/state_table.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace debate {

using SymbolId = std::uint32_t;

/// Which reading cell a state consults: C1 (prover) or C0 (refuter).
enum class Reader { none, prover, refuter };

/// Gamma1, Gamma0 and Delta respectively.
enum class SymbolClass { prover, refuter_public, refuter_private };

enum class DebateMode { complete, zero, partial };
const char* to_string(DebateMode mode);
DebateMode parse_debate_mode(std::string_view text);

struct DebateSymbol {
  std::string name;
  SymbolClass cls = SymbolClass::prover;
  bool operator==(const DebateSymbol&) const = default;
};

struct VerifierState {
  std::string name;
  Reader reader = Reader::none;
  bool coin = false;
  Halting halt = Halting::none;
  bool operator==(const VerifierState&) const = default;
};

/// One line of the transition table. Unset fields match anything; the first
/// matching rule of a state applies.
struct VerifierRule {
  std::optional<char> input;
  std::optional<char> work;
  std::optional<SymbolId> cell;
  std::optional<int> coin;
  StateId next = 0;
  std::optional<char> write;  // unset keeps the cell
  int input_move = 0;
  int work_move = 0;
  bool operator==(const VerifierRule&) const = default;
};

using VerifierProgram = StateTable<VerifierState, VerifierRule>;

/// A probabilistic debate verifier: finite control, end-marked read-only
/// input, a bounded work tape and the two reading cells.
struct VerifierSpec {
  std::string name;
  std::string input_alphabet;
  std::string work_alphabet{kBlank};
  unsigned work_cells = 0;  // 0: no work tape, all memory in the state
  /// Maximum coins on any computation path; unset means unbounded, which
  /// exact coin-tree methods reject.
  std::optional<unsigned> coin_budget;
  std::vector<DebateSymbol> symbols;
  std::shared_ptr<const VerifierProgram> program;
  StateId start = 0;
  StateId accept = 0;
  StateId reject = 0;
  /// Free-form notes carried into emitted files (dummy schedules, derived
  /// bounds, source digests).
  std::map<std::string, std::string> provenance;

  std::vector<SymbolId> alphabet(SymbolClass cls) const;
  std::vector<SymbolId> refuter_alphabet() const;  // Gamma0 then Delta
  std::optional<SymbolId> find_symbol(std::string_view symbol_name) const;
  SymbolId symbol(std::string_view symbol_name) const;
  const DebateSymbol& symbol_info(SymbolId id) const { return symbols.at(id); }
  const VerifierState& state(StateId id) const { return program->info(id); }
  DebateMode natural_mode() const;

  /// Alphabet and halting-state invariants that do not depend on an input.
  void validate() const;
  /// Throws unless `mode` is consistent with the alphabets.
  void require_mode(DebateMode mode) const;
};

/// The hidden-symbol marker shown to the prover for Delta symbols.
inline constexpr const char* kFlat = "♭";

struct VerifierConfiguration {
  StateId state = 0;
  int input_pos = 0;
  int work_pos = 0;
  std::string work;
  // Bookkeeping only; never consulted by the transition function.
  unsigned prover_symbols = 0;
  unsigned refuter_symbols = 0;

  /// Ordering/equality on the machine-relevant part (counters excluded).
  struct CoreLess {
    bool operator()(const VerifierConfiguration& a, const VerifierConfiguration& b) const;
  };
  bool same_core(const VerifierConfiguration& other) const;
};

VerifierConfiguration initial_configuration(const VerifierSpec& spec);

char input_symbol(std::string_view input, int position);

/// Applies the transition function once. `cell` must be given exactly in
/// reading states, `coin` exactly in coin-tossing states.
VerifierConfiguration step_verifier(const VerifierSpec& spec, const VerifierConfiguration& config,
                                    std::string_view input, std::optional<SymbolId> cell,
                                    std::optional<int> coin);

/// Where the coin process leads from a configuration before the next
/// symbol is needed: reading configurations, halting, or divergence.
struct Absorption {
  std::vector<std::pair<VerifierConfiguration, Rational>> reading;
  Rational accept = 0;
  Rational reject = 0;
  Rational diverge = 0;
};

/// Exact absorption distribution from `config` (which is returned as-is
/// when it is already reading or halting). Handles coin loops by solving
/// the absorbing-chain equations; mass that can never leave a cycle of
/// non-reading configurations is counted as divergent.
Absorption settle(const VerifierSpec& spec, const VerifierConfiguration& config, std::string_view input,
                  std::size_t transient_cap = 200'000);

/// Consumes `symbol` in reading configuration `config`, then settles.
Absorption consume(const VerifierSpec& spec, const VerifierConfiguration& config, std::string_view input,
                   SymbolId symbol, std::size_t transient_cap = 200'000);

/// Number of configurations reachable from the start under any symbols and
/// coin outcomes.
std::size_t count_reachable_configurations(const VerifierSpec& spec, std::string_view input,
                                           std::size_t cap = 5'000'000);

/// Reading states along every reachable path alternate C1, C0, C1, ...
/// starting with C1. Throws Error(validation) on the first violation.
void validate_alternation(const VerifierSpec& spec, std::string_view input, std::size_t cap = 5'000'000);

/// No reachable path tosses more than `budget` coins.
void validate_coin_budget(const VerifierSpec& spec, std::string_view input, unsigned budget,
                          std::size_t cap = 5'000'000);

/// One member of the derandomized ensemble: the coin source replaced by a
/// fixed bit string.
struct DeterministicVerifier {
  const VerifierSpec* spec = nullptr;
  std::vector<int> coins;

  enum class Outcome { accept, reject, needs_symbol, diverges };
  /// Runs on a fixed finite debate (alternating prover/refuter symbols).
  Outcome run(std::string_view input, const std::vector<SymbolId>& debate) const;
};

std::vector<DeterministicVerifier> ensemble_expand(const VerifierSpec& spec, unsigned r);

struct EnsembleBound {
  std::size_t member_configurations = 0;
  unsigned coins = 0;
  BigInt complete;  // C = N^(2^r)
  /// The partial-information bound is 2^C; kept symbolic.
  std::string partial_text() const { return "2^" + complete.str(); }
};

EnsembleBound compute_ensemble_bound(const VerifierSpec& spec, std::string_view input, unsigned r);

}  // namespace debate

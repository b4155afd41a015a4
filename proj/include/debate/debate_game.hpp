#pragma once

#include "debate/rational.hpp"
#include "debate/verifier.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace debate {

/// A P0 symbol as P1 sees it: the symbol itself for Gamma0, nullopt (♭)
/// for Delta.
using VisibleSymbol = std::optional<SymbolId>;

class HidingMap {
 public:
  explicit HidingMap(const VerifierSpec& spec) : spec_(&spec) {}
  /// Throws Error(validation) for prover symbols, which h is not defined on.
  VisibleSymbol operator()(SymbolId symbol) const;
  std::string render(VisibleSymbol symbol) const;
  std::vector<VisibleSymbol> apply(const std::vector<SymbolId>& p0_symbols) const;

 private:
  const VerifierSpec* spec_;
};

/// P1 decides from the P0 symbols it has seen so far (through h); its own
/// earlier symbols are a function of that sequence, so this is exactly the
/// information a well-formed debate subtree may depend on.
class StrategyP1 {
 public:
  virtual ~StrategyP1() = default;
  /// Throws Error(strategy) when undefined.
  virtual SymbolId choose(const std::vector<VisibleSymbol>& visible_p0) const = 0;
};

/// P0 sees the whole history (both players, including its own Delta symbols).
class StrategyP0 {
 public:
  virtual ~StrategyP0() = default;
  virtual SymbolId choose(const std::vector<SymbolId>& history) const = 0;
};

class TableStrategyP1 final : public StrategyP1 {
 public:
  std::map<std::vector<VisibleSymbol>, SymbolId> table;
  std::optional<SymbolId> fallback;
  SymbolId choose(const std::vector<VisibleSymbol>& visible_p0) const override;
};

class TableStrategyP0 final : public StrategyP0 {
 public:
  std::map<std::vector<SymbolId>, SymbolId> table;
  std::optional<SymbolId> fallback;
  SymbolId choose(const std::vector<SymbolId>& history) const override;
};

/// A single explicit debate branch: the i-th P0 symbol is `symbols[i]`.
class BranchStrategyP0 final : public StrategyP0 {
 public:
  std::vector<SymbolId> symbols;
  std::optional<SymbolId> fallback;
  SymbolId choose(const std::vector<SymbolId>& history) const override;
};

class FunctionStrategyP1 final : public StrategyP1 {
 public:
  explicit FunctionStrategyP1(std::function<SymbolId(const std::vector<VisibleSymbol>&)> f) : f_(std::move(f)) {}
  SymbolId choose(const std::vector<VisibleSymbol>& visible_p0) const override { return f_(visible_p0); }

 private:
  std::function<SymbolId(const std::vector<VisibleSymbol>&)> f_;
};

class FunctionStrategyP0 final : public StrategyP0 {
 public:
  explicit FunctionStrategyP0(std::function<SymbolId(const std::vector<SymbolId>&)> f) : f_(std::move(f)) {}
  SymbolId choose(const std::vector<SymbolId>& history) const override { return f_(history); }

 private:
  std::function<SymbolId(const std::vector<SymbolId>&)> f_;
};

struct Outcome {
  Rational accept = 0;
  Rational reject = 0;
  Rational unresolved = 0;
};

/// Exact outcome distribution of the debate the strategy pair induces,
/// after at most `horizon` debate symbols. Strategies are only consulted
/// while some coin outcome still reads the debate.
Outcome acceptance_probability(const VerifierSpec& spec, std::string_view input, const StrategyP1& s1,
                               const StrategyP0& s0, std::uint64_t horizon);

/// Same, also returning the debate that was played.
Outcome acceptance_probability(const VerifierSpec& spec, std::string_view input, const StrategyP1& s1,
                               const StrategyP0& s0, std::uint64_t horizon, std::vector<SymbolId>& debate_out);

enum class ValueKind { accept_maxmin, reject_minmax };
const char* to_string(ValueKind kind);

struct GameValue {
  Rational value = 0;
  ValueKind kind = ValueKind::accept_maxmin;
  std::optional<BigInt> horizon;  // unset: run to the fixed point
  std::string horizon_text;       // as reported, e.g. "2^C" when symbolic
  bool truncated = false;
  std::size_t nodes = 0;
  std::uint64_t iterations = 0;
};

struct SolveOptions {
  /// Number of debate symbols considered. Unset: the ensemble bound C for
  /// complete information, unbounded (fixed point) otherwise.
  std::optional<BigInt> horizon;
  std::size_t node_cap = 400'000;
  std::uint64_t iteration_cap = 1'000'000;
};

/// Exact solver for the max-min acceptance and min-max rejection values.
/// Nodes are belief sets: the coin distributions over verifier
/// configurations that P1 cannot tell apart because of hidden symbols.
class DebateSolver {
 public:
  DebateSolver(const VerifierSpec& spec, std::string input, DebateMode mode, SolveOptions options = {});
  ~DebateSolver();
  DebateSolver(const DebateSolver&) = delete;
  DebateSolver& operator=(const DebateSolver&) = delete;

  GameValue accept_value();
  GameValue reject_value();

  /// A P1 strategy realizing the value of `kind` (for reject_minmax it is
  /// the strategy minimizing rejection). Requires a non-truncated solve.
  std::shared_ptr<const StrategyP1> prover_strategy(ValueKind kind);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

GameValue game_value_accept(const VerifierSpec& spec, std::string_view input, DebateMode mode,
                            std::optional<BigInt> horizon = std::nullopt);
GameValue game_value_reject(const VerifierSpec& spec, std::string_view input, DebateMode mode,
                            std::optional<BigInt> horizon = std::nullopt);

enum class Side { member, nonmember, neither, undetermined };
const char* to_string(Side side);

struct CheckReport {
  Side side = Side::neither;
  GameValue accept;
  std::optional<GameValue> reject;  // strong check only
};

CheckReport check_strong(const VerifierSpec& spec, std::string_view input, DebateMode mode, const Rational& epsilon,
                         std::optional<BigInt> horizon = std::nullopt);
CheckReport check_weak(const VerifierSpec& spec, std::string_view input, DebateMode mode, const Rational& epsilon,
                       std::optional<BigInt> horizon = std::nullopt);

struct MonteCarloResult {
  std::uint64_t samples = 0;
  std::uint64_t accept = 0;
  std::uint64_t reject = 0;
  std::uint64_t unresolved = 0;
  double accept_frequency() const { return samples ? double(accept) / double(samples) : 0.0; }
  double reject_frequency() const { return samples ? double(reject) / double(samples) : 0.0; }
  double unresolved_frequency() const { return samples ? double(unresolved) / double(samples) : 0.0; }
};

struct MonteCarloOptions {
  std::uint64_t horizon = 1'000'000;       // debate symbols per sample
  std::uint64_t silent_step_cap = 10'000'000;  // steps between reads before "unresolved"
  unsigned threads = 0;                    // 0: hardware concurrency
};

/// Each sample draws its coins from a stream derived from (seed, sample
/// index), so results do not depend on the thread count. Strategies must be
/// safe to call concurrently.
MonteCarloResult monte_carlo_estimate(const VerifierSpec& spec, std::string_view input, const StrategyP1& s1,
                                      const StrategyP0& s0, std::uint64_t samples, std::uint64_t seed,
                                      MonteCarloOptions options = {});

}  // namespace debate

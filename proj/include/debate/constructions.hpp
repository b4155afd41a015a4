#pragma once

#include "debate/debate_game.hpp"
#include "debate/machines.hpp"
#include "debate/verifier.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace debate {

/// Fixed package structure of a multihead-simulation protocol. One
/// exchange covers an existential and a universal step of the simulated
/// machine; the silent side of every slot sends an arbitrary dummy symbol.
struct ProtocolPackageLayout {
  unsigned heads = 1;
  /// Symbols P1 sends per exchange (choice + claims, or choice + dummies).
  unsigned p1_package = 0;
  /// Meaningful P0 symbols per exchange.
  unsigned p0_package = 0;
  std::string restart_symbol;  // empty when the protocol has no restarts
  std::string schedule;        // human-readable slot schedule
};

inline constexpr const char* kRestartSymbol = "↺";

struct HonestStrategies {
  std::shared_ptr<const StrategyP1> p1;
  std::shared_ptr<const StrategyP0> p0;
  Verdict source_verdict = Verdict::undetermined;
};

/// Builds the honest players of a construction for one input.
class HonestPlayerFactory {
 public:
  virtual ~HonestPlayerFactory() = default;
  virtual HonestStrategies make(std::string_view input) const = 0;
};

struct CompiledVerifier {
  VerifierSpec spec;
  std::optional<ProtocolPackageLayout> layout;
  std::shared_ptr<const HonestPlayerFactory> honest;
};

/// Smallest c with (1 - 2^-r)^c < epsilon (at least 1).
unsigned default_repetitions(unsigned r, const Rational& epsilon);

/// Complete-information weak checker for a normalized 2afa(k). `c` is the
/// number of verified accepting runs required; unset derives it from
/// `epsilon`.
CompiledVerifier compile_cdeb_from_2afa(const MultiheadAlternatingMachine& machine, std::optional<unsigned> c,
                                        const Rational& epsilon);

enum class AmplifyDirection { pre_reject, pre_accept };
const char* to_string(AmplifyDirection direction);
AmplifyDirection parse_amplify_direction(std::string_view text);

struct AmplifierParams {
  unsigned r = 0;
  AmplifyDirection direction = AmplifyDirection::pre_reject;

  /// (2^r - 1) / 2^(r+1): probability of the direct verdict.
  Rational wrapper_probability() const;
  /// Guaranteed probability on the side the core decides surely.
  Rational sure_side() const;
  /// Guaranteed probability on the side the core decides with 2^-r.
  Rational weak_side() const;
  /// (2^2r - 1) / 2^(2r+1).
  Rational error_bound() const;
};

/// Prefixes r+1 coins that decide directly with probability
/// (2^r-1)/2^(r+1) and otherwise run `core`.
CompiledVerifier amplify(const CompiledVerifier& core, const AmplifierParams& params);

/// Zero-information checker for a normalized blind 2bafa(k): P0 reports the
/// scanned symbols over the private alphabet.
CompiledVerifier compile_zdeb_from_2bafa(const MultiheadAlternatingMachine& machine);

/// Partial-information checker for a normalized 2pafa(k): public universal
/// choices over Gamma0, private ones and symbol reports over Delta.
CompiledVerifier compile_pdeb_from_2pafa(const MultiheadAlternatingMachine& machine);

enum class WindowMode { complete, zero };

struct WindowParams {
  unsigned t = 0;  // configuration length and configurations per simulation
  Rational epsilon{1, 4};
  std::optional<unsigned> simulations;  // d; default ceil(ln(1/epsilon)) * t
  WindowMode mode = WindowMode::complete;
};

/// ceil(ln(1/epsilon)) * t.
unsigned default_simulations(unsigned t, const Rational& epsilon);

/// Window-checking verifier for an alternating TM whose single tape holds
/// the input (no input heads). The result is tied to inputs of length n
/// through `t` and the tape bound.
CompiledVerifier compile_window_verifier_from_atm(const AlternatingTM& machine, std::size_t input_length,
                                                  const WindowParams& params);

/// Time-shares the 2^r ensemble members of `spec` as an alternating TM that
/// accepts iff more than half of them accept.
AlternatingTM verifier_to_alternating(const VerifierSpec& spec, DebateMode mode);

/// Deterministic verifier simulating a private ATM with one input head and
/// at most one private work tape.
CompiledVerifier patm_to_verifier(const AlternatingTM& machine);

/// PATM simulating a coin-free verifier (private tape), echoing Gamma0
/// symbols publicly.
AlternatingTM verifier_to_patm(const VerifierSpec& spec);

/// Honest players for a compiled verifier; throws Error(precondition) when
/// the source machine's verdict on `input` is undetermined.
HonestStrategies honest_strategies(const CompiledVerifier& compiled, std::string_view input);

}  // namespace debate

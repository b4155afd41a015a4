#pragma once

#include "debate/rational.hpp"
#include "debate/verifier.hpp"

#include <map>
#include <string>
#include <vector>

namespace debate {

using RationalMatrix = std::vector<std::vector<Rational>>;
using RationalVector = std::vector<Rational>;

/// Q_1 M_1 ... Q_k M_k [ v M_1 ... M_k w^T > c ], with a separate matrix menu
/// per quantifier position. Menus index into a pool of named matrices so the
/// same family can be shared across positions.
struct QmwInstance {
  std::string name;
  unsigned dimension = 0;
  std::string prefix;  // 'E' (P1, maximizing) or 'A' (P0, minimizing) per position
  std::vector<std::string> matrix_names;
  std::vector<RationalMatrix> matrices;
  std::vector<std::vector<std::size_t>> menus;  // per position, indices into matrices
  RationalVector v;
  RationalVector w;
  Rational threshold = 0;
  std::map<std::string, std::string> provenance;

  std::size_t add_matrix(std::string matrix_name, RationalMatrix matrix);
  /// Dimensions, nonempty menus, known prefix letters.
  void validate() const;
  /// validate(), plus every position offering the same set of matrices.
  void validate_shared_menu() const;
};

/// Exhaustive depth-first evaluation of the quantified strict inequality.
bool qmw_eval(const QmwInstance& instance);

/// The value P1 can guarantee: max at 'E' positions, min at 'A' positions.
Rational max_qmw(const QmwInstance& instance);

/// Reading configurations of a verifier on one input and the probabilities
/// p(i, j, sigma) of reaching reading configuration j right after i consumes
/// sigma. Prover-reading configurations come first.
struct ReadingChain {
  std::vector<VerifierConfiguration> configs;
  std::size_t prover_count = 0;  // configs[0, prover_count) read C1
  /// Distribution before the first symbol.
  std::vector<std::pair<std::size_t, Rational>> initial;
  Rational initial_accept = 0;
  Rational initial_reject = 0;

  struct Step {
    std::vector<std::pair<std::size_t, Rational>> targets;
    Rational accept = 0;
    Rational reject = 0;
    Rational diverge = 0;
  };
  /// steps[{i, sigma}] for every reading configuration and symbol it may read.
  std::map<std::pair<std::size_t, SymbolId>, Step> steps;

  Rational p(std::size_t i, std::size_t j, SymbolId sigma) const;
};

ReadingChain reading_probabilities(const VerifierSpec& spec, std::string_view input, std::size_t cap = 100'000);

/// Encodes "P1 can force acceptance probability > 1 - epsilon within t
/// exchanges" as a QMW instance with prefix (EA)^t. Coordinates are the
/// reading configurations of each side (padded to a common m) followed by
/// an absorbing accept coordinate.
QmwInstance reduce_cdeb_to_qmw(const VerifierSpec& spec, std::string_view input, unsigned t,
                               const Rational& epsilon);

}  // namespace debate

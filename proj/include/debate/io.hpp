#pragma once

#include "debate/constructions.hpp"
#include "debate/debate_game.hpp"
#include "debate/machines.hpp"
#include "debate/qmw.hpp"
#include "debate/verifier.hpp"

#include <json.hpp>

#include <filesystem>
#include <memory>
#include <string>
#include <variant>

namespace debate::io {

using Json = nlohmann::ordered_json;

Json to_json(const MultiheadAlternatingMachine& machine);
MultiheadAlternatingMachine automaton_from_json(const Json& json);

/// Generated programs are materialized by exploring the states reachable
/// from the initial state (at most `state_cap` of them).
Json to_json(const AlternatingTM& machine, std::size_t state_cap = 200'000);
AlternatingTM atm_from_json(const Json& json);

Json to_json(const VerifierSpec& spec, std::size_t state_cap = 200'000);
VerifierSpec verifier_from_json(const Json& json);

Json to_json(const TableStrategyP1& strategy, const VerifierSpec& spec);
Json to_json(const TableStrategyP0& strategy, const VerifierSpec& spec);
Json to_json(const BranchStrategyP0& strategy, const VerifierSpec& spec);
std::shared_ptr<const StrategyP1> p1_strategy_from_json(const Json& json, const VerifierSpec& spec);
std::shared_ptr<const StrategyP0> p0_strategy_from_json(const Json& json, const VerifierSpec& spec);

/// Walks every visible P0 sequence up to `depth` P0 symbols and records the
/// strategy's answers.
TableStrategyP1 materialize(const StrategyP1& strategy, const VerifierSpec& spec, std::size_t depth);

Json to_json(const QmwInstance& instance);
QmwInstance qmw_from_json(const Json& json);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& json);

/// The "type" field of a document ("automaton", "atm", "verifier", ...).
std::string document_type(const Json& json);

}  // namespace debate::io

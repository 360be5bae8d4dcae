#pragma once

#include <string>

#include "qgames/game_compiler.hpp"
#include "qgames/solvers.hpp"

namespace qgames {

/// Bumped whenever a serialized field changes meaning.
inline constexpr int kSchemaVersion = 1;

// Dense arrays throughout: pi as a list, V as a list of rows.
nlohmann::json to_json(const GameSpec& game);
GameSpec game_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MultiRoundGameSpec& game);
MultiRoundGameSpec multiround_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CcpSpec& ccp);
CcpSpec ccp_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ValueReport& report);

nlohmann::json to_json(const BellScenario& scenario);
nlohmann::json to_json(const LinearInequality& ineq);
LinearInequality linear_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CorrelatorInequality& ineq);

/// Two-space indented dump with a trailing newline.
std::string dump(const nlohmann::json& j);

/// Reads a file written by dump(); throws ParseError on malformed JSON and
/// ShapeError on a schema mismatch.
nlohmann::json load_json_file(const std::string& path);

}  // namespace qgames

#pragma once

#include <nlohmann/json.hpp>

#include "qboost/config_space.hpp"
#include "qboost/objectives.hpp"
#include "qboost/optimizer.hpp"

namespace qboost {

/// Space documents look like
///
///   {"params": [
///     {"name": "C", "kind": "log_float", "lower": 0.03125, "upper": 32768, "default": 1.0},
///     {"name": "max_depth", "kind": "integer", "lower": 1, "upper": 20, "default": 20},
///     {"name": "criterion", "kind": "categorical", "categories": ["gini", "entropy"],
///      "default": "gini"}]}
///
/// Kinds are float, log_float, integer and categorical. Parsing throws
/// SpaceError on malformed documents.
nlohmann::json space_to_json(const ConfigSpace& space);
ConfigSpace space_from_json(const nlohmann::json& doc);
ConfigSpace load_space_file(const std::string& path);

/// {"name": value, ...} in declaration order.
nlohmann::json config_to_json(const ConfigSpace& space, const Configuration& config);
Configuration config_from_json(const ConfigSpace& space, const nlohmann::json& doc);

/// Name, space, noise level and known optimum of an objective.
nlohmann::json objective_manifest(const SyntheticObjective& objective);

nlohmann::json optimizer_config_to_json(const OptimizerConfig& cfg);

}  // namespace qboost

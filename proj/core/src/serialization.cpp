#include "qboost/serialization.hpp"

#include <fstream>

namespace qboost {

using nlohmann::json;

json space_to_json(const ConfigSpace& space) {
  json params = json::array();
  for (const auto& p : space.params()) {
    json entry{{"name", p.name()}, {"kind", std::string(to_string(p.kind()))}};
    switch (p.kind()) {
      case ParamKind::real:
      case ParamKind::log_real:
        entry["lower"] = p.lower();
        entry["upper"] = p.upper();
        entry["default"] = std::get<double>(p.default_value());
        break;
      case ParamKind::integer:
        entry["lower"] = static_cast<std::int64_t>(p.lower());
        entry["upper"] = static_cast<std::int64_t>(p.upper());
        entry["default"] = std::get<std::int64_t>(p.default_value());
        break;
      case ParamKind::categorical:
        entry["categories"] = p.categories();
        entry["default"] = std::get<std::string>(p.default_value());
        break;
    }
    params.push_back(std::move(entry));
  }
  return json{{"params", std::move(params)}};
}

ConfigSpace space_from_json(const json& doc) {
  try {
    if (!doc.contains("params") || !doc["params"].is_array()) {
      throw SpaceError("space document needs a 'params' array");
    }
    std::vector<ParamSpec> params;
    for (const auto& entry : doc["params"]) {
      const auto name = entry.at("name").get<std::string>();
      const ParamKind kind = param_kind_from_string(entry.at("kind").get<std::string>());
      switch (kind) {
        case ParamKind::real:
          params.push_back(ParamSpec::real(name, entry.at("lower").get<double>(),
                                           entry.at("upper").get<double>(),
                                           entry.at("default").get<double>()));
          break;
        case ParamKind::log_real:
          params.push_back(ParamSpec::log_real(name, entry.at("lower").get<double>(),
                                               entry.at("upper").get<double>(),
                                               entry.at("default").get<double>()));
          break;
        case ParamKind::integer:
          params.push_back(ParamSpec::integer(name, entry.at("lower").get<std::int64_t>(),
                                              entry.at("upper").get<std::int64_t>(),
                                              entry.at("default").get<std::int64_t>()));
          break;
        case ParamKind::categorical:
          params.push_back(ParamSpec::categorical(
              name, entry.at("categories").get<std::vector<std::string>>(),
              entry.at("default").get<std::string>()));
          break;
      }
    }
    return ConfigSpace(std::move(params));
  } catch (const json::exception& e) {
    throw SpaceError(std::string("malformed space document: ") + e.what());
  }
}

ConfigSpace load_space_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpaceError("cannot open space file '" + path + "'");
  try {
    return space_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw SpaceError("space file '" + path + "' is not valid JSON: " + e.what());
  }
}

json config_to_json(const ConfigSpace& space, const Configuration& config) {
  json out = json::object();
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& value = config[i];
    if (const auto* x = std::get_if<double>(&value)) {
      out[space[i].name()] = *x;
    } else if (const auto* n = std::get_if<std::int64_t>(&value)) {
      out[space[i].name()] = *n;
    } else if (const auto* s = std::get_if<std::string>(&value)) {
      out[space[i].name()] = *s;
    } else {
      out[space[i].name()] = nullptr;
    }
  }
  return out;
}

Configuration config_from_json(const ConfigSpace& space, const json& doc) {
  std::vector<std::pair<std::string, ParamValue>> named;
  for (const auto& p : space.params()) {
    if (!doc.contains(p.name())) continue;
    const auto& v = doc[p.name()];
    switch (p.kind()) {
      case ParamKind::real:
      case ParamKind::log_real: named.emplace_back(p.name(), v.get<double>()); break;
      case ParamKind::integer: named.emplace_back(p.name(), v.get<std::int64_t>()); break;
      case ParamKind::categorical: named.emplace_back(p.name(), v.get<std::string>()); break;
    }
  }
  return space.make(named);
}

json objective_manifest(const SyntheticObjective& objective) {
  json out{{"name", objective.name()},
           {"space", space_to_json(objective.space())},
           {"noise_sd", objective.noise_sd()},
           {"optimum_value", objective.optimum_value},
           {"orientation", "maximize"},
           {"description", objective.description}};
  if (objective.optimum_config) {
    out["anchor"] = config_to_json(objective.space(), *objective.optimum_config);
  }
  if (objective.optimum_point) out["optimum_point"] = *objective.optimum_point;
  return out;
}

json optimizer_config_to_json(const OptimizerConfig& cfg) {
  return json{{"strategy", std::string(to_string(cfg.strategy))},
              {"budget", cfg.budget},
              {"batch_size", cfg.batch_size},
              {"local_search_starts", cfg.local_search_starts},
              {"local_search_max_steps", cfg.local_search_max_steps},
              {"max_reruns", cfg.max_reruns},
              {"init_samples", cfg.init_samples},
              {"include_default", cfg.include_default},
              {"racing", cfg.racing},
              {"use_pca", cfg.use_pca},
              {"pca_dims", cfg.pca_dims},
              {"epsilon", cfg.epsilon},
              {"quantile", cfg.gbqr.quantile},
              {"gbqr_iterations", cfg.gbqr.n_iterations},
              {"gbqr_max_leaves", cfg.gbqr.max_leaves},
              {"gbqr_learning_rate", cfg.gbqr.learning_rate},
              {"rf_trees", cfg.rf.n_trees},
              {"rf_min_variance", cfg.rf.min_variance}};
}

}  // namespace qboost

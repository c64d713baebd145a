#include "records.hpp"

#include <algorithm>
#include <cmath>

#include "qboost/serialization.hpp"

namespace qboost::cli {

using nlohmann::json;

json header_record(const RunMeta& meta, const SyntheticObjective& objective,
                   const OptimizerConfig& cfg) {
  return json{{"type", "header"},
              {"schema_version", kSchemaVersion},
              {"experiment", meta.experiment},
              {"strategy", meta.strategy},
              {"master_seed", meta.master_seed},
              {"budget_multiplier", meta.budget_multiplier},
              {"optimizer", optimizer_config_to_json(cfg)},
              {"objective", objective_manifest(objective)}};
}

json eval_record(const RunMeta& meta, const SyntheticObjective& objective,
                 const RunHistory& history, const Observation& obs) {
  const auto& space = history.space();
  const auto& incumbent = history.entries().at(obs.incumbent_id).config;
  return json{{"type", "eval"},
              {"experiment", meta.experiment},
              {"strategy", meta.strategy},
              {"objective", objective.name()},
              {"master_seed", meta.master_seed},
              {"iteration", obs.iteration},
              {"round", obs.round},
              {"config", config_to_json(space, obs.config)},
              {"encoded", history.entries().at(obs.config_id).encoded},
              {"run_seed", obs.seed},
              {"score", obs.score},
              {"failed", obs.failed},
              {"incumbent", config_to_json(space, incumbent)},
              {"incumbent_score", obs.incumbent_score},
              {"incumbent_true", objective.response(incumbent)},
              {"timings_us",
               {{"fit", obs.round_timings.fit_us},
                {"acquisition", obs.round_timings.acquisition_us},
                {"kd_build", obs.round_timings.kd_build_us},
                {"kd_query", obs.round_timings.kd_query_us},
                {"objective", obs.objective_us}}}};
}

json without_timings(const json& record) {
  json copy = record;
  copy.erase("timings_us");
  return copy;
}

RecordWriter::RecordWriter(const std::string& path) : out_(path, std::ios::trunc) {
  if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
}

void RecordWriter::write(const json& record) {
  out_ << record.dump() << '\n';
  out_.flush();
}

RecordFile read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open record file '" + path + "'");
  RecordFile file;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded() || !record.is_object() || !record.contains("type")) {
      ++file.skipped;
      continue;
    }
    const auto& type = record["type"];
    if (type == "header") {
      if (have_header) {
        ++file.skipped;
        continue;
      }
      if (record.value("schema_version", -1) != kSchemaVersion) {
        throw SchemaError("'" + path + "' has schema version " +
                          record.value("schema_version", json(nullptr)).dump() + ", expected " +
                          std::to_string(kSchemaVersion));
      }
      file.header = std::move(record);
      have_header = true;
    } else if (type == "eval" && have_header && record.contains("incumbent_true") &&
               record["incumbent_true"].is_number()) {
      file.evals.push_back(std::move(record));
    } else {
      ++file.skipped;
    }
  }
  if (!have_header) throw SchemaError("'" + path + "' has no header record");
  return file;
}

std::vector<double> incumbent_curve(const std::vector<json>& evals, double multiplier, int steps) {
  std::vector<double> curve;
  if (evals.empty() || steps <= 0) return curve;
  curve.reserve(static_cast<std::size_t>(steps));
  for (int t = 1; t <= steps; ++t) {
    // small slack so 2 * 3 does not become 7 through rounding
    const auto idx = static_cast<std::size_t>(std::ceil(multiplier * t - 1e-9));
    const std::size_t clamped = std::clamp<std::size_t>(idx, 1, evals.size());
    curve.push_back(evals[clamped - 1]["incumbent_true"].get<double>());
  }
  return curve;
}

}  // namespace qboost::cli

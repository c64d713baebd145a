#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qboost/objectives.hpp"
#include "qboost/optimizer.hpp"

namespace qboost::cli {

inline constexpr int kSchemaVersion = 1;

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Identifies one optimization run inside an experiment.
struct RunMeta {
  std::string experiment;
  std::string strategy;  // label, e.g. "random_x2"
  std::uint64_t master_seed = 0;
  double budget_multiplier = 1.0;
};

nlohmann::json header_record(const RunMeta& meta, const SyntheticObjective& objective,
                             const OptimizerConfig& cfg);

/// Everything but "timings_us" is a pure function of the flags and seeds.
nlohmann::json eval_record(const RunMeta& meta, const SyntheticObjective& objective,
                           const RunHistory& history, const Observation& obs);

/// Copy of `record` without wall-clock fields.
nlohmann::json without_timings(const nlohmann::json& record);

/// One JSON object per line, flushed as written so an interrupted run leaves
/// a readable prefix.
class RecordWriter {
 public:
  explicit RecordWriter(const std::string& path);
  void write(const nlohmann::json& record);

 private:
  std::ofstream out_;
};

struct RecordFile {
  nlohmann::json header;
  std::vector<nlohmann::json> evals;
  int skipped = 0;  // unparsable or unrecognized lines
};

/// Throws SchemaError when the header is missing or its version differs.
RecordFile read_records(const std::string& path);

/// Incumbent true response after step t = 1..steps, where step t maps to
/// evaluation ceil(multiplier * t). Short runs repeat their last value.
std::vector<double> incumbent_curve(const std::vector<nlohmann::json>& evals, double multiplier,
                                    int steps);

}  // namespace qboost::cli

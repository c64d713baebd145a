#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qboost/objectives.hpp"
#include "qboost/optimizer.hpp"

namespace qboost::cli {

/// Flags shared by optimize and compare.
struct RunOptions {
  std::vector<std::string> strategies{"hyperboost"};
  std::vector<std::string> objectives{"branin"};
  int budget = 100;
  std::uint64_t seed = 0;
  int reps = 3;
  double budget_multiplier = 1.0;  // compare: applies to random and roar only
  int max_reruns = 5;
  int batch_size = 10000;
  double quantile = 0.9;
  bool use_pca = false;
  int pca_dims = 2;
  double epsilon = 0.0;
  double noise_sd = 0.0;
  int local_search_starts = 10;
  std::string experiment = "qboost";
  std::string out;
};

struct OverheadOptions {
  std::string study = "all";  // surrogate | kd | all
  int iterations = 200;
  std::vector<int> dims{2, 4};
  std::vector<int> kd_dims{2, 4, 8};
  int batch_size = 10000;
  int pca_dims = 2;
  std::uint64_t seed = 0;
  std::string out = "overhead.csv";
};

struct ReportOptions {
  std::vector<std::string> inputs;
  std::vector<std::string> strategies;  // column order; unlisted ones follow in first-seen order
  std::string out = ".";
};

/// `<name>` of a built-in objective, or a path to a space file whose default
/// configuration becomes the anchor of a synthetic response.
SyntheticObjective resolve_objective(const std::string& name_or_path, double noise_sd);

OptimizerConfig optimizer_config(const RunOptions& opts, Strategy strategy);

/// Runs `strategy` and hands every observation to `on_observation`.
RunHistory run_strategy(const SyntheticObjective& objective, const OptimizerConfig& cfg,
                        std::uint64_t master_seed, const ObservationCallback& on_observation);

/// One row of an overhead table.
struct TimingRow {
  std::string study;
  std::string model;
  int dims = 0;
  bool pca = false;
  int iteration = 0;
  int observed = 0;
  std::string component;
  double micros = 0.0;
};

/// No racing and no local search: each iteration fits `model` ("gbqr" or
/// "rf") on all observations, predicts a fresh uniform batch, evaluates the
/// argmax once. `evaluated` receives every evaluated configuration.
std::vector<TimingRow> surrogate_overhead(const std::string& model, int dims, int iterations,
                                          int batch_size, std::uint64_t seed,
                                          std::vector<Configuration>* evaluated = nullptr);

/// Iteration i indexes pca_dims + i uniform points in [0, 1]^dims and queries a
/// uniform batch, optionally through a PCA map to pca_dims.
std::vector<TimingRow> kd_overhead(int dims, bool use_pca, int pca_dims, int iterations,
                                   int batch_size, std::uint64_t seed);

int cmd_optimize(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_compare(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_overhead(const OverheadOptions& opts, std::ostream& out, std::ostream& err);
int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches. Usage errors return 2.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qboost::cli

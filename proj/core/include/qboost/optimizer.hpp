#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qboost/config_space.hpp"
#include "qboost/encoding.hpp"
#include "qboost/gbqr.hpp"
#include "qboost/neighbors.hpp"
#include "qboost/objectives.hpp"
#include "qboost/projection.hpp"
#include "qboost/rf_surrogate.hpp"

namespace qboost {

enum class Strategy { hyperboost, smac_rf, roar, random };

std::string_view to_string(Strategy strategy);
/// Accepts both "smac_rf" and "smac-rf".
Strategy strategy_from_string(std::string_view text);

struct OptimizerConfig {
  Strategy strategy = Strategy::hyperboost;
  int budget = 100;
  int batch_size = 10000;
  int local_search_starts = 10;
  int local_search_max_steps = 50;
  int max_reruns = 5;
  int init_samples = 3;
  bool include_default = true;  // evaluate the space default after the random initial design
  bool racing = true;           // false: every proposal runs once, no incumbent duel
  bool use_pca = false;
  int pca_dims = 2;
  double epsilon = 0.0;
  GbqrParams gbqr;
  RfParams rf;
};

/// Throws std::invalid_argument when a count is out of range.
void check_config(const OptimizerConfig& cfg);

/// Wall-clock costs of one proposal round, in microseconds.
struct RoundTimings {
  double fit_us = 0.0;
  double acquisition_us = 0.0;
  double kd_build_us = 0.0;
  double kd_query_us = 0.0;
};

struct Observation {
  Configuration config;
  std::size_t config_id = 0;
  std::uint64_t seed = 0;
  double score = 0.0;
  bool failed = false;
  int iteration = 0;  // 1-based objective invocation count
  int round = 0;      // 0 for the initial design, then one per proposal
  double objective_us = 0.0;
  RoundTimings round_timings;  // set on the first observation of a round
  std::size_t incumbent_id = 0;
  double incumbent_score = 0.0;
};

/// Every run of one distinct configuration.
struct ConfigEntry {
  Configuration config;
  ConfigVector encoded;
  std::vector<std::size_t> runs;  // indices into RunHistory::observations()
  double score_sum = 0.0;

  double mean() const { return score_sum / static_cast<double>(runs.size()); }
};

class RunHistory {
 public:
  RunHistory(ConfigSpace space, int budget);

  const ConfigSpace& space() const noexcept { return space_; }
  const EncodingLayout& layout() const noexcept { return layout_; }
  const std::vector<Observation>& observations() const noexcept { return observations_; }
  const std::vector<ConfigEntry>& entries() const noexcept { return entries_; }

  int budget() const noexcept { return budget_; }
  int budget_used() const noexcept { return static_cast<int>(observations_.size()); }
  bool exhausted() const noexcept { return budget_used() >= budget_; }
  int failures() const noexcept { return failures_; }
  int delta_clamps() const noexcept { return delta_clamps_; }
  void note_delta_clamps(int count) { delta_clamps_ += count; }

  std::optional<std::size_t> find(const Configuration& config) const;

  bool has_incumbent() const noexcept { return incumbent_.has_value(); }
  std::size_t incumbent_id() const { return incumbent_.value(); }
  const Configuration& incumbent() const { return entries_.at(incumbent_id()).config; }
  double incumbent_score() const { return entries_.at(incumbent_id()).mean(); }
  std::size_t incumbent_runs() const { return entries_.at(incumbent_id()).runs.size(); }

  /// Score of `entry` on `seed`, if it ran there.
  std::optional<double> score_on(std::size_t entry, std::uint64_t seed) const;
  std::vector<std::uint64_t> seeds_of(std::size_t entry) const;

  /// Appends one objective invocation. Throws std::logic_error when the
  /// budget is spent or the (configuration, seed) pair already ran.
  std::size_t record(const Configuration& config, std::uint64_t seed, double score, bool failed,
                     int round, double objective_us);
  void set_incumbent(std::size_t entry);
  /// Copies the current incumbent into the latest observation.
  void stamp_latest();
  /// Timings attached to the next recorded observation.
  void begin_round(const RoundTimings& timings);

  /// Mean score per distinct configuration, in first-seen order.
  std::vector<double> mean_scores() const;

 private:
  ConfigSpace space_;
  EncodingLayout layout_;
  int budget_;
  int failures_ = 0;
  int delta_clamps_ = 0;
  std::vector<Observation> observations_;
  std::vector<ConfigEntry> entries_;
  std::optional<std::size_t> incumbent_;
  std::optional<RoundTimings> pending_timings_;
};

/// Called after every objective invocation, once the incumbent reflects it.
using ObservationCallback = std::function<void(const RunHistory&, const Observation&)>;

/// Acquisition value with a secondary key that only breaks exact ties.
struct AcqValue {
  double value = 0.0;
  double tiebreak = 0.0;
};

inline bool better(const AcqValue& a, const AcqValue& b) {
  return a.value > b.value || (a.value == b.value && a.tiebreak > b.tiebreak);
}

/// Index of the lexicographically largest entry; earliest wins ties.
std::size_t select_best(std::span<const AcqValue> values);

/// Scores encoded candidates. Implementations are immutable once built.
class AcquisitionScorer {
 public:
  virtual ~AcquisitionScorer() = default;
  virtual std::vector<AcqValue> score(std::span<const ConfigVector> candidates) const = 0;
};

/// q_hat + s * delta. The tie key is delta, so a flat quantile surface (s = 0)
/// still prefers sparse regions.
class HyperboostScorer : public AcquisitionScorer {
 public:
  /// `observed` are the encoded observed configurations. With `use_pca` the
  /// index lives in a projected space normalized by the largest observed
  /// pairwise projected distance.
  HyperboostScorer(const GbqrModel& model, const std::vector<ConfigVector>& observed, double scale,
                   double max_distance, bool use_pca, int pca_dims, double epsilon);

  std::vector<AcqValue> score(std::span<const ConfigVector> candidates) const override;
  /// Sparsity bonus per candidate, without the quantile term.
  std::vector<double> deltas(std::span<const ConfigVector> candidates) const;

  double scale() const noexcept { return scale_; }
  double normalizer() const noexcept { return normalizer_; }
  bool projected() const noexcept { return pca_.has_value(); }
  double build_us() const noexcept { return build_us_; }
  /// Time spent in nearest-neighbor queries so far (projection included).
  double query_us() const noexcept { return query_us_; }
  int clamps() const noexcept { return clamps_; }

 private:
  const GbqrModel& model_;
  double scale_;
  double normalizer_;
  double epsilon_;
  std::optional<PcaMap> pca_;
  std::optional<KdIndex> index_;
  double build_us_ = 0.0;
  mutable double query_us_ = 0.0;
  mutable int clamps_ = 0;
};

/// Expected Improvement over the best observed mean, from forest mean/variance.
class EiScorer : public AcquisitionScorer {
 public:
  EiScorer(const RfModel& model, double f_best) : model_(model), f_best_(f_best) {}
  std::vector<AcqValue> score(std::span<const ConfigVector> candidates) const override;

 private:
  const RfModel& model_;
  double f_best_;
};

using AcquisitionFn = std::function<AcqValue(const Configuration&)>;

/// One-exchange neighborhood: each numeric parameter moved by +-step of its
/// unit range (integers by at least one), each categorical switched to every
/// other label.
std::vector<Configuration> neighbors(const ConfigSpace& space, const Configuration& config,
                                     double step);

/// Hill climbing from `start`. Moves to the best neighbor while it strictly
/// improves; on failure the step halves from 0.05 down to 0.00625. Stops after
/// max_steps moves or at a local optimum.
Configuration local_search(const Configuration& start, const AcquisitionFn& acquisition,
                           const ConfigSpace& space, int max_steps);

struct ProposalStats {
  double batch_us = 0.0;
  double local_search_us = 0.0;
  std::size_t chosen_index = 0;  // < batch size: batch point; otherwise a local-search endpoint
  AcqValue chosen_value;
};

/// Scores batch_size uniform samples, refines the top local_search_starts by
/// local search and returns the best of all batch points and endpoints.
Configuration propose(const AcquisitionScorer& scorer, const ConfigSpace& space,
                      const EncodingLayout& layout, int batch_size, int local_search_starts,
                      int local_search_max_steps, Rng& rng, ProposalStats* stats = nullptr);

/// Seed of the k-th run of any configuration within one optimization run.
std::uint64_t run_seed(std::uint64_t master_seed, std::size_t k);

/// Races `challenger` against the incumbent on the incumbent's seeds. Returns
/// false when no objective invocation was possible (the challenger already
/// ran everywhere it could and the incumbent is at the rerun cap).
bool intensify(const Configuration& challenger, RunHistory& history, const Evaluator& objective,
               const OptimizerConfig& cfg, std::uint64_t master_seed, int round,
               const ObservationCallback& on_observation = {});

/// Sequential model-based optimization with the configured strategy.
/// Deterministic given master_seed.
RunHistory run(const Evaluator& objective, const ConfigSpace& space, const OptimizerConfig& cfg,
               std::uint64_t master_seed, const ObservationCallback& on_observation = {});

/// SMBO loop with uniform random proposals and the same racing.
RunHistory roar(const Evaluator& objective, const ConfigSpace& space, OptimizerConfig cfg,
                std::uint64_t master_seed, const ObservationCallback& on_observation = {});

/// budget single-run evaluations of distinct uniform samples.
RunHistory random_search(const Evaluator& objective, const ConfigSpace& space,
                         const OptimizerConfig& cfg, std::uint64_t master_seed,
                         const ObservationCallback& on_observation = {});

}  // namespace qboost

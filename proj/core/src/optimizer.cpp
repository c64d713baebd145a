#include "qboost/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qboost/acquisition.hpp"

namespace qboost {

namespace {

using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point start) {
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

// Stream ids for derive_seed; fixed so histories are reproducible.
constexpr std::uint64_t kSamplingStream = 1;
constexpr std::uint64_t kProposalStream = 2;
constexpr std::uint64_t kModelStream = 3;
constexpr std::uint64_t kRunSeedStream = 1000;

constexpr double kInitialStep = 0.05;
constexpr double kMinimumStep = 0.00625;

}  // namespace

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::hyperboost: return "hyperboost";
    case Strategy::smac_rf: return "smac_rf";
    case Strategy::roar: return "roar";
    case Strategy::random: return "random";
  }
  return "unknown";
}

Strategy strategy_from_string(std::string_view text) {
  if (text == "hyperboost") return Strategy::hyperboost;
  if (text == "smac_rf" || text == "smac-rf") return Strategy::smac_rf;
  if (text == "roar") return Strategy::roar;
  if (text == "random") return Strategy::random;
  throw std::invalid_argument("unknown strategy '" + std::string(text) + "'");
}

void check_config(const OptimizerConfig& cfg) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("optimizer: ") + what);
  };
  require(cfg.budget >= 1, "budget must be at least 1");
  require(cfg.batch_size >= 1, "batch_size must be at least 1");
  require(cfg.local_search_starts >= 0, "local_search_starts must be non-negative");
  require(cfg.local_search_max_steps >= 0, "local_search_max_steps must be non-negative");
  require(cfg.max_reruns >= 1, "max_reruns must be at least 1");
  require(cfg.init_samples >= 1, "init_samples must be at least 1");
  require(cfg.pca_dims >= 1, "pca_dims must be at least 1");
  require(cfg.epsilon >= 0.0, "epsilon must be non-negative");
}

// ---------------------------------------------------------------------------
// RunHistory

RunHistory::RunHistory(ConfigSpace space, int budget)
    : space_(std::move(space)), layout_(space_), budget_(budget) {}

std::optional<std::size_t> RunHistory::find(const Configuration& config) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].config == config) return i;
  }
  return std::nullopt;
}

std::optional<double> RunHistory::score_on(std::size_t entry, std::uint64_t seed) const {
  for (std::size_t obs : entries_.at(entry).runs) {
    if (observations_[obs].seed == seed) return observations_[obs].score;
  }
  return std::nullopt;
}

std::vector<std::uint64_t> RunHistory::seeds_of(std::size_t entry) const {
  std::vector<std::uint64_t> seeds;
  for (std::size_t obs : entries_.at(entry).runs) seeds.push_back(observations_[obs].seed);
  return seeds;
}

std::size_t RunHistory::record(const Configuration& config, std::uint64_t seed, double score,
                               bool failed, int round, double objective_us) {
  if (exhausted()) throw std::logic_error("run history: evaluation budget exhausted");
  std::size_t entry = 0;
  if (auto found = find(config)) {
    entry = *found;
    if (score_on(entry, seed)) {
      throw std::logic_error("run history: configuration already ran on this seed");
    }
  } else {
    entry = entries_.size();
    entries_.push_back({config, encode(layout_, space_, config), {}, 0.0});
  }
  Observation obs;
  obs.config = config;
  if (pending_timings_) {
    obs.round_timings = *pending_timings_;
    pending_timings_.reset();
  }
  obs.config_id = entry;
  obs.seed = seed;
  obs.score = score;
  obs.failed = failed;
  obs.iteration = budget_used() + 1;
  obs.round = round;
  obs.objective_us = objective_us;
  obs.incumbent_id = incumbent_.value_or(entry);
  observations_.push_back(std::move(obs));
  entries_[entry].runs.push_back(observations_.size() - 1);
  entries_[entry].score_sum += score;
  if (failed) ++failures_;
  if (!incumbent_) incumbent_ = entry;
  observations_.back().incumbent_score = incumbent_score();
  return observations_.size() - 1;
}

void RunHistory::set_incumbent(std::size_t entry) {
  if (entry >= entries_.size() || entries_[entry].runs.empty()) {
    throw std::logic_error("run history: incumbent must have at least one run");
  }
  incumbent_ = entry;
}

void RunHistory::stamp_latest() {
  if (observations_.empty() || !incumbent_) return;
  observations_.back().incumbent_id = *incumbent_;
  observations_.back().incumbent_score = incumbent_score();
}

void RunHistory::begin_round(const RoundTimings& timings) { pending_timings_ = timings; }

std::vector<double> RunHistory::mean_scores() const {
  std::vector<double> means;
  means.reserve(entries_.size());
  for (const auto& e : entries_) means.push_back(e.mean());
  return means;
}

// ---------------------------------------------------------------------------
// Acquisition scoring

std::size_t select_best(std::span<const AcqValue> values) {
  if (values.empty()) throw std::invalid_argument("select_best: no candidates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (better(values[i], values[best])) best = i;
  }
  return best;
}

HyperboostScorer::HyperboostScorer(const GbqrModel& model, const std::vector<ConfigVector>& observed,
                                   double scale, double max_distance, bool use_pca, int pca_dims,
                                   double epsilon)
    : model_(model), scale_(scale), normalizer_(max_distance), epsilon_(epsilon) {
  const auto start = Clock::now();
  const std::size_t k = observed.empty() ? 0 : observed.front().size();
  const auto target = static_cast<std::size_t>(pca_dims);
  if (use_pca && target < k && observed.size() >= target + 1) {
    pca_ = PcaMap::fit(observed, target);
    std::vector<ConfigVector> projected;
    projected.reserve(observed.size());
    for (const auto& v : observed) projected.push_back(pca_->project(v));
    double widest = 0.0;
    for (std::size_t i = 0; i < projected.size(); ++i) {
      for (std::size_t j = i + 1; j < projected.size(); ++j) {
        widest = std::max(widest, manhattan(projected[i], projected[j]));
      }
    }
    // All projections coincide: any positive distance counts as maximal.
    normalizer_ = widest > 0.0 ? widest : std::numeric_limits<double>::min();
    index_.emplace(projected);
  } else {
    index_.emplace(observed);
  }
  build_us_ = micros_since(start);
}

std::vector<double> HyperboostScorer::deltas(std::span<const ConfigVector> candidates) const {
  const auto start = Clock::now();
  std::vector<NeighborHit> hits;
  if (pca_) {
    std::vector<ConfigVector> projected;
    projected.reserve(candidates.size());
    for (const auto& c : candidates) projected.push_back(pca_->project(c));
    hits = index_->nearest_batch(projected, epsilon_);
  } else {
    hits = index_->nearest_batch(candidates, epsilon_);
  }
  std::vector<double> out(hits.size());
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (delta_clamped(hits[i].distance, normalizer_)) ++clamps_;
    out[i] = sparsity_delta(hits[i].distance, normalizer_);
  }
  query_us_ += micros_since(start);
  return out;
}

std::vector<AcqValue> HyperboostScorer::score(std::span<const ConfigVector> candidates) const {
  const std::vector<double> q_hat = model_.predict_batch(candidates);
  const std::vector<double> delta = deltas(candidates);
  std::vector<AcqValue> out(candidates.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {hyperboost_acq(q_hat[i], scale_, delta[i]), delta[i]};
  }
  return out;
}

std::vector<AcqValue> EiScorer::score(std::span<const ConfigVector> candidates) const {
  const std::vector<MeanVar> pred = model_.predict_batch(candidates);
  std::vector<AcqValue> out(candidates.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {expected_improvement(pred[i].mean, std::sqrt(pred[i].variance), f_best_), 0.0};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Local search and proposal

std::vector<Configuration> neighbors(const ConfigSpace& space, const Configuration& config,
                                     double step) {
  std::vector<Configuration> out;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const ParamSpec& spec = space[i];
    switch (spec.kind()) {
      case ParamKind::real:
      case ParamKind::log_real: {
        const double value = config.as_real(i);
        const double unit = to_unit(spec, value);
        for (double sign : {1.0, -1.0}) {
          const double moved = std::clamp(unit + sign * step, 0.0, 1.0);
          if (moved == unit) continue;
          const double next = from_unit(spec, moved);
          if (next == value) continue;
          Configuration c = config;
          c[i] = next;
          out.push_back(std::move(c));
        }
        break;
      }
      case ParamKind::integer: {
        const std::int64_t value = config.as_integer(i);
        const auto lo = static_cast<std::int64_t>(spec.lower());
        const auto hi = static_cast<std::int64_t>(spec.upper());
        const double unit = to_unit(spec, static_cast<double>(value));
        for (int sign : {1, -1}) {
          std::int64_t next = round_to_integer(from_unit(spec, std::clamp(unit + sign * step, 0.0, 1.0)), lo, hi);
          if (next == value) next = std::clamp<std::int64_t>(value + sign, lo, hi);
          if (next == value) continue;
          Configuration c = config;
          c[i] = next;
          out.push_back(std::move(c));
        }
        break;
      }
      case ParamKind::categorical: {
        for (const auto& label : spec.categories()) {
          if (label == config.as_label(i)) continue;
          Configuration c = config;
          c[i] = label;
          out.push_back(std::move(c));
        }
        break;
      }
    }
  }
  return out;
}

Configuration local_search(const Configuration& start, const AcquisitionFn& acquisition,
                           const ConfigSpace& space, int max_steps) {
  Configuration current = start;
  if (max_steps <= 0) return current;
  AcqValue current_value = acquisition(current);
  double step = kInitialStep;
  int moves = 0;
  while (moves < max_steps) {
    std::optional<Configuration> best;
    AcqValue best_value;
    for (auto& candidate : neighbors(space, current, step)) {
      const AcqValue value = acquisition(candidate);
      if (!best || better(value, best_value)) {
        best_value = value;
        best = std::move(candidate);
      }
    }
    if (best && better(best_value, current_value)) {
      current = std::move(*best);
      current_value = best_value;
      ++moves;
    } else if (step > kMinimumStep) {
      step /= 2.0;
    } else {
      break;
    }
  }
  return current;
}

Configuration propose(const AcquisitionScorer& scorer, const ConfigSpace& space,
                      const EncodingLayout& layout, int batch_size, int local_search_starts,
                      int local_search_max_steps, Rng& rng, ProposalStats* stats) {
  const auto batch_start = Clock::now();
  const auto n = static_cast<std::size_t>(std::max(1, batch_size));
  std::vector<Configuration> batch;
  std::vector<ConfigVector> encoded(n, ConfigVector(layout.dims()));
  batch.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    batch.push_back(sample(space, rng));
    encode_into(layout, space, batch.back(), encoded[i]);
  }
  std::vector<AcqValue> values = scorer.score(encoded);
  const double batch_us = micros_since(batch_start);

  const auto ls_start = Clock::now();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t starts = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(0, local_search_starts)));
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (better(values[a], values[b])) return true;
                      if (better(values[b], values[a])) return false;
                      return a < b;
                    });

  const AcquisitionFn acquisition = [&](const Configuration& c) {
    std::vector<ConfigVector> one(1, ConfigVector(layout.dims()));
    encode_into(layout, space, c, one[0]);
    return scorer.score(one).front();
  };
  for (std::size_t s = 0; s < starts; ++s) {
    Configuration endpoint =
        local_search(batch[order[s]], acquisition, space, local_search_max_steps);
    values.push_back(acquisition(endpoint));
    batch.push_back(std::move(endpoint));
  }
  const std::size_t chosen = select_best(values);
  if (stats) {
    stats->batch_us = batch_us;
    stats->local_search_us = micros_since(ls_start);
    stats->chosen_index = chosen;
    stats->chosen_value = values[chosen];
  }
  return batch[chosen];
}

// ---------------------------------------------------------------------------
// Racing

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t k) {
  return derive_seed(master_seed, kRunSeedStream + k);
}

namespace {

// Invokes the objective and records the run; failures are imputed as the
// worst score so far minus one exploration scale.
std::size_t evaluate_and_record(const Configuration& config, std::uint64_t seed,
                                RunHistory& history, const Evaluator& objective, int round) {
  const auto start = Clock::now();
  double score = 0.0;
  bool failed = false;
  try {
    score = objective(config, seed);
    if (!std::isfinite(score)) throw std::runtime_error("objective returned a non-finite score");
  } catch (const std::exception&) {
    failed = true;
    std::vector<double> seen;
    for (const auto& obs : history.observations()) seen.push_back(obs.score);
    score = seen.empty() ? 0.0 : *std::min_element(seen.begin(), seen.end()) - exploration_scale(seen);
  }
  return history.record(config, seed, score, failed, round, micros_since(start));
}

double mean_on(const RunHistory& history, std::size_t entry, std::span<const std::uint64_t> seeds) {
  double total = 0.0;
  for (std::uint64_t s : seeds) total += *history.score_on(entry, s);
  return total / static_cast<double>(seeds.size());
}

}  // namespace

bool intensify(const Configuration& challenger, RunHistory& history, const Evaluator& objective,
               const OptimizerConfig& cfg, std::uint64_t master_seed, int round,
               const ObservationCallback& on_observation) {
  if (!history.has_incumbent()) throw std::logic_error("intensify: no incumbent");
  const auto emit = [&] {
    history.stamp_latest();
    if (on_observation) on_observation(history, history.observations().back());
  };
  const auto max_runs = static_cast<std::size_t>(cfg.max_reruns);
  bool evaluated = false;

  const std::size_t incumbent = history.incumbent_id();
  const auto bonus_run = [&] {
    const std::size_t runs = history.incumbent_runs();
    if (runs >= max_runs || history.exhausted()) return;
    evaluate_and_record(history.incumbent(), run_seed(master_seed, runs), history, objective, round);
    evaluated = true;
    emit();
  };

  const auto existing = history.find(challenger);
  if (existing && *existing == incumbent) {
    bonus_run();
    return evaluated;
  }

  const std::vector<std::uint64_t> incumbent_seeds = history.seeds_of(incumbent);
  const std::size_t target = std::min(max_runs, incumbent_seeds.size());
  std::optional<std::size_t> challenger_id = existing;
  for (std::size_t i = 0; i < target; ++i) {
    const std::uint64_t seed = incumbent_seeds[i];
    const bool ran = challenger_id && history.score_on(*challenger_id, seed).has_value();
    if (!ran) {
      if (history.exhausted()) return evaluated;
      const std::size_t obs = evaluate_and_record(challenger, seed, history, objective, round);
      challenger_id = history.observations()[obs].config_id;
      evaluated = true;
    }
    const std::span<const std::uint64_t> shared(incumbent_seeds.data(), i + 1);
    const double challenger_mean = mean_on(history, *challenger_id, shared);
    const double incumbent_mean = mean_on(history, incumbent, shared);
    const bool last = i + 1 == target;
    if (challenger_mean < incumbent_mean) {
      if (!ran) emit();
      bonus_run();
      return evaluated;
    }
    if (last && challenger_mean > incumbent_mean) {
      history.set_incumbent(*challenger_id);
      if (!ran) emit();
      return evaluated;
    }
    if (!ran) emit();
  }
  bonus_run();
  return evaluated;
}

// ---------------------------------------------------------------------------
// Drivers

namespace {

Configuration fresh_sample(const ConfigSpace& space, const RunHistory& history, Rng& rng,
                           bool* found) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Configuration c = sample(space, rng);
    if (!history.find(c)) {
      *found = true;
      return c;
    }
  }
  *found = false;
  return sample(space, rng);
}

// Picks the best single-run entry; earliest wins ties.
void crown_best(RunHistory& history) {
  const auto& entries = history.entries();
  std::size_t best = 0;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].mean() > entries[best].mean()) best = i;
  }
  history.set_incumbent(best);
}

void evaluate_single(const Configuration& config, RunHistory& history, const Evaluator& objective,
                     std::uint64_t master_seed, int round, const ObservationCallback& cb) {
  evaluate_and_record(config, run_seed(master_seed, 0), history, objective, round);
  crown_best(history);
  history.stamp_latest();
  if (cb) cb(history, history.observations().back());
}

struct Proposal {
  Configuration config;
  RoundTimings timings;
};

std::optional<Proposal> model_proposal(RunHistory& history, const OptimizerConfig& cfg,
                                       std::uint64_t master_seed, int round, Rng& proposal_rng) {
  const auto& entries = history.entries();
  if (entries.size() < 2) return std::nullopt;
  const EncodingLayout& layout = history.layout();
  Dataset data(layout.dims());
  std::vector<ConfigVector> observed;
  std::vector<double> means;
  for (const auto& e : entries) {
    data.add(e.encoded, e.mean());
    observed.push_back(e.encoded);
    means.push_back(e.mean());
  }

  Proposal out;
  ProposalStats stats;
  if (cfg.strategy == Strategy::hyperboost) {
    auto start = Clock::now();
    const GbqrModel model = GbqrModel::fit(data, cfg.gbqr);
    out.timings.fit_us = micros_since(start);
    const HyperboostScorer scorer(model, observed, exploration_scale(means), layout.max_distance(),
                                  cfg.use_pca, cfg.pca_dims, cfg.epsilon);
    out.timings.kd_build_us = scorer.build_us();
    start = Clock::now();
    out.config = propose(scorer, history.space(), layout, cfg.batch_size, cfg.local_search_starts,
                         cfg.local_search_max_steps, proposal_rng, &stats);
    out.timings.acquisition_us = micros_since(start);
    out.timings.kd_query_us = scorer.query_us();
    history.note_delta_clamps(scorer.clamps());
  } else {
    auto start = Clock::now();
    const RfModel model =
        RfModel::fit(data, cfg.rf, derive_seed(master_seed, kModelStream + static_cast<std::uint64_t>(round)));
    out.timings.fit_us = micros_since(start);
    const EiScorer scorer(model, *std::max_element(means.begin(), means.end()));
    start = Clock::now();
    out.config = propose(scorer, history.space(), layout, cfg.batch_size, cfg.local_search_starts,
                         cfg.local_search_max_steps, proposal_rng, &stats);
    out.timings.acquisition_us = micros_since(start);
  }
  return out;
}

RunHistory smbo_loop(const Evaluator& objective, const ConfigSpace& space, const OptimizerConfig& cfg,
                     std::uint64_t master_seed, const ObservationCallback& cb) {
  check_config(cfg);
  if (cfg.budget < cfg.init_samples) {
    throw std::invalid_argument("optimizer: budget must cover the initial samples");
  }
  RunHistory history(space, cfg.budget);
  Rng sampling_rng = make_rng(derive_seed(master_seed, kSamplingStream));
  Rng proposal_rng = make_rng(derive_seed(master_seed, kProposalStream));

  for (int i = 0; i < cfg.init_samples && !history.exhausted(); ++i) {
    bool found = false;
    const Configuration c = fresh_sample(space, history, sampling_rng, &found);
    if (!found) break;
    evaluate_single(c, history, objective, master_seed, 0, cb);
  }
  if (cfg.include_default && !history.exhausted()) {
    const Configuration d = default_config(space);
    if (!history.find(d)) evaluate_single(d, history, objective, master_seed, 0, cb);
  }

  int round = 0;
  while (!history.exhausted()) {
    ++round;
    RoundTimings timings;
    std::optional<Configuration> challenger;
    if (cfg.strategy == Strategy::hyperboost || cfg.strategy == Strategy::smac_rf) {
      if (auto p = model_proposal(history, cfg, master_seed, round, proposal_rng)) {
        challenger = std::move(p->config);
        timings = p->timings;
      }
    }
    if (!challenger) challenger = sample(space, sampling_rng);

    history.begin_round(timings);
    bool evaluated = false;
    if (cfg.racing) {
      evaluated = intensify(*challenger, history, objective, cfg, master_seed, round, cb);
    } else if (!history.find(*challenger)) {
      evaluate_single(*challenger, history, objective, master_seed, round, cb);
      evaluated = true;
    }
    if (!evaluated) {
      // Nothing left to learn from this proposal; spend the round on a new
      // random configuration instead.
      bool found = false;
      const Configuration c = fresh_sample(space, history, sampling_rng, &found);
      if (!found) break;
      if (cfg.racing) {
        evaluated = intensify(c, history, objective, cfg, master_seed, round, cb);
      } else {
        evaluate_single(c, history, objective, master_seed, round, cb);
        evaluated = true;
      }
      if (!evaluated) break;
    }
  }
  return history;
}

}  // namespace

RunHistory run(const Evaluator& objective, const ConfigSpace& space, const OptimizerConfig& cfg,
               std::uint64_t master_seed, const ObservationCallback& on_observation) {
  if (cfg.strategy == Strategy::random) {
    return random_search(objective, space, cfg, master_seed, on_observation);
  }
  return smbo_loop(objective, space, cfg, master_seed, on_observation);
}

RunHistory roar(const Evaluator& objective, const ConfigSpace& space, OptimizerConfig cfg,
                std::uint64_t master_seed, const ObservationCallback& on_observation) {
  cfg.strategy = Strategy::roar;
  return smbo_loop(objective, space, cfg, master_seed, on_observation);
}

RunHistory random_search(const Evaluator& objective, const ConfigSpace& space,
                         const OptimizerConfig& cfg, std::uint64_t master_seed,
                         const ObservationCallback& on_observation) {
  check_config(cfg);
  RunHistory history(space, cfg.budget);
  Rng sampling_rng = make_rng(derive_seed(master_seed, kSamplingStream));
  int round = 0;
  while (!history.exhausted()) {
    bool found = false;
    const Configuration c = fresh_sample(space, history, sampling_rng, &found);
    if (!found) break;
    evaluate_single(c, history, objective, master_seed, round++, on_observation);
  }
  return history;
}

}  // namespace qboost

#include "commands.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>

#include <CLI11.hpp>

#include "qboost/acquisition.hpp"
#include "qboost/neighbors.hpp"
#include "qboost/parallel.hpp"
#include "qboost/projection.hpp"
#include "qboost/random.hpp"
#include "qboost/serialization.hpp"
#include "ranking.hpp"
#include "records.hpp"

namespace qboost::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point start) {
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

bool multiplied(Strategy s) { return s == Strategy::random || s == Strategy::roar; }

std::string strategy_label(Strategy s, double multiplier) {
  std::string label(to_string(s));
  if (multiplied(s) && multiplier != 1.0) {
    std::ostringstream os;
    os << label << "_x" << multiplier;
    label = os.str();
  }
  return label;
}

int scaled_budget(int budget, double multiplier) {
  return std::max(1, static_cast<int>(std::lround(budget * multiplier)));
}

void check_run_options(const RunOptions& opts) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(opts.budget >= 1, "--budget must be at least 1");
  require(opts.reps >= 1, "--reps must be at least 1");
  require(opts.budget_multiplier > 0.0, "--budget-multiplier must be positive");
  require(opts.max_reruns >= 1, "--max-reruns must be at least 1");
  require(opts.batch_size >= 1, "--batch-size must be at least 1");
  require(opts.quantile > 0.0 && opts.quantile < 1.0, "--quantile must lie in (0, 1)");
  require(opts.pca_dims >= 1, "--pca-dims must be at least 1");
  require(opts.epsilon >= 0.0, "--epsilon must be non-negative");
  require(opts.noise_sd >= 0.0, "--noise-sd must be non-negative");
  require(opts.local_search_starts >= 0, "--local-search-starts must be non-negative");
  require(!opts.strategies.empty(), "--strategy is required");
  require(!opts.objectives.empty(), "--objective is required");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "";
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

void open_csv(std::ofstream& file, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  file.open(path, std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
}

// step,<s1>,<s1>_sd,<s2>,<s2>_sd,...
void write_curve_table(const fs::path& path, const std::vector<std::string>& strategies, int steps,
                       const std::vector<std::vector<double>>& mean,
                       const std::vector<std::vector<double>>& sd) {
  std::ofstream file;
  open_csv(file, path);
  file << "step";
  for (const auto& s : strategies) file << ',' << s << ',' << s << "_sd";
  file << '\n';
  for (int t = 0; t < steps; ++t) {
    file << t + 1;
    for (std::size_t s = 0; s < strategies.size(); ++s) {
      file << ',' << format_number(mean[s][t]) << ',' << format_number(sd[s][t]);
    }
    file << '\n';
  }
}

void write_timing_rows(std::ostream& file, const std::vector<TimingRow>& rows) {
  for (const auto& r : rows) {
    file << r.study << ',' << r.model << ',' << r.dims << ',' << (r.pca ? 1 : 0) << ','
         << r.iteration << ',' << r.observed << ',' << r.component << ','
         << format_number(r.micros) << '\n';
  }
}

}  // namespace

SyntheticObjective resolve_objective(const std::string& name_or_path, double noise_sd) {
  std::error_code ec;
  if (fs::is_regular_file(name_or_path, ec)) {
    return space_default_objective(fs::path(name_or_path).stem().string(),
                                   load_space_file(name_or_path), noise_sd);
  }
  return make_objective(name_or_path, noise_sd);
}

OptimizerConfig optimizer_config(const RunOptions& opts, Strategy strategy) {
  OptimizerConfig cfg;
  cfg.strategy = strategy;
  cfg.budget = opts.budget;
  cfg.batch_size = opts.batch_size;
  cfg.local_search_starts = opts.local_search_starts;
  cfg.max_reruns = opts.max_reruns;
  cfg.use_pca = opts.use_pca;
  cfg.pca_dims = opts.pca_dims;
  cfg.epsilon = opts.epsilon;
  cfg.gbqr.quantile = opts.quantile;
  return cfg;
}

RunHistory run_strategy(const SyntheticObjective& objective, const OptimizerConfig& cfg,
                        std::uint64_t master_seed, const ObservationCallback& on_observation) {
  return run(objective.evaluator(), objective.space(), cfg, master_seed, on_observation);
}

// ---------------------------------------------------------------------------
// optimize

int cmd_optimize(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  check_run_options(opts);
  if (opts.strategies.size() != 1) throw std::invalid_argument("optimize takes one --strategy");
  if (opts.objectives.size() != 1) throw std::invalid_argument("optimize takes one --objective");
  const Strategy strategy = strategy_from_string(opts.strategies.front());
  const SyntheticObjective objective = resolve_objective(opts.objectives.front(), opts.noise_sd);
  OptimizerConfig cfg = optimizer_config(opts, strategy);
  cfg.budget = scaled_budget(opts.budget, opts.budget_multiplier);
  check_config(cfg);

  RunMeta meta{opts.experiment, strategy_label(strategy, opts.budget_multiplier), opts.seed,
               opts.budget_multiplier};
  std::optional<RecordWriter> writer;
  if (!opts.out.empty()) {
    writer.emplace(opts.out);
    writer->write(header_record(meta, objective, cfg));
  }
  const RunHistory history =
      run_strategy(objective, cfg, opts.seed, [&](const RunHistory& h, const Observation& obs) {
        if (writer) writer->write(eval_record(meta, objective, h, obs));
      });

  if (!history.has_incumbent()) {
    err << "no configuration was evaluated\n";
    return 1;
  }
  out << "incumbent " << config_to_json(history.space(), history.incumbent()).dump()
      << " score " << format_number(history.incumbent_score()) << " true "
      << format_number(objective.response(history.incumbent())) << " evaluations "
      << history.budget_used() << " failures " << history.failures() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// compare

int cmd_compare(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  check_run_options(opts);
  if (opts.strategies.size() < 2) throw std::invalid_argument("compare needs at least two strategies");
  if (opts.out.empty()) throw std::invalid_argument("compare needs --out <directory>");

  std::vector<Strategy> strategies;
  std::vector<std::string> labels;
  for (const auto& s : opts.strategies) {
    strategies.push_back(strategy_from_string(s));
    labels.push_back(strategy_label(strategies.back(), opts.budget_multiplier));
  }
  std::vector<SyntheticObjective> objectives;
  for (const auto& name : opts.objectives) objectives.push_back(resolve_objective(name, opts.noise_sd));

  struct Task {
    std::size_t strategy;
    std::size_t objective;
    int rep;
  };
  std::vector<Task> tasks;
  for (std::size_t o = 0; o < objectives.size(); ++o) {
    for (int r = 0; r < opts.reps; ++r) {
      for (std::size_t s = 0; s < strategies.size(); ++s) tasks.push_back({s, o, r});
    }
  }

  const fs::path root(opts.out);
  fs::create_directories(root / "records");
  std::vector<Curve> curves(tasks.size());
  std::vector<std::string> failures(tasks.size());

  parallel_chunks(tasks.size(), 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Task& task = tasks[i];
      const Strategy strategy = strategies[task.strategy];
      const SyntheticObjective& objective = objectives[task.objective];
      const double multiplier = multiplied(strategy) ? opts.budget_multiplier : 1.0;
      const std::uint64_t master = opts.seed + static_cast<std::uint64_t>(task.rep);
      try {
        OptimizerConfig cfg = optimizer_config(opts, strategy);
        cfg.budget = scaled_budget(opts.budget, multiplier);
        RunMeta meta{opts.experiment, labels[task.strategy], master, multiplier};
        RecordWriter writer((root / "records" /
                             (objective.name() + "__" + meta.strategy + "__rep" +
                              std::to_string(task.rep) + ".jsonl"))
                                .string());
        writer.write(header_record(meta, objective, cfg));
        std::vector<json> evals;
        run_strategy(objective, cfg, master, [&](const RunHistory& h, const Observation& obs) {
          evals.push_back(eval_record(meta, objective, h, obs));
          writer.write(evals.back());
        });
        curves[i] = Curve{meta.strategy, objective.name(), task.rep,
                          incumbent_curve(evals, multiplier, opts.budget)};
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  });

  std::vector<Curve> done;
  int failed = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!failures[i].empty()) {
      ++failed;
      err << "run failed: " << objectives[tasks[i].objective].name() << ' '
          << labels[tasks[i].strategy] << " rep " << tasks[i].rep << ": " << failures[i] << '\n';
    } else {
      done.push_back(std::move(curves[i]));
    }
  }

  const RankReport report = rank_report(done, labels);
  write_curve_table(root / "ranks.csv", labels, report.steps, report.mean_rank, report.rank_sd);
  write_curve_table(root / "scores.csv", labels, report.steps, report.mean_score, report.score_sd);
  for (const auto& cell : report.missing) err << "missing cell " << cell << '\n';

  out << "compare: " << done.size() << " runs, ranks at step " << report.steps << ':';
  for (std::size_t s = 0; s < labels.size() && report.steps > 0; ++s) {
    out << ' ' << labels[s] << '=' << format_number(report.mean_rank[s][report.steps - 1]);
  }
  out << '\n';
  return failed == 0 && report.missing.empty() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// overhead

std::vector<TimingRow> surrogate_overhead(const std::string& model, int dims, int iterations,
                                          int batch_size, std::uint64_t seed,
                                          std::vector<Configuration>* evaluated) {
  if (model != "gbqr" && model != "rf") throw std::invalid_argument("unknown surrogate '" + model + "'");
  if (dims < 1 || iterations < 0 || batch_size < 1) {
    throw std::invalid_argument("surrogate_overhead: bad sizes");
  }
  const SyntheticObjective objective = bump_objective(static_cast<std::size_t>(dims), 0.0);
  const ConfigSpace& space = objective.space();
  const EncodingLayout& layout = objective.layout();
  Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(dims)));

  Dataset data(layout.dims());
  auto observe = [&](const Configuration& c) {
    data.add(encode(layout, space, c), objective.evaluate(c, run_seed(seed, 0)));
    if (evaluated) evaluated->push_back(c);
  };
  // two random points so the first fit has something to split
  observe(sample(space, rng));
  observe(sample(space, rng));

  std::vector<TimingRow> rows;
  std::vector<Configuration> batch(static_cast<std::size_t>(batch_size));
  std::vector<ConfigVector> encoded(batch.size());
  for (int it = 1; it <= iterations; ++it) {
    for (std::size_t i = 0; i < batch.size(); ++i) {
      batch[i] = sample(space, rng);
      encoded[i] = encode(layout, space, batch[i]);
    }
    std::vector<double> value(batch.size());
    double fit_us = 0.0;
    double predict_us = 0.0;
    if (model == "gbqr") {
      auto t0 = Clock::now();
      const GbqrModel m = GbqrModel::fit(data, GbqrParams{});
      fit_us = micros_since(t0);
      t0 = Clock::now();
      value = m.predict_batch(encoded);
      predict_us = micros_since(t0);
    } else {
      auto t0 = Clock::now();
      const RfModel m = RfModel::fit(data, RfParams{}, derive_seed(seed, 3 + static_cast<std::uint64_t>(it)));
      fit_us = micros_since(t0);
      const double f_best = *std::max_element(data.targets().begin(), data.targets().end());
      t0 = Clock::now();
      const auto mv = m.predict_batch(encoded);
      for (std::size_t i = 0; i < mv.size(); ++i) {
        value[i] = expected_improvement(mv[i].mean, std::sqrt(mv[i].variance), f_best);
      }
      predict_us = micros_since(t0);
    }
    const auto best = static_cast<std::size_t>(
        std::max_element(value.begin(), value.end()) - value.begin());
    const int observed = static_cast<int>(data.size());
    rows.push_back({"surrogate", model, dims, false, it, observed, "fit", fit_us});
    rows.push_back({"surrogate", model, dims, false, it, observed, "predict", predict_us});
    observe(batch[best]);
  }
  return rows;
}

std::vector<TimingRow> kd_overhead(int dims, bool use_pca, int pca_dims, int iterations,
                                   int batch_size, std::uint64_t seed) {
  if (dims < 1 || iterations < 0 || batch_size < 1 || pca_dims < 1) {
    throw std::invalid_argument("kd_overhead: bad sizes");
  }
  if (use_pca && pca_dims > dims) throw std::invalid_argument("kd_overhead: pca_dims exceeds dims");
  Rng rng = make_rng(derive_seed(seed, 100 + static_cast<std::uint64_t>(dims)));
  auto uniform_point = [&] {
    std::vector<double> p(static_cast<std::size_t>(dims));
    for (double& x : p) x = uniform01(rng);
    return p;
  };
  // pca_dims + 1 points after the first addition, enough for a projection
  std::vector<std::vector<double>> observed;
  for (int i = 0; i < pca_dims; ++i) observed.push_back(uniform_point());
  std::vector<std::vector<double>> batch(static_cast<std::size_t>(batch_size));
  const std::string model = use_pca ? "kd_pca" : "kd";

  std::vector<TimingRow> rows;
  double sink = 0.0;
  for (int it = 1; it <= iterations; ++it) {
    observed.push_back(uniform_point());
    for (auto& q : batch) q = uniform_point();
    const int n = static_cast<int>(observed.size());

    std::optional<PcaMap> pca;
    std::vector<std::vector<double>> indexed;
    if (use_pca) {
      const auto t0 = Clock::now();
      pca = PcaMap::fit(observed, static_cast<std::size_t>(pca_dims));
      indexed.reserve(observed.size());
      for (const auto& p : observed) indexed.push_back(pca->project(p));
      rows.push_back({"kd", model, dims, true, it, n, "pca_fit", micros_since(t0)});
    }
    auto t0 = Clock::now();
    const KdIndex index(use_pca ? indexed : observed);
    rows.push_back({"kd", model, dims, use_pca, it, n, "kd_build", micros_since(t0)});

    t0 = Clock::now();
    for (const auto& q : batch) {
      sink += use_pca ? index.nearest(pca->project(q)).distance : index.nearest(q).distance;
    }
    rows.push_back({"kd", model, dims, use_pca, it, n, "kd_query", micros_since(t0)});
  }
  volatile double keep = sink;  // keeps the queries from being optimized away
  (void)keep;
  return rows;
}

int cmd_overhead(const OverheadOptions& opts, std::ostream& out, std::ostream& err) {
  (void)err;
  if (opts.study != "all" && opts.study != "surrogate" && opts.study != "kd") {
    throw std::invalid_argument("--study must be surrogate, kd or all");
  }
  if (opts.iterations < 1) throw std::invalid_argument("--iterations must be at least 1");
  if (opts.batch_size < 1) throw std::invalid_argument("--batch-size must be at least 1");
  if (opts.pca_dims < 1) throw std::invalid_argument("--pca-dims must be at least 1");
  for (int d : opts.dims) if (d < 1) throw std::invalid_argument("--dims entries must be positive");
  for (int d : opts.kd_dims) if (d < 1) throw std::invalid_argument("--kd-dims entries must be positive");

  std::ofstream file;
  open_csv(file, opts.out);
  file << "study,model,dims,pca,iteration,observed,component,microseconds\n";
  std::size_t rows = 0;
  if (opts.study != "kd") {
    for (const char* model : {"gbqr", "rf"}) {
      for (int d : opts.dims) {
        const auto r = surrogate_overhead(model, d, opts.iterations, opts.batch_size, opts.seed);
        write_timing_rows(file, r);
        rows += r.size();
      }
    }
  }
  if (opts.study != "surrogate") {
    for (int d : opts.kd_dims) {
      for (bool pca : {false, true}) {
        if (pca && opts.pca_dims >= d) continue;  // nothing to project away
        const auto r = kd_overhead(d, pca, opts.pca_dims, opts.iterations, opts.batch_size, opts.seed);
        write_timing_rows(file, r);
        rows += r.size();
      }
    }
  }
  out << "overhead: " << rows << " rows written to " << opts.out << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// report

int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err) {
  struct Run {
    std::string strategy;
    std::string objective;
    std::uint64_t seed;
    std::vector<double> curve;
    std::vector<json> evals;
  };
  std::vector<Run> runs;
  int skipped = 0;
  for (const auto& path : opts.inputs) {
    RecordFile file;
    try {
      file = read_records(path);
    } catch (const SchemaError& e) {
      err << "error: " << e.what() << '\n';
      return 2;
    }
    skipped += file.skipped;
    if (file.evals.empty()) continue;
    Run r;
    r.strategy = file.header.value("strategy", std::string("unknown"));
    r.objective = file.header.contains("objective")
                      ? file.header["objective"].value("name", std::string("unknown"))
                      : std::string("unknown");
    r.seed = file.header.value("master_seed", std::uint64_t{0});
    const double multiplier = file.header.value("budget_multiplier", 1.0);
    const int steps = static_cast<int>(
        std::floor(static_cast<double>(file.evals.size()) / multiplier + 1e-9));
    r.curve = incumbent_curve(file.evals, multiplier, std::max(steps, 1));
    r.evals = std::move(file.evals);
    runs.push_back(std::move(r));
  }
  if (skipped > 0) err << "warning: skipped " << skipped << " unreadable record lines\n";

  std::vector<std::string> strategies = opts.strategies;
  for (const auto& r : runs) {
    if (std::find(strategies.begin(), strategies.end(), r.strategy) == strategies.end()) {
      strategies.push_back(r.strategy);
    }
  }
  // strategies named on the command line but absent from the input get no column
  std::erase_if(strategies, [&](const std::string& s) {
    return std::none_of(runs.begin(), runs.end(), [&](const Run& r) { return r.strategy == s; });
  });

  const fs::path root(opts.out);
  if (runs.empty()) {
    err << "warning: no evaluation records found\n";
    write_curve_table(root / "mean_score.csv", {}, 0, {}, {});
    write_curve_table(root / "ranks.csv", {}, 0, {}, {});
    std::ofstream timing;
    open_csv(timing, root / "timings.csv");
    timing << "iteration,strategy,fit_us,acquisition_us,kd_build_us,kd_query_us,objective_us\n";
    out << "report: empty input\n";
    return 0;
  }

  std::vector<Curve> curves;
  for (const auto& r : runs) {
    curves.push_back(Curve{r.strategy, r.objective, static_cast<int>(r.seed), r.curve});
  }
  const RankReport ranks = rank_report(curves, strategies);
  write_curve_table(root / "ranks.csv", strategies, ranks.steps, ranks.mean_rank, ranks.rank_sd);

  // mean incumbent curve per strategy over every run, rank-independent
  std::size_t steps = runs.front().curve.size();
  for (const auto& r : runs) steps = std::min(steps, r.curve.size());
  std::vector<std::vector<double>> mean(strategies.size(), std::vector<double>(steps, 0.0));
  std::vector<std::vector<double>> sd = mean;
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    std::vector<const Run*> mine;
    for (const auto& r : runs) {
      if (r.strategy == strategies[s]) mine.push_back(&r);
    }
    for (std::size_t t = 0; t < steps; ++t) {
      double sum = 0.0;
      for (const Run* r : mine) sum += r->curve[t];
      const double m = sum / static_cast<double>(mine.size());
      double ss = 0.0;
      for (const Run* r : mine) ss += (r->curve[t] - m) * (r->curve[t] - m);
      mean[s][t] = m;
      sd[s][t] = std::sqrt(ss / static_cast<double>(mine.size()));
    }
  }
  write_curve_table(root / "mean_score.csv", strategies, static_cast<int>(steps), mean, sd);

  std::ofstream timing;
  open_csv(timing, root / "timings.csv");
  timing << "iteration,strategy,fit_us,acquisition_us,kd_build_us,kd_query_us,objective_us\n";
  static const char* kComponents[] = {"fit", "acquisition", "kd_build", "kd_query", "objective"};
  for (const auto& strategy : strategies) {
    std::map<int, std::pair<std::array<double, 5>, int>> by_iteration;
    for (const auto& r : runs) {
      if (r.strategy != strategy) continue;
      for (const auto& e : r.evals) {
        auto& [sums, count] = by_iteration[e.value("iteration", 0)];
        if (count == 0) sums.fill(0.0);
        ++count;
        if (!e.contains("timings_us")) continue;
        for (std::size_t c = 0; c < 5; ++c) sums[c] += e["timings_us"].value(kComponents[c], 0.0);
      }
    }
    for (const auto& [iteration, acc] : by_iteration) {
      timing << iteration << ',' << strategy;
      for (double v : acc.first) timing << ',' << format_number(v / acc.second);
      timing << '\n';
    }
  }
  out << "report: " << runs.size() << " runs, " << strategies.size() << " strategies, " << steps
      << " steps\n";
  return 0;
}

// ---------------------------------------------------------------------------
// argument parsing

namespace {

void add_run_flags(CLI::App* sub, RunOptions& opts) {
  sub->add_option("--strategy", opts.strategies, "hyperboost, smac_rf, roar or random")
      ->delimiter(',');
  sub->add_option("--objective", opts.objectives, "built-in objective name or space file")
      ->delimiter(',');
  sub->add_option("--budget", opts.budget, "objective invocations per run");
  sub->add_option("--seed", opts.seed, "master seed");
  sub->add_option("--reps", opts.reps, "repetitions per strategy and objective");
  sub->add_option("--budget-multiplier", opts.budget_multiplier,
                  "budget factor for random and roar");
  sub->add_option("--max-reruns", opts.max_reruns, "runs per configuration cap");
  sub->add_option("--batch-size", opts.batch_size, "random candidates per proposal");
  sub->add_option("--quantile", opts.quantile, "GBQR quantile");
  sub->add_flag("--use-pca", opts.use_pca, "measure sparsity in a PCA projection");
  sub->add_option("--pca-dims", opts.pca_dims, "PCA target dimensions");
  sub->add_option("--epsilon", opts.epsilon, "approximate nearest-neighbor slack");
  sub->add_option("--noise-sd", opts.noise_sd, "objective noise standard deviation");
  sub->add_option("--local-search-starts", opts.local_search_starts,
                  "local searches per proposal");
  sub->add_option("--experiment", opts.experiment, "experiment id stored in records");
  sub->add_option("--out", opts.out, "record file (optimize) or output directory (compare)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantile-boosted hyperparameter optimization experiments", "qboost"};
  app.require_subcommand(1);

  RunOptions optimize_opts;
  auto* optimize = app.add_subcommand("optimize", "run one strategy on one objective");
  add_run_flags(optimize, optimize_opts);

  RunOptions compare_opts;
  compare_opts.strategies = {"hyperboost", "smac_rf", "random"};
  auto* compare = app.add_subcommand("compare", "rank strategies across objectives and repetitions");
  add_run_flags(compare, compare_opts);

  OverheadOptions overhead_opts;
  auto* overhead = app.add_subcommand("overhead", "time surrogate fits and nearest-neighbor queries");
  overhead->add_option("--study", overhead_opts.study, "surrogate, kd or all");
  overhead->add_option("--iterations,--budget", overhead_opts.iterations, "iterations per series");
  overhead->add_option("--dims", overhead_opts.dims, "surrogate study dimensions")->delimiter(',');
  overhead->add_option("--kd-dims", overhead_opts.kd_dims, "nearest-neighbor study dimensions")
      ->delimiter(',');
  overhead->add_option("--batch-size", overhead_opts.batch_size, "candidates per iteration");
  overhead->add_option("--pca-dims", overhead_opts.pca_dims, "PCA target dimensions");
  overhead->add_option("--seed", overhead_opts.seed, "master seed");
  overhead->add_option("--out", overhead_opts.out, "CSV output path");

  ReportOptions report_opts;
  auto* report = app.add_subcommand("report", "aggregate record files into CSV tables");
  report->add_option("inputs", report_opts.inputs, "record files");
  report->add_option("--strategy", report_opts.strategies, "column order")->delimiter(',');
  report->add_option("--out", report_opts.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    if (active == optimize) return cmd_optimize(optimize_opts, out, err);
    if (active == compare) return cmd_compare(compare_opts, out, err);
    if (active == overhead) return cmd_overhead(overhead_opts, out, err);
    return cmd_report(report_opts, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qboost::cli

#include "ranking.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace qboost::cli {

std::vector<double> average_ranks(std::span<const double> scores) {
  const std::size_t k = scores.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<double> ranks(k, 0.0);
  std::size_t i = 0;
  while (i < k) {
    std::size_t j = i;
    while (j + 1 < k && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
    i = j + 1;
  }
  return ranks;
}

namespace {

void mean_sd(const std::vector<double>& xs, double& mean, double& sd) {
  if (xs.empty()) {
    mean = std::nan("");
    sd = std::nan("");
    return;
  }
  const double n = static_cast<double>(xs.size());
  mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / n);
}

}  // namespace

RankReport rank_report(const std::vector<Curve>& curves,
                       const std::vector<std::string>& strategies) {
  if (strategies.empty()) throw std::invalid_argument("rank_report: no strategies");
  RankReport report;
  report.strategies = strategies;
  const std::size_t k = strategies.size();

  std::map<std::string, std::size_t> strategy_index;
  for (std::size_t s = 0; s < k; ++s) strategy_index[strategies[s]] = s;

  // (repetition, objective) -> per-strategy curve
  std::map<int, std::map<std::string, std::vector<const Curve*>>> cells;
  std::vector<std::string> objectives;
  for (const auto& c : curves) {
    const auto it = strategy_index.find(c.strategy);
    if (it == strategy_index.end()) continue;
    if (std::find(objectives.begin(), objectives.end(), c.objective) == objectives.end()) {
      objectives.push_back(c.objective);
    }
    auto& slot = cells[c.repetition][c.objective];
    slot.resize(k, nullptr);
    slot[it->second] = &c;
  }
  report.objectives = objectives;
  report.repetitions = static_cast<int>(cells.size());

  std::size_t steps = 0;
  bool first = true;
  for (const auto& c : curves) {
    if (!strategy_index.contains(c.strategy)) continue;
    steps = first ? c.values.size() : std::min(steps, c.values.size());
    first = false;
  }
  report.steps = static_cast<int>(steps);

  // per repetition: [strategy][step] averaged over complete objectives
  std::vector<std::vector<std::vector<double>>> rep_rank;
  std::vector<std::vector<std::vector<double>>> rep_score;
  for (const auto& [rep, by_objective] : cells) {
    std::vector<std::vector<double>> rank_sum(k, std::vector<double>(steps, 0.0));
    std::vector<std::vector<double>> score_sum(k, std::vector<double>(steps, 0.0));
    int complete = 0;
    for (const auto& objective : objectives) {
      const auto it = by_objective.find(objective);
      const bool present =
          it != by_objective.end() &&
          std::all_of(it->second.begin(), it->second.end(), [](const Curve* c) { return c; });
      if (!present) {
        report.missing.push_back(objective + "/" + std::to_string(rep));
        continue;
      }
      ++complete;
      std::vector<double> scores(k);
      for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t s = 0; s < k; ++s) scores[s] = it->second[s]->values[t];
        const auto ranks = average_ranks(scores);
        for (std::size_t s = 0; s < k; ++s) {
          rank_sum[s][t] += ranks[s];
          score_sum[s][t] += scores[s];
        }
      }
    }
    if (complete == 0) continue;
    for (std::size_t s = 0; s < k; ++s) {
      for (std::size_t t = 0; t < steps; ++t) {
        rank_sum[s][t] /= complete;
        score_sum[s][t] /= complete;
      }
    }
    rep_rank.push_back(std::move(rank_sum));
    rep_score.push_back(std::move(score_sum));
  }

  report.mean_rank.assign(k, std::vector<double>(steps));
  report.rank_sd = report.mean_rank;
  report.mean_score = report.mean_rank;
  report.score_sd = report.mean_rank;
  std::vector<double> ranks_at;
  std::vector<double> scores_at;
  for (std::size_t s = 0; s < k; ++s) {
    for (std::size_t t = 0; t < steps; ++t) {
      ranks_at.clear();
      scores_at.clear();
      for (std::size_t r = 0; r < rep_rank.size(); ++r) {
        ranks_at.push_back(rep_rank[r][s][t]);
        scores_at.push_back(rep_score[r][s][t]);
      }
      mean_sd(ranks_at, report.mean_rank[s][t], report.rank_sd[s][t]);
      mean_sd(scores_at, report.mean_score[s][t], report.score_sd[s][t]);
    }
  }
  return report;
}

}  // namespace qboost::cli

#pragma once

#include <span>
#include <string>
#include <vector>

namespace qboost::cli {

/// Ranks for higher-is-better scores: 1 is best, ties share the average of
/// the positions they span, so ranks always sum to k(k+1)/2.
std::vector<double> average_ranks(std::span<const double> scores);

/// Incumbent score after each step of one run.
struct Curve {
  std::string strategy;
  std::string objective;
  int repetition = 0;
  std::vector<double> values;
};

struct RankReport {
  std::vector<std::string> strategies;
  std::vector<std::string> objectives;
  int repetitions = 0;
  int steps = 0;
  // [strategy][step]
  std::vector<std::vector<double>> mean_rank;
  std::vector<std::vector<double>> rank_sd;
  std::vector<std::vector<double>> mean_score;
  std::vector<std::vector<double>> score_sd;
  // "objective/rep" cells where some strategy had no curve
  std::vector<std::string> missing;
};

/// Per step: rank strategies on each objective, average the ranks over
/// objectives, then take mean and population SD over repetitions. Curves are
/// truncated to the shortest one. Incomplete (objective, repetition) cells
/// are left out and listed in `missing`.
RankReport rank_report(const std::vector<Curve>& curves, const std::vector<std::string>& strategies);

}  // namespace qboost::cli

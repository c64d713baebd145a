#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "cli/ranking.hpp"
#include "qboost/random.hpp"

namespace qboost::cli {
namespace {

// rank_i = 1 + (# strictly better) + (# other tied) / 2
std::vector<double> counting_ranks(const std::vector<double>& s) {
  std::vector<double> r(s.size(), 1.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i == j) continue;
      if (s[j] > s[i]) r[i] += 1.0;
      else if (s[j] == s[i]) r[i] += 0.5;
    }
  }
  return r;
}

TEST(AverageRanks, DominanceAndTies) {
  EXPECT_EQ(average_ranks(std::vector<double>{2.0, 1.0}), (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(average_ranks(std::vector<double>{1.0, 1.0}), (std::vector<double>{1.5, 1.5}));
  EXPECT_EQ(average_ranks(std::vector<double>{3.0, 5.0, 3.0, 1.0}),
            (std::vector<double>{2.5, 1.0, 2.5, 4.0}));
}

TEST(AverageRanks, MatchesCountingOracle) {
  Rng rng = make_rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + uniform_index(rng, 6);
    std::vector<double> s(k);
    for (double& x : s) x = static_cast<double>(uniform_index(rng, 4));  // ties are common
    const auto got = average_ranks(s);
    EXPECT_EQ(got, counting_ranks(s));
    double sum = 0.0;
    for (double r : got) sum += r;
    EXPECT_EQ(sum, static_cast<double>(k * (k + 1)) / 2.0);
  }
}

TEST(RankReport, StrictlyBetterStrategyRanksFirst) {
  const std::vector<Curve> curves{{"a", "f", 0, {1, 2, 3}}, {"b", "f", 0, {0, 1, 2}}};
  const auto r = rank_report(curves, {"a", "b"});
  for (int t = 0; t < 3; ++t) {
    EXPECT_EQ(r.mean_rank[0][t], 1.0);
    EXPECT_EQ(r.mean_rank[1][t], 2.0);
  }
}

TEST(RankReport, IdenticalCurvesShareRank) {
  const std::vector<Curve> curves{{"a", "f", 0, {1, 2}}, {"b", "f", 0, {1, 2}}};
  const auto r = rank_report(curves, {"a", "b"});
  EXPECT_EQ(r.mean_rank[0][1], 1.5);
  EXPECT_EQ(r.mean_rank[1][1], 1.5);
}

TEST(RankReport, HandComputedTable) {
  // f:  A 1 2 3 | B 1 3 3 | C 0 1 4  -> ranks (1.5,1.5,3) (2,1,3) (2.5,2.5,1)
  // g:  A 5 5 5 | B 4 4 4 | C 6 6 6  -> ranks (2,3,1) at every step
  const std::vector<Curve> curves{{"A", "f", 0, {1, 2, 3}}, {"B", "f", 0, {1, 3, 3}},
                                  {"C", "f", 0, {0, 1, 4}}, {"A", "g", 0, {5, 5, 5}},
                                  {"B", "g", 0, {4, 4, 4}}, {"C", "g", 0, {6, 6, 6}}};
  const auto r = rank_report(curves, {"A", "B", "C"});
  const double want[3][3] = {{1.75, 2.0, 2.25}, {2.25, 2.0, 2.75}, {2.0, 2.0, 1.0}};
  for (int s = 0; s < 3; ++s) {
    for (int t = 0; t < 3; ++t) EXPECT_DOUBLE_EQ(r.mean_rank[s][t], want[s][t]) << s << ' ' << t;
  }
  EXPECT_DOUBLE_EQ(r.mean_score[0][0], 3.0);
  EXPECT_TRUE(r.missing.empty());
}

TEST(RankReport, RepetitionSpread) {
  // rep 0: a wins, rep 1: b wins -> mean 1.5, population SD 0.5
  const std::vector<Curve> curves{{"a", "f", 0, {2}}, {"b", "f", 0, {1}},
                                  {"a", "f", 1, {1}}, {"b", "f", 1, {2}}};
  const auto r = rank_report(curves, {"a", "b"});
  EXPECT_EQ(r.repetitions, 2);
  EXPECT_EQ(r.mean_rank[0][0], 1.5);
  EXPECT_EQ(r.rank_sd[0][0], 0.5);
}

TEST(RankReport, MissingCellsReported) {
  const std::vector<Curve> curves{{"a", "f", 0, {2}}, {"b", "f", 0, {1}}, {"a", "g", 0, {1}}};
  const auto r = rank_report(curves, {"a", "b"});
  ASSERT_EQ(r.missing.size(), 1u);
  EXPECT_EQ(r.missing[0], "g/0");
  EXPECT_EQ(r.mean_rank[0][0], 1.0);
}

TEST(RankReport, MatchesBruteForceOnRandomCurves) {
  Rng rng = make_rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(uniform_index(rng, 3));
    const int objectives = 1 + static_cast<int>(uniform_index(rng, 3));
    const int reps = 1 + static_cast<int>(uniform_index(rng, 3));
    const int steps = 1 + static_cast<int>(uniform_index(rng, 8));
    std::vector<std::string> names;
    for (int s = 0; s < k; ++s) names.push_back("s" + std::to_string(s));
    std::vector<Curve> curves;
    // values[rep][objective][strategy][step]
    std::vector<std::vector<std::vector<std::vector<double>>>> values(
        reps, std::vector<std::vector<std::vector<double>>>(
                  objectives, std::vector<std::vector<double>>(k, std::vector<double>(steps))));
    for (int r = 0; r < reps; ++r) {
      for (int o = 0; o < objectives; ++o) {
        for (int s = 0; s < k; ++s) {
          for (int t = 0; t < steps; ++t) values[r][o][s][t] = static_cast<double>(uniform_index(rng, 3));
          curves.push_back({names[s], "o" + std::to_string(o), r, values[r][o][s]});
        }
      }
    }
    const auto report = rank_report(curves, names);
    for (int t = 0; t < steps; ++t) {
      std::vector<std::vector<double>> per_rep(k, std::vector<double>(reps, 0.0));
      for (int r = 0; r < reps; ++r) {
        for (int o = 0; o < objectives; ++o) {
          std::vector<double> col(k);
          for (int s = 0; s < k; ++s) col[s] = values[r][o][s][t];
          const auto ranks = counting_ranks(col);
          for (int s = 0; s < k; ++s) per_rep[s][r] += ranks[s] / objectives;
        }
      }
      double total = 0.0;
      for (int s = 0; s < k; ++s) {
        double mean = 0.0;
        for (double x : per_rep[s]) mean += x / reps;
        double var = 0.0;
        for (double x : per_rep[s]) var += (x - mean) * (x - mean) / reps;
        EXPECT_NEAR(report.mean_rank[s][t], mean, 1e-12);
        EXPECT_NEAR(report.rank_sd[s][t], std::sqrt(var), 1e-12);
        total += report.mean_rank[s][t];
      }
      EXPECT_NEAR(total, k * (k + 1) / 2.0, 1e-12);
    }
  }
}

}  // namespace
}  // namespace qboost::cli

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <unistd.h>

#include "cli/commands.hpp"
#include "cli/records.hpp"
#include "qboost/serialization.hpp"

namespace qboost::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() /
          ("qboost_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "qboost");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out.str("");
    err.str("");
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  static std::vector<std::string> lines(const std::string& file) {
    std::ifstream in(file);
    std::vector<std::string> result;
    for (std::string line; std::getline(in, line);) result.push_back(line);
    return result;
  }

  static std::vector<std::string> csv_header(const std::string& file) {
    std::ifstream in(file);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    return cells;
  }

  fs::path dir;
  std::ostringstream out;
  std::ostringstream err;
};

TEST_F(CliTest, OptimizeWritesOneRecordPerEvaluation) {
  ASSERT_EQ(cli({"optimize", "--strategy", "hyperboost", "--objective", "branin", "--budget", "60",
                 "--seed", "7", "--out", path("run.jsonl")}),
            0)
      << err.str();
  const RecordFile file = read_records(path("run.jsonl"));
  EXPECT_EQ(file.evals.size(), 60u);
  EXPECT_EQ(file.skipped, 0);
  EXPECT_EQ(file.header["schema_version"], kSchemaVersion);
  EXPECT_EQ(file.header["objective"]["name"], "branin");
  EXPECT_EQ(file.header["optimizer"]["batch_size"], 10000);
  for (std::size_t i = 0; i < file.evals.size(); ++i) EXPECT_EQ(file.evals[i]["iteration"], i + 1);
  EXPECT_NE(out.str().find("incumbent"), std::string::npos);
}

TEST_F(CliTest, RandomSingleEvaluation) {
  ASSERT_EQ(cli({"optimize", "--strategy", "random", "--objective", "svm", "--budget", "1", "--out",
                 path("one.jsonl")}),
            0);
  const RecordFile file = read_records(path("one.jsonl"));
  ASSERT_EQ(file.evals.size(), 1u);
  EXPECT_EQ(file.evals[0]["incumbent"], file.evals[0]["config"]);
}

TEST_F(CliTest, RerunsHaveIdenticalPayloads) {
  for (const std::string strategy : {"hyperboost", "smac-rf", "roar", "random"}) {
    const std::vector<std::string> flags{"optimize", "--strategy", strategy, "--objective", "dt",
                                         "--budget", "20", "--seed", "3", "--noise-sd", "0.05",
                                         "--batch-size", "500"};
    auto a = flags;
    a.insert(a.end(), {"--out", path("a.jsonl")});
    auto b = flags;
    b.insert(b.end(), {"--out", path("b.jsonl")});
    ASSERT_EQ(cli(a), 0);
    ASSERT_EQ(cli(b), 0);
    const auto la = lines(path("a.jsonl"));
    const auto lb = lines(path("b.jsonl"));
    ASSERT_EQ(la.size(), lb.size());
    EXPECT_EQ(la[0], lb[0]);
    for (std::size_t i = 1; i < la.size(); ++i) {
      EXPECT_EQ(without_timings(json::parse(la[i])).dump(), without_timings(json::parse(lb[i])).dump());
    }
  }
}

TEST_F(CliTest, InvalidFlagsPrintUsage) {
  EXPECT_NE(cli({"optimize", "--strategy", "tpe"}), 0);
  EXPECT_NE(err.str().find("Usage"), std::string::npos);
  EXPECT_NE(cli({"optimize", "--budget", "zero"}), 0);
  EXPECT_NE(err.str().find("Usage"), std::string::npos);
  EXPECT_NE(cli({"optimize", "--budget", "0"}), 0);
  EXPECT_NE(cli({"optimize", "--quantile", "1.5"}), 0);
  EXPECT_NE(cli({"optimize", "--objective", "nope"}), 0);
  EXPECT_NE(cli({}), 0);
  EXPECT_NE(cli({"compare", "--strategy", "random", "--out", path("c")}), 0);
}

TEST_F(CliTest, SpaceFileObjective) {
  std::ofstream(path("space.json")) << space_to_json(svm_space()).dump();
  ASSERT_EQ(cli({"optimize", "--strategy", "roar", "--objective", path("space.json"), "--budget", "8",
                 "--out", path("r.jsonl")}),
            0)
      << err.str();
  const RecordFile file = read_records(path("r.jsonl"));
  EXPECT_EQ(file.header["objective"]["name"], "space");
  EXPECT_EQ(file.evals.size(), 8u);
}

TEST_F(CliTest, TruncatedRecordFileStaysReadable) {
  ASSERT_EQ(cli({"optimize", "--strategy", "random", "--objective", "branin", "--budget", "10",
                 "--out", path("full.jsonl")}),
            0);
  const auto all = lines(path("full.jsonl"));
  {
    std::ofstream cut(path("cut.jsonl"));
    for (std::size_t i = 0; i < 6; ++i) cut << all[i] << '\n';
    cut << all[6].substr(0, all[6].size() / 2);  // torn final write
  }
  const RecordFile file = read_records(path("cut.jsonl"));
  EXPECT_EQ(file.evals.size(), 5u);
  EXPECT_EQ(file.skipped, 1);
}

TEST_F(CliTest, CompareWritesRankTables) {
  ASSERT_EQ(cli({"compare", "--strategy", "hyperboost,random", "--objective", "svm,quadratic",
                 "--reps", "2", "--budget", "12", "--batch-size", "300", "--out", path("cmp")}),
            0)
      << err.str();
  EXPECT_EQ(csv_header(path("cmp/ranks.csv")),
            (std::vector<std::string>{"step", "hyperboost", "hyperboost_sd", "random", "random_sd"}));
  const auto rows = lines(path("cmp/ranks.csv"));
  ASSERT_EQ(rows.size(), 13u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::stringstream ss(rows[i]);
    std::vector<double> cells;
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(std::stod(c));
    EXPECT_DOUBLE_EQ(cells[1] + cells[3], 3.0);
  }
  EXPECT_EQ(std::distance(fs::directory_iterator(path("cmp/records")), fs::directory_iterator{}), 8);
}

TEST_F(CliTest, CompareBudgetMultiplierAppliesToRandom) {
  ASSERT_EQ(cli({"compare", "--strategy", "hyperboost,random", "--objective", "quadratic",
                 "--reps", "1", "--budget", "10", "--batch-size", "200", "--budget-multiplier", "2",
                 "--out", path("cmp")}),
            0)
      << err.str();
  EXPECT_EQ(read_records(path("cmp/records/quadratic__random_x2__rep0.jsonl")).evals.size(), 20u);
  EXPECT_EQ(read_records(path("cmp/records/quadratic__hyperboost__rep0.jsonl")).evals.size(), 10u);
}

TEST_F(CliTest, IncumbentCurveMapsStepsThroughMultiplier) {
  std::vector<json> evals;
  for (int i = 1; i <= 6; ++i) evals.push_back(json{{"incumbent_true", i * 1.0}});
  EXPECT_EQ(incumbent_curve(evals, 2.0, 3), (std::vector<double>{2, 4, 6}));
  EXPECT_EQ(incumbent_curve(evals, 1.0, 8), (std::vector<double>{1, 2, 3, 4, 5, 6, 6, 6}));
}

TEST_F(CliTest, OverheadRowCountAndDefaults) {
  EXPECT_EQ(OverheadOptions{}.batch_size, 10000);
  ASSERT_EQ(cli({"overhead", "--iterations", "5", "--batch-size", "100", "--dims", "2",
                 "--kd-dims", "2,4", "--out", path("oh.csv")}),
            0)
      << err.str();
  // surrogate: 2 models x 1 dim x 5 x {fit, predict}; kd: k=2 plain (2 parts),
  // k=4 plain (2) and projected (3)
  EXPECT_EQ(lines(path("oh.csv")).size(), 1u + 20u + 10u + 10u + 15u);
}

TEST_F(CliTest, OverheadEvaluatesEachConfigurationOnce) {
  std::vector<Configuration> seen;
  const auto rows = surrogate_overhead("gbqr", 3, 15, 200, 4, &seen);
  EXPECT_EQ(rows.size(), 30u);
  EXPECT_EQ(seen.size(), 17u);  // two seed points plus one per iteration
  for (std::size_t i = 0; i < seen.size(); ++i) {
    for (std::size_t j = i + 1; j < seen.size(); ++j) EXPECT_NE(seen[i], seen[j]);
  }
  EXPECT_EQ(kd_overhead(8, true, 2, 4, 50, 1).size(), 12u);
}

TEST_F(CliTest, ReportOnEmptyInput) {
  ASSERT_EQ(cli({"report", "--out", path("rep")}), 0);
  EXPECT_NE(err.str().find("warning"), std::string::npos);
  EXPECT_EQ(lines(path("rep/mean_score.csv")).size(), 1u);
}

TEST_F(CliTest, ReportSingleRunCurveEqualsIncumbentCurve) {
  ASSERT_EQ(cli({"optimize", "--strategy", "smac-rf", "--objective", "dt", "--budget", "15",
                 "--batch-size", "300", "--out", path("run.jsonl")}),
            0);
  ASSERT_EQ(cli({"report", path("run.jsonl"), "--out", path("rep")}), 0) << err.str();
  const RecordFile file = read_records(path("run.jsonl"));
  const auto rows = lines(path("rep/mean_score.csv"));
  ASSERT_EQ(rows.size(), 16u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::stringstream ss(rows[i]);
    std::string step;
    std::string value;
    std::getline(ss, step, ',');
    std::getline(ss, value, ',');
    EXPECT_NEAR(std::stod(value), file.evals[i - 1]["incumbent_true"].get<double>(), 1e-9);
  }
}

TEST_F(CliTest, ReportColumnsFollowFlagOrder) {
  for (const std::string s : {"hyperboost", "random", "roar"}) {
    ASSERT_EQ(cli({"optimize", "--strategy", s, "--objective", "svm", "--budget", "6", "--batch-size",
                   "100", "--out", path(s + ".jsonl")}),
              0);
  }
  ASSERT_EQ(cli({"report", path("hyperboost.jsonl"), path("random.jsonl"), path("roar.jsonl"),
                 "--strategy", "roar,hyperboost", "--out", path("rep")}),
            0);
  EXPECT_EQ(csv_header(path("rep/mean_score.csv")),
            (std::vector<std::string>{"step", "roar", "roar_sd", "hyperboost", "hyperboost_sd", "random",
                                      "random_sd"}));
  EXPECT_EQ(lines(path("rep/timings.csv")).size(), 1u + 18u);
}

TEST_F(CliTest, ReportSkipsCorruptLinesAndRefusesOtherSchemas) {
  ASSERT_EQ(cli({"optimize", "--strategy", "random", "--objective", "svm", "--budget", "4", "--out",
                 path("run.jsonl")}),
            0);
  { std::ofstream(path("run.jsonl"), std::ios::app) << "{not json\n"; }
  ASSERT_EQ(cli({"report", path("run.jsonl"), "--out", path("rep")}), 0);
  EXPECT_NE(err.str().find("skipped 1"), std::string::npos);

  auto all = lines(path("run.jsonl"));
  json header = json::parse(all[0]);
  header["schema_version"] = kSchemaVersion + 1;
  {
    std::ofstream f(path("old.jsonl"));
    f << header.dump() << '\n';
    for (std::size_t i = 1; i < all.size(); ++i) f << all[i] << '\n';
  }
  EXPECT_EQ(cli({"report", path("old.jsonl"), "--out", path("rep2")}), 2);
  EXPECT_NE(err.str().find("schema"), std::string::npos);
}

}  // namespace
}  // namespace qboost::cli

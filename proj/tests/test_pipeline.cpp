#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include <sys/wait.h>

#include "ieegdec/container.hpp"
#include "ieegdec/report.hpp"
#include "test_util.hpp"

using nlohmann::json;
using testutil::TempDir;

namespace {

struct CliResult {
  int status = -1;
  std::string out;
  std::string err;
};

CliResult cli(const TempDir& scratch, const std::string& args) {
  const auto out = scratch / "stdout.txt";
  const auto err = scratch / "stderr.txt";
  const std::string cmd = std::string("\"") + IEEGDEC_CLI_PATH + "\" " + args + " >\"" + out.string() +
                          "\" 2>\"" + err.string() + "\"";
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = testutil::read_file(out);
  r.err = testutil::read_file(err);
  return r;
}

void write_small_spec(const TempDir& dir, int seed, double effect = 3.0) {
  json spec{{"participant_id", "cli-" + std::to_string(seed)},
            {"n_channels", 5},
            {"informative_channels", {0, 1}},
            {"n_trials_negative", 40},
            {"n_trials_positive", 30},
            {"effect_size", effect},
            {"seed", seed}};
  testutil::write_file(dir / "spec.json", spec.dump());
  testutil::write_file(dir / "config.json",
                       R"({"classifier": {"kind": "logistic_regression"}, "seed": 4})");
}

std::string q(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST(Cli, SynthValidateEvaluate) {
  TempDir dir("cli");
  write_small_spec(dir, 1);
  ASSERT_EQ(cli(dir, "synth --spec " + q(dir / "spec.json") + " --out " + q(dir / "c")).status, 0);

  const CliResult v = cli(dir, "validate --in " + q(dir / "c"));
  EXPECT_EQ(v.status, 0);
  const json vj = json::parse(v.out);
  EXPECT_TRUE(vj.at("valid").get<bool>());
  EXPECT_TRUE(vj.at("violations").empty());

  const CliResult e = cli(dir, "evaluate --in " + q(dir / "c") + " --config " + q(dir / "config.json") + " --out " +
                             q(dir / "run"));
  ASSERT_EQ(e.status, 0) << e.err;
  for (const char* f : {ieegdec::kSummaryFile, ieegdec::kFoldsJsonFile, ieegdec::kFoldsCsvFile,
                        ieegdec::kSelectedCsvFile}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "run" / f)) << f;
  }
  const json summary = json::parse(testutil::read_file(dir / "run" / ieegdec::kSummaryFile));
  EXPECT_EQ(summary.at("format"), ieegdec::kSummaryFormat);
  EXPECT_EQ(summary.at("positive_class"), "task");
  EXPECT_EQ(summary.at("n_trials"), 70);
  EXPECT_EQ(summary.at("n_positive"), 30);
  for (const char* mode : {"best_channel", "combined"}) {
    const json& m = summary.at("modes").at(mode);
    EXPECT_EQ(m.at("fold_f1").size(), 5u);
    for (const auto& f : m.at("fold_f1")) {
      EXPECT_GE(f.get<double>(), 0.0);
      EXPECT_LE(f.get<double>(), 1.0);
    }
    EXPECT_GT(m.at("f1_mean").get<double>(), 0.6) << mode;
  }
  const std::string folds_csv = testutil::read_file(dir / "run" / ieegdec::kFoldsCsvFile);
  EXPECT_EQ(folds_csv.substr(0, folds_csv.find('\n')), "fold,mode,tp,fp,fn,tn,precision,recall,f1,selected_channels");
  EXPECT_EQ(std::count(folds_csv.begin(), folds_csv.end(), '\n'), 11);
}

TEST(Cli, RepeatedEvaluateIsByteIdentical) {
  TempDir dir("cli");
  write_small_spec(dir, 2);
  ASSERT_EQ(cli(dir, "synth --spec " + q(dir / "spec.json") + " --out " + q(dir / "c")).status, 0);
  for (const char* run : {"a", "b"}) {
    ASSERT_EQ(cli(dir, "evaluate --in " + q(dir / "c") + " --config " + q(dir / "config.json") + " --out " +
                           q(dir / run)).status, 0);
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir / "a")) {
    const auto name = entry.path().filename();
    EXPECT_EQ(testutil::read_file(entry.path()), testutil::read_file(dir / "b" / name)) << name;
  }
}

TEST(Cli, TruncatedContainerExitsThreeWithJsonError) {
  TempDir dir("cli");
  write_small_spec(dir, 3);
  ASSERT_EQ(cli(dir, "synth --spec " + q(dir / "spec.json") + " --out " + q(dir / "c")).status, 0);
  std::string bytes = testutil::read_file(dir / "c" / ieegdec::kDataFile);
  bytes.resize(bytes.size() / 2);
  testutil::write_file(dir / "c" / ieegdec::kDataFile, bytes);

  const CliResult e = cli(dir, "evaluate --in " + q(dir / "c") + " --out " + q(dir / "run"));
  EXPECT_EQ(e.status, 3);
  const json err = json::parse(e.err);
  EXPECT_EQ(err.at("error"), "ContainerCorrupt");
  EXPECT_NE(err.at("message").get<std::string>().find("shape:"), std::string::npos);

  const CliResult v = cli(dir, "validate --in " + q(dir / "c"));
  EXPECT_EQ(v.status, 3);
  EXPECT_FALSE(json::parse(v.out).at("valid").get<bool>());
}

TEST(Cli, BadConfigAndUsage) {
  TempDir dir("cli");
  write_small_spec(dir, 4);
  ASSERT_EQ(cli(dir, "synth --spec " + q(dir / "spec.json") + " --out " + q(dir / "c")).status, 0);
  testutil::write_file(dir / "bad.json", R"({"classifer": {}})");
  const CliResult e = cli(dir, "evaluate --in " + q(dir / "c") + " --config " + q(dir / "bad.json"));
  EXPECT_EQ(e.status, 2);
  EXPECT_EQ(json::parse(e.err).at("error"), "ConfigInvalid");
  EXPECT_EQ(cli(dir, "frobnicate").status, 64);
  testutil::write_file(dir / "badspec.json", R"({"n_channels": -2})");
  EXPECT_EQ(cli(dir, "synth --spec " + q(dir / "badspec.json") + " --out " + q(dir / "x")).status, 2);
}

TEST(Cli, FeaturesRegionsAndReport) {
  TempDir dir("cli");
  std::string runs;
  for (int seed : {5, 6}) {
    write_small_spec(dir, seed);
    const auto c = dir / ("c" + std::to_string(seed));
    const auto r = dir / ("r" + std::to_string(seed));
    ASSERT_EQ(cli(dir, "synth --spec " + q(dir / "spec.json") + " --out " + q(c)).status, 0);
    ASSERT_EQ(cli(dir, "evaluate --in " + q(c) + " --config " + q(dir / "config.json") + " --out " + q(r)).status, 0);
    runs += " " + q(r);
  }
  ASSERT_EQ(cli(dir, "features --in " + q(dir / "c5") + " --out " + q(dir / "f.csv")).status, 0);
  const std::string features = testutil::read_file(dir / "f.csv");
  EXPECT_EQ(std::count(features.begin(), features.end(), '\n'), 1 + 5 * 70);

  ASSERT_EQ(cli(dir, "regions --runs" + runs + " --out " + q(dir / "regions.csv")).status, 0);
  std::istringstream regions(testutil::read_file(dir / "regions.csv"));
  std::string header, first;
  std::getline(regions, header);
  std::getline(regions, first);
  EXPECT_EQ(header, "region,participant_recurrence,channel_count");
  EXPECT_EQ(first.substr(0, first.find(',')), "region-A");

  ASSERT_EQ(cli(dir, "report --runs" + runs + " --out " + q(dir / "report.csv")).status, 0);
  const std::string report = testutil::read_file(dir / "report.csv");
  EXPECT_NE(report.find("logistic_regression,best_channel,2,10,"), std::string::npos) << report;
  EXPECT_NE(report.find("logistic_regression,combined,2,10,"), std::string::npos) << report;
}

TEST(Report, AggregatesParticipantsAndFolds) {
  using namespace ieegdec;
  auto run = [](const std::string& id, std::vector<double> best, std::vector<double> comb) {
    RunSummary r;
    r.participant_id = id;
    r.kind = ClassifierKind::kNaiveBayes;
    auto fill = [](ModeSummary& m, const std::vector<double>& f1) {
      m.fold_f1 = f1;
      for (double v : f1) m.f1_mean += v / static_cast<double>(f1.size());
      m.precision_mean = 0.5;
      m.recall_mean = 0.25;
    };
    fill(r.best_channel, best);
    fill(r.combined, comb);
    return r;
  };
  const std::vector<RunSummary> runs = {run("a", {0.6, 0.8}, {0.7, 0.9}), run("b", {0.4, 0.6}, {1.0, 1.0})};
  const auto rows = aggregate_runs(runs);
  ASSERT_EQ(rows.size(), 2u);
  const ReportRow& best = rows[0].mode == Mode::kBestChannel ? rows[0] : rows[1];
  const ReportRow& comb = rows[0].mode == Mode::kCombined ? rows[0] : rows[1];
  EXPECT_EQ(best.n_participants, 2);
  EXPECT_EQ(best.n_folds, 4);
  EXPECT_NEAR(best.participant_f1_mean, 0.6, 1e-15);
  EXPECT_NEAR(best.participant_f1_sd, 0.1, 1e-15);
  EXPECT_NEAR(best.fold_f1_mean, 0.6, 1e-15);
  EXPECT_NEAR(best.fold_f1_sd, std::sqrt(0.02), 1e-12);  // deviations 0, .2, -.2, 0
  EXPECT_NEAR(comb.participant_f1_mean, 0.9, 1e-15);
  EXPECT_NEAR(comb.participant_f1_sd, 0.1, 1e-15);
  EXPECT_NEAR(best.precision_mean, 0.5, 1e-15);

  std::ostringstream csv;
  write_report_csv(csv, rows);
  EXPECT_NE(csv.str().find("0.60 ± 0.10"), std::string::npos) << csv.str();
  std::ostringstream single;
  write_report_csv(single, aggregate_runs({runs[0]}));
  EXPECT_NE(single.str().find("0.70 ± 0.10"), std::string::npos) << single.str();
}

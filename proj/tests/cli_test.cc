// Copyright 2026 The Sememe-SC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the sememe-sc executable end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "oracles.h"
#include "sememe_sc/text_io.h"

namespace sememe_sc {
namespace {
namespace fs = std::filesystem;

const std::string kScdExamples = std::string(SEMEME_SC_DATA_DIR) + "/scd_examples";

int RunCli(const std::string& args) {
  const std::string cmd = std::string(SEMEME_SC_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path Scratch(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / ("sememe_sc_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::vector<std::string>> Rows(const fs::path& file, char sep) {
  std::vector<std::vector<std::string>> rows;
  const std::string text = ReadFile(file);
  for (std::string_view line : SplitLines(text)) {
    if (IsSkippableLine(line)) continue;
    std::vector<std::string> row;
    for (std::string_view f : SplitFields(line, sep)) row.emplace_back(f);
    rows.push_back(row);
  }
  return rows;
}

double CsvValue(const fs::path& file, const std::string& metric) {
  for (const auto& row : Rows(file, ',')) {
    double v = 0;
    if (row.at(0) == metric && ParseDouble(row.at(1), &v)) return v;
  }
  ADD_FAILURE() << metric << " not in " << file;
  return 0;
}

std::string ScdExamplesArgs() {
  return "--lexicon " + kScdExamples + "/lexicon.tsv --mwes " + kScdExamples + "/mwes.tsv";
}

TEST(CliScdTest, ScdExamplesReport) {
  const fs::path out = Scratch("scd");
  ASSERT_EQ(RunCli("scd " + ScdExamplesArgs() + " --gold-scd " + kScdExamples +
                   "/gold_scd.tsv --out " + out.string()),
            0);
  const auto rows = Rows(out / "scd.tsv", '\t');
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0][1], "3");
  EXPECT_EQ(rows[1][1], "2");
  EXPECT_EQ(rows[2][1], "1");
  EXPECT_EQ(rows[3][1], "0");
  EXPECT_DOUBLE_EQ(CsvValue(out / "scd_correlation.csv", "pearson"), 1.0);
  EXPECT_DOUBLE_EQ(CsvValue(out / "scd_correlation.csv", "spearman"), 1.0);
  EXPECT_TRUE(fs::exists(out / "run_config.txt"));
  EXPECT_TRUE(fs::exists(out / "log.txt"));
}

TEST(CliScdTest, NoisyGoldMatchesOracle) {
  const fs::path data = Scratch("scd_noisy_data");
  const fs::path out = Scratch("scd_noisy");
  ASSERT_EQ(RunCli("gen-synthetic --n-mwes 150 --seed 5 --scd-label-noise 0.7 --out " +
                data.string()),
            0);
  ASSERT_EQ(RunCli("scd --config " + (data / "synthetic.conf").string() + " --out " + out.string()),
            0);
  std::map<std::string, double> gold;
  for (const auto& row : Rows(data / "gold_scd.tsv", '\t')) {
    double v = 0;
    ASSERT_TRUE(ParseDouble(row[1], &v));
    gold[row[0]] = v;
  }
  std::vector<double> computed, human;
  for (const auto& row : Rows(out / "scd.tsv", '\t')) {
    computed.push_back(std::stod(row[1]));
    human.push_back(gold.at(row[0]));
  }
  EXPECT_NEAR(CsvValue(out / "scd_correlation.csv", "pearson"),
              oracle::Pearson(computed, human), 1e-10);
  EXPECT_NEAR(CsvValue(out / "scd_correlation.csv", "spearman"),
              oracle::Spearman(computed, human), 1e-10);
  EXPECT_LT(CsvValue(out / "scd_correlation.csv", "pearson"), 1.0);
}

class CliPipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    data_ = new fs::path(Scratch("pipeline_data"));
    ASSERT_EQ(RunCli("gen-synthetic --seed 11 --out " + data_->string()), 0);
  }
  static void TearDownTestSuite() { delete data_; }
  static std::string Conf() { return "--config " + (*data_ / "synthetic.conf").string(); }
  static fs::path* data_;
};
fs::path* CliPipelineTest::data_ = nullptr;

TEST_F(CliPipelineTest, SimilarityTrainingIsStableAndExcludesEvalMwes) {
  const fs::path out = Scratch("train_sim");
  ASSERT_EQ(RunCli("train " + Conf() + " --model scas --epochs 60 --out " + out.string()), 0);
  const auto loss = Rows(out / "loss.csv", ',');
  ASSERT_EQ(loss.size(), 61u);  // header + 60 epochs
  int checked = 0, non_increasing = 0;
  for (std::size_t e = 10; e + 1 < loss.size(); ++e) {  // row e holds epoch e
    ++checked;
    if (std::stod(loss[e + 1][1]) <= std::stod(loss[e][1])) ++non_increasing;
  }
  EXPECT_GE(non_increasing, 0.95 * checked);

  std::set<std::string> eval_tokens;
  for (const auto& row : Rows(*data_ / "similarity.tsv", '\t')) {
    eval_tokens.insert(row[0]);
    eval_tokens.insert(row[1]);
  }
  const auto excluded = Rows(out / "excluded_mwes.txt", '\t');
  EXPECT_FALSE(excluded.empty());
  for (const auto& row : excluded) EXPECT_TRUE(eval_tokens.count(row[0]));
  for (const auto& row : Rows(out / "splits.tsv", '\t')) {
    EXPECT_FALSE(eval_tokens.count(row[0])) << row[0];
  }
  EXPECT_TRUE(fs::exists(out / "checkpoints" / "best" / "manifest.txt"));
  EXPECT_TRUE(fs::exists(out / "checkpoints" / "final" / "manifest.txt"));

  const fs::path eval = Scratch("eval_sim");
  ASSERT_EQ(RunCli("eval-sim " + Conf() + " --checkpoint " + (out / "checkpoints/best").string() +
                " --out " + eval.string()),
            0);
  const auto report = Rows(eval / "similarity_report.csv", ',');
  ASSERT_EQ(report.size(), 2u);
  EXPECT_EQ(report[1][0], "similarity.tsv");
  EXPECT_EQ(report[1][1], report[1][2]);
}

TEST_F(CliPipelineTest, SameSeedGivesIdenticalCheckpointBytes) {
  const fs::path a = Scratch("det_a"), b = Scratch("det_b");
  const std::string args = "train " + Conf() + " --model scmsa_r --epochs 5 --seed 4 --out ";
  ASSERT_EQ(RunCli(args + a.string()), 0);
  ASSERT_EQ(RunCli(args + b.string()), 0);
  int compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a / "checkpoints")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), a);
    EXPECT_EQ(ReadFile(entry.path()), ReadFile(b / rel)) << rel;
    ++compared;
  }
  EXPECT_GT(compared, 4);
  EXPECT_EQ(ReadFile(a / "loss.csv"), ReadFile(b / "loss.csv"));
}

TEST_F(CliPipelineTest, SememeEvaluationWritesReports) {
  const fs::path run = Scratch("train_sem");
  ASSERT_EQ(RunCli("train " + Conf() +
                   " --model scmsa --task sememe --lr0 0.001 --epochs 5 --out " + run.string()),
            0);
  const fs::path eval = Scratch("eval_sem");
  ASSERT_EQ(RunCli("eval-sememe " + Conf() + " --checkpoint " +
                   (run / "checkpoints/best").string() + " --out " + eval.string()),
            0);
  for (const char* f : {"sememe_report.csv", "breakdown_scd.csv", "breakdown_rule.csv",
                        "predictions.tsv"}) {
    EXPECT_TRUE(fs::exists(eval / f)) << f;
  }
  const double map = CsvValue(eval / "sememe_report.csv", "map_x100");
  EXPECT_GT(map, 0.0);
  EXPECT_LE(map, 100.0);
  // Same splits as training.
  EXPECT_EQ(ReadFile(run / "splits.tsv"), ReadFile(eval / "splits.tsv"));
}

TEST_F(CliPipelineTest, ErrorsMapToExitCodesWithoutPartialOutput) {
  const fs::path out = Scratch("errors");
  // Config errors: bad value, unknown model, missing file, mismatched checkpoint.
  EXPECT_EQ(RunCli("train " + Conf() + " --epochs x --out " + out.string()), 1);
  EXPECT_EQ(RunCli("train " + Conf() + " --model rnn --out " + out.string()), 1);
  EXPECT_EQ(RunCli("train " + Conf() + " --embeddings /nonexistent.vec --out " + out.string()), 1);
  EXPECT_EQ(RunCli("train " + Conf() + " --dim 7 --out " + out.string()), 1);
  EXPECT_FALSE(fs::exists(out));

  const fs::path bad_conf = Scratch("bad_conf");
  fs::create_directories(bad_conf);
  WriteFile(bad_conf / "c.conf", "learning_rate=3\n");
  EXPECT_EQ(RunCli("scd --config " + (bad_conf / "c.conf").string()), 1);
  EXPECT_EQ(RunCli("frobnicate"), 1);

  const fs::path run = Scratch("mismatch_run");
  ASSERT_EQ(RunCli("train " + Conf() + " --model scas --epochs 1 --out " + run.string()), 0);
  EXPECT_EQ(RunCli("eval-sim " + Conf() + " --model scmsa --checkpoint " +
                (run / "checkpoints/final").string()),
            1);
  EXPECT_EQ(RunCli("eval-sememe " + Conf() + " --checkpoint " +
                   (run / "checkpoints/final").string()),
            1);

  // Coverage gaps: drop a constituent's vector.
  const fs::path holes = Scratch("holes");
  fs::create_directories(holes);
  std::string words = ReadFile(*data_ / "words.vec");
  words.erase(0, words.find('\n') + 1);
  WriteFile(holes / "words.vec", words);
  EXPECT_EQ(RunCli("train " + Conf() + " --embeddings " + (holes / "words.vec").string() +
                " --out " + (holes / "run").string()),
            1);
  EXPECT_FALSE(fs::exists(holes / "run"));
}

TEST(CliGradcheckTest, FullMatrix) {
  const fs::path out = Scratch("gradcheck");
  ASSERT_EQ(RunCli("gradcheck --out " + out.string()), 0);
  const auto rows = Rows(out / "gradcheck.csv", ',');
  ASSERT_EQ(rows.size(), 1u + 7 * 2);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    EXPECT_EQ(rows[r][4], "pass") << rows[r][0] << ' ' << rows[r][1];
    EXPECT_LT(std::stod(rows[r][2]), 1e-4);
    if (rows[r][0] == "add" && rows[r][1] == "similarity") EXPECT_EQ(rows[r][2], "0");
  }
  ASSERT_EQ(RunCli("gradcheck --models scas,scmsa_r --tasks sememe --rule-mode full --out " +
                out.string()),
            0);
  EXPECT_EQ(Rows(out / "gradcheck.csv", ',').size(), 3u);
}

}  // namespace
}  // namespace sememe_sc

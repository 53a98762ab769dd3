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

// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and time
// budgets are fixed here; the process exits non-zero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "fixtures.h"
#include "oracles.h"
#include "sememe_sc/composition.h"
#include "sememe_sc/evaluation.h"
#include "sememe_sc/sememe_kb.h"
#include "sememe_sc/synthetic.h"
#include "sememe_sc/text_io.h"
#include "sememe_sc/training.h"

namespace sememe_sc::acceptance {
namespace {
namespace fs = std::filesystem;

// Tolerances.
constexpr double kGradTolerance = 1e-4;
constexpr double kFdEpsilon = 1e-5;
constexpr double kCorrelationTolerance = 1e-10;
constexpr double kRationalTolerance = 1e-12;
constexpr double kOverfitLoss = 1e-3;
constexpr double kRankTolerance = 1e-10;

// Time budgets in seconds.
constexpr double kScdBudget = 1;
constexpr double kGradBudget = 30;
constexpr double kMetricBudget = 5;
constexpr double kOverfitBudget = 60;
constexpr double kTrendBudget = 300;
constexpr double kRankBudget = 1;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool condition, const std::string& why) {
    if (!condition && pass) detail = why;
    pass = pass && condition;
  }
};

int RunCli(const std::string& args) {
  const std::string cmd = std::string(SEMEME_SC_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path Scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sememe_sc_acceptance_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string Num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// ------------------------------------------------------------ 1

Outcome ScdExactness() {
  Outcome o;
  using Names = std::set<std::string>;
  struct Example {
    Names mwe, c1, c2;
    int expected;
  };
  const Example examples[] = {
      {{"fact", "occupation", "politics", "uprise", "human", "agricultural"},
       {"occupation", "human", "agricultural"},
       {"uprise", "fact", "politics"},
       3},
      {{"math", "image"}, {"math", "knowledge", "question", "funcword"}, {"image"}, 2},
      {{"exam", "engage"},
       {"handle", "respond", "agree", "obey", "funcword", "surname"},
       {"exam", "check"},
       1},
      {{"finish"}, {"draw", "part", "image", "character", "express"}, {"symbol", "text"}, 0},
  };
  for (const Example& e : examples) {
    o.Require(ScdValue(ComputeScd(e.mwe, e.c1, e.c2)) == e.expected,
              "literal example expected SCD " + std::to_string(e.expected));
  }
  const std::string dir = std::string(SEMEME_SC_DATA_DIR) + "/scd_examples";
  const KbDataset kb = ParseKb(ReadFile(dir + "/lexicon.tsv"), ReadFile(dir + "/mwes.tsv"));
  for (std::size_t i = 0; i < kb.mwes().size(); ++i) {
    o.Require(ScdValue(MweScd(kb, i)) == examples[i].expected, "KB example " + kb.mwes()[i].token);
  }

  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> universe_size(1, 10);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = universe_size(rng);
    auto draw = [&] {
      SememeSet s;
      while (s.empty()) {
        for (std::size_t i = 0; i < n; ++i) {
          if (coin(rng)) s.push_back(i);
        }
      }
      return s;
    };
    const SememeSet p = draw(), a = draw(), b = draw();
    std::set<std::size_t> u(a.begin(), a.end());
    u.insert(b.begin(), b.end());
    const std::set<std::size_t> ps(p.begin(), p.end());
    bool subset = true, overlap = false;
    for (std::size_t x : ps) {
      subset = subset && u.count(x);
      overlap = overlap || u.count(x);
    }
    const bool c3 = ps == u;
    const bool c2 = subset && ps != u;
    const bool c1 = overlap && !subset;
    const bool c0 = !overlap;
    const int fired = c3 + c2 + c1 + c0;
    const int expected = c3 ? 3 : c2 ? 2 : c1 ? 1 : 0;
    o.Require(fired == 1, "case analysis fired " + std::to_string(fired) + " conditions");
    o.Require(ScdValue(ComputeScd(p, a, b)) == expected, "random triple mismatch");
  }
  o.detail = o.pass ? "4 examples, 10^4 random triples" : o.detail;
  return o;
}

// ------------------------------------------------------------ 2

Outcome GradientSuite() {
  Outcome o;
  struct Case {
    ModelKind kind;
    RuleMode mode;
    const char* label;
  };
  const Case cases[] = {{ModelKind::kScasS, RuleMode::kLowRank, "scas_s"},
                        {ModelKind::kScas, RuleMode::kLowRank, "scas"},
                        {ModelKind::kScmsa, RuleMode::kLowRank, "scmsa"},
                        {ModelKind::kScasR, RuleMode::kFull, "scas_r/full"},
                        {ModelKind::kScasR, RuleMode::kLowRank, "scas_r/lowrank"},
                        {ModelKind::kScmsaR, RuleMode::kLowRank, "scmsa_r/lowrank"}};
  constexpr std::size_t d = 5, n_sememes = 6;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  double worst = 0;
  std::string worst_label;
  for (const Case& c : cases) {
    for (Task task : {Task::kSimilarity, Task::kSememe}) {
      ModelSpec spec;
      spec.kind = c.kind;
      spec.rule_mode = c.mode;
      spec.rule_rank = {2, 2, 2, 2};
      std::vector<std::string> ids;
      for (std::size_t i = 0; i < n_sememes; ++i) ids.push_back("s" + std::to_string(i));
      ModelParams params = InitParams(spec, d, InitRandom(ids, d, rng(), 0.8), rng());
      ForEachTensor(params.weights, [&](const TensorView& t) {
        for (Eigen::Index i = 0; i < t.size(); ++i) t.data[i] = u(rng);
      });
      std::vector<MweInput> inputs;
      std::vector<TrainingTarget> targets;
      const SememeSet sets[4][3] = {{{0, 1}, {2}, {1}},
                                    {{3}, {1, 4, 5}, {0, 2}},
                                    {{0, 2, 5}, {0, 3}, {3, 4, 5}},
                                    {{4}, {4}, {5}}};
      for (std::size_t r = 0; r < 4; ++r) {
        MweInput in;
        in.w1 = Eigen::VectorXd::NullaryExpr(d, [&] { return u(rng); });
        in.w2 = Eigen::VectorXd::NullaryExpr(d, [&] { return u(rng); });
        in.sememes1 = sets[r][0];
        in.sememes2 = sets[r][1];
        in.rule = kAllRules[r];
        TrainingTarget t;
        t.task = task;
        t.reference = Eigen::VectorXd::NullaryExpr(d, [&] { return u(rng); });
        t.gold = sets[r][2];
        inputs.push_back(in);
        targets.push_back(t);
      }
      const double err = fixture::FiniteDifferenceError(params, inputs, targets, 1e-2, 100.0,
                                                        /*include_sememes=*/true, kFdEpsilon);
      if (err > worst) {
        worst = err;
        worst_label = std::string(c.label) + "/" + std::string(TaskName(task));
      }
      o.Require(err < kGradTolerance,
                std::string(c.label) + "/" + std::string(TaskName(task)) + " error " + Num(err));
    }
  }
  if (o.pass) o.detail = "12 cases, max relative error " + Num(worst) + " (" + worst_label + ")";
  return o;
}

// ------------------------------------------------------------ 3

Outcome MetricOracles() {
  Outcome o;
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> len(3, 15), coarse(0, 5), grid(0, 20);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin(0.3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = len(rng);
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = coarse(rng);
      ys[i] = trial % 2 ? normal(rng) : coarse(rng);
    }
    xs[0] = 0;
    xs[1] = 5;  // never constant
    ys[0] = -1;
    ys[1] = 7;
    o.Require(std::abs(Spearman(xs, ys) - oracle::Spearman(xs, ys)) <= kCorrelationTolerance,
              "Spearman trial " + std::to_string(trial));
    o.Require(std::abs(Pearson(xs, ys) - oracle::Pearson(xs, ys)) <= kCorrelationTolerance,
              "Pearson trial " + std::to_string(trial));

    const std::size_t n_records = 1 + trial % 5, n_labels = 2 + trial % 8;
    std::vector<PredictionRecord> records;
    std::vector<std::vector<double>> scores;
    std::vector<std::set<std::size_t>> gold;
    double map = 0;
    for (std::size_t r = 0; r < n_records; ++r) {
      Eigen::VectorXd s(static_cast<Eigen::Index>(n_labels));
      SememeSet g;
      for (std::size_t i = 0; i < n_labels; ++i) {
        s(static_cast<Eigen::Index>(i)) = grid(rng) / 20.0;
        if (coin(rng)) g.push_back(i);
      }
      if (g.empty()) g.push_back(r % n_labels);
      records.push_back(MakeRecord("m", s, g));
      // Independent ranking by repeated arg-max with index tie-break.
      std::vector<std::size_t> ranking;
      std::vector<bool> used(n_labels, false);
      for (std::size_t k = 0; k < n_labels; ++k) {
        std::size_t best = n_labels;
        for (std::size_t i = 0; i < n_labels; ++i) {
          if (!used[i] && (best == n_labels || s(i) > s(best))) best = i;
        }
        used[best] = true;
        ranking.push_back(best);
      }
      const std::set<std::size_t> gs(g.begin(), g.end());
      const double ap = oracle::AveragePrecision(ranking, gs);
      o.Require(std::abs(AveragePrecision(records.back().ranking, g) - ap) <= kRationalTolerance,
                "AP trial " + std::to_string(trial));
      map += ap;
      scores.emplace_back(s.data(), s.data() + s.size());
      gold.push_back(gs);
    }
    o.Require(std::abs(MeanAveragePrecision(records) - map / n_records) <= kRationalTolerance,
              "MAP trial " + std::to_string(trial));
    for (double delta : DefaultDeltaGrid()) {
      o.Require(std::abs(F1AtThreshold(records, delta).f1 - oracle::MicroF1(scores, gold, delta)) <=
                    kRationalTolerance,
                "F1 trial " + std::to_string(trial));
    }
  }
  if (o.pass) o.detail = "100 instances each: Spearman, Pearson, AP, MAP, F1 over the delta grid";
  return o;
}

// ------------------------------------------------------------ 4

Outcome OverfitRecovery() {
  Outcome o;
  SyntheticOptions opt;
  opt.n_words = 60;
  opt.n_sememes = 30;
  opt.n_mwes = 50;
  opt.dim = 20;
  opt.seed = 7;
  opt.noise = 0;
  auto problem = fixture::MakeProblem(opt);
  ModelSpec spec;
  spec.kind = ModelKind::kScas;
  Hyperparams h;
  h.dim = 20;
  h.lambda = 0;
  h.lr0 = 0.05;
  h.decay = 0.999;
  h.epochs = 2000;
  h.seed = 3;
  const ModelParams init = InitParams(spec, 20, problem->sememes, 3);
  const TrainState a = Train(init, problem->data, Task::kSimilarity, h);
  const TrainState b = Train(init, problem->data, Task::kSimilarity, h);
  const double loss = a.history.back().train_loss;
  o.Require(loss < kOverfitLoss, "final training loss " + Num(loss));
  o.Require(LossHistoryCsv(a.history) == LossHistoryCsv(b.history), "reruns differ");
  if (o.pass) o.detail = "mean training loss " + Num(loss) + " after 2000 epochs, rerun identical";
  return o;
}

// ------------------------------------------------------------ 5

Outcome SememeTrend() {
  Outcome o;
  int wins = 0;
  std::string losses;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SyntheticOptions opt;
    opt.seed = seed;
    opt.noise = 0.05;
    auto problem = fixture::MakeProblem(opt);
    problem->kb = SplitDataset(problem->kb, SplitRatios{}, seed);
    problem->data.train = problem->kb.splits()->train;
    problem->data.valid = problem->kb.splits()->valid;
    Hyperparams h;
    h.dim = opt.dim;
    h.epochs = 50;
    h.seed = seed;
    double held_out[2];
    int slot = 0;
    for (ModelKind kind : {ModelKind::kScas, ModelKind::kScasS}) {
      ModelSpec spec;
      spec.kind = kind;
      const TrainState state = Train(InitParams(spec, opt.dim, problem->sememes, seed + 100),
                                     problem->data, Task::kSimilarity, h);
      held_out[slot++] = MeanLoss(state.params, problem->data, problem->kb.splits()->test,
                                  Task::kSimilarity, h.k);
    }
    wins += held_out[0] < held_out[1];
  }
  o.Require(wins >= 9, "SCAS better in only " + std::to_string(wins) + "/10 seeds");
  if (o.pass) {
    o.detail = "SCAS beats SCAS-S on held-out loss in " + std::to_string(wins) + "/10 seeds";
  }
  return o;
}

// ------------------------------------------------------------ 6

Outcome RuleRank() {
  Outcome o;
  double worst = 0;
  auto check = [&](const ModelParams& params, const std::string& where) {
    for (CombinationRule rule : kAllRules) {
      const Eigen::MatrixXd delta =
          CompositionMatrixForRule(rule, params) - params.weights.shared_composition;
      const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(delta).singularValues();
      const int h = params.spec.rule_rank[RuleIndex(rule)];
      for (Eigen::Index i = h; i < sv.size(); ++i) {
        worst = std::max(worst, sv(i));
        o.Require(sv(i) < kRankTolerance, where + " " + std::string(RuleLabel(rule)) +
                                              " singular value " + std::to_string(i) +
                                              " = " + Num(sv(i)));
      }
    }
  };
  for (ModelKind kind : {ModelKind::kScasR, ModelKind::kScmsaR}) {
    for (int h : {1, 2, 5}) {
      ModelSpec spec;
      spec.kind = kind;
      spec.rule_rank = {h, h, h, h};
      std::vector<std::string> ids = {"a", "b", "c"};
      check(InitParams(spec, 20, InitRandom(ids, 20, 1, 0.5), 10 + h),
            std::string(ModelKindName(kind)) + " h_r=" + std::to_string(h));
    }
  }
  // Also after training, when U and V have moved.
  SyntheticOptions opt;
  opt.n_mwes = 60;
  opt.seed = 2;
  auto problem = fixture::MakeProblem(opt);
  ModelSpec spec;
  spec.kind = ModelKind::kScmsaR;
  spec.rule_rank = {2, 3, 4, 5};
  Hyperparams hyper;
  hyper.dim = opt.dim;
  hyper.epochs = 3;
  hyper.lr0 = 0.05;
  check(Train(InitParams(spec, opt.dim, problem->sememes, 4), problem->data, Task::kSimilarity,
              hyper)
            .params,
        "trained scmsa_r");
  if (o.pass) o.detail = "largest trailing singular value " + Num(worst);
  return o;
}

// ------------------------------------------------------------ 7

Outcome TrainingInvariants() {
  Outcome o;
  SyntheticOptions opt;
  opt.n_mwes = 80;
  opt.seed = 12;
  auto problem = fixture::MakeProblem(opt);
  problem->kb = SplitDataset(problem->kb, SplitRatios{}, 12);
  problem->data.train = problem->kb.splits()->train;
  problem->data.valid = problem->kb.splits()->valid;
  const Eigen::MatrixXd words_before = problem->synthetic.words.matrix();
  ModelSpec spec;
  spec.kind = ModelKind::kScmsaR;
  Hyperparams h;
  h.dim = opt.dim;
  h.epochs = 25;
  h.seed = 5;
  const ModelParams init = InitParams(spec, opt.dim, problem->sememes, 6);
  bool lr_exact = true;
  const TrainState a = Train(init, problem->data, Task::kSimilarity, h, [&](const TrainState& s) {
    lr_exact = lr_exact && s.lr == h.lr0 * std::pow(0.99, s.epoch);
  });
  const TrainState b = Train(init, problem->data, Task::kSimilarity, h);
  o.Require(problem->synthetic.words.matrix().cwiseEqual(words_before).all(),
            "frozen word embeddings changed");
  o.Require(lr_exact && a.lr == h.lr0 * std::pow(0.99, 25), "learning rate schedule drifted");
  o.Require(LossHistoryCsv(a.history) == LossHistoryCsv(b.history), "library loss CSV differs");

  // The same through the command-line tool.
  const fs::path data = Scratch("c7_data"), r1 = Scratch("c7_a"), r2 = Scratch("c7_b");
  o.Require(RunCli("gen-synthetic --seed 12 --out " + data.string()) == 0, "gen-synthetic failed");
  const std::string words_before_cli = ReadFile(data / "words.vec");
  const std::string args =
      "train --config " + (data / "synthetic.conf").string() + " --model scas --epochs 12 --out ";
  o.Require(RunCli(args + r1.string()) == 0 && RunCli(args + r2.string()) == 0, "train failed");
  if (o.pass) {
    o.Require(ReadFile(r1 / "loss.csv") == ReadFile(r2 / "loss.csv"), "CLI loss.csv bytes differ");
    o.Require(ReadFile(data / "words.vec") == words_before_cli, "words file touched");
  }
  if (o.pass) o.detail = "words bit-identical, lr = lr0*0.99^n, loss CSV bytes identical";
  return o;
}

// ------------------------------------------------------------ 8

Outcome BreakdownParity() {
  Outcome o;
  const fs::path data = Scratch("c8_data"), run = Scratch("c8_run"), eval = Scratch("c8_eval");
  const std::string conf = "--config " + (data / "synthetic.conf").string();
  o.Require(RunCli("gen-synthetic --seed 21 --out " + data.string()) == 0, "gen-synthetic failed");
  o.Require(RunCli("train " + conf +
                   " --model scmsa_r --task sememe --lr0 0.001 --epochs 5 --out " +
                   run.string()) == 0,
            "train failed");
  o.Require(RunCli("eval-sememe " + conf + " --checkpoint " +
                   (run / "checkpoints" / "best").string() + " --out " + eval.string()) == 0,
            "eval-sememe failed");
  if (!o.pass) return o;

  const KbDataset kb = ParseKb(ReadFile(data / "lexicon.tsv"), ReadFile(data / "mwes.tsv"));
  std::vector<std::size_t> indices;
  std::vector<PredictionRecord> records;
  const std::string predictions = ReadFile(eval / "predictions.tsv");
  for (std::string_view line : SplitLines(predictions)) {
    if (IsSkippableLine(line)) continue;
    const auto fields = SplitFields(line, '\t');
    const std::size_t index = *kb.FindMwe(fields[0]);
    SememeSet gold;
    for (std::string_view id : SplitFields(fields[1], ',')) {
      gold.push_back(kb.inventory().IndexOf(id));
    }
    std::sort(gold.begin(), gold.end());
    const auto values = SplitFields(fields[2], ',');
    Eigen::VectorXd scores(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
      ParseDouble(values[i], &scores(static_cast<Eigen::Index>(i)));
    }
    o.Require(gold == kb.mwes()[index].sememes,
              "gold sememes differ for " + std::string(fields[0]));
    indices.push_back(index);
    records.push_back(MakeRecord(std::string(fields[0]), scores, gold));
  }
  std::vector<std::size_t> test;
  const std::string splits = ReadFile(eval / "splits.tsv");
  for (std::string_view line : SplitLines(splits)) {
    if (IsSkippableLine(line)) continue;
    const auto fields = SplitFields(line, '\t');
    if (fields[1] == "test") test.push_back(*kb.FindMwe(fields[0]));
  }
  std::vector<std::size_t> sorted_indices = indices;
  std::sort(sorted_indices.begin(), sorted_indices.end());
  std::sort(test.begin(), test.end());
  o.Require(sorted_indices == test, "predictions do not cover the test split");

  const auto by_scd = BreakdownByScd(kb, indices, records);
  const auto by_rule = BreakdownByRule(kb, indices, records);
  o.Require(BreakdownCsv(by_scd) == ReadFile(eval / "breakdown_scd.csv"), "SCD table differs");
  o.Require(BreakdownCsv(by_rule) == ReadFile(eval / "breakdown_rule.csv"), "rule table differs");

  const auto scd_parts = PartitionByScd(kb, test);
  const auto rule_parts = PartitionByRule(kb, test);
  o.Require(by_scd.size() == scd_parts.size() && by_rule.size() == rule_parts.size(),
            "bucket counts differ from partitions");
  for (const BucketRow& row : by_scd) {
    const int level = row.label.back() - '0';
    o.Require(row.size == scd_parts.at(static_cast<ScdLevel>(level)).size(),
              row.label + " size differs from partition");
  }
  for (const BucketRow& row : by_rule) {
    std::size_t expected = 0;
    for (const auto& [rule, members] : rule_parts) {
      if (RuleDisplayName(rule) == row.label) expected = members.size();
    }
    o.Require(row.size == expected, row.label + " size differs from partition");
  }
  const std::string report = ReadFile(eval / "sememe_report.csv");
  o.Require(report.find("map_x100," + FormatDouble(100 * MeanAveragePrecision(records)) + "\n") !=
                std::string::npos,
            "overall MAP differs");
  if (o.pass) {
    o.detail = std::to_string(records.size()) + " test MWEs, " + std::to_string(by_scd.size()) +
               " SCD and " + std::to_string(by_rule.size()) + " rule buckets identical";
  }
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget;  // seconds, 0 = none
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace sememe_sc::acceptance

int main() {
  using namespace sememe_sc::acceptance;
  const Criterion criteria[] = {
      {1, "SCD exactness", kScdBudget, ScdExactness},
      {2, "gradient suite", kGradBudget, GradientSuite},
      {3, "metric oracles", kMetricBudget, MetricOracles},
      {4, "overfit recovery", kOverfitBudget, OverfitRecovery},
      {5, "sememe-knowledge trend", kTrendBudget, SememeTrend},
      {6, "rule-integration structure", kRankBudget, RuleRank},
      {7, "training-regime invariants", 0, TrainingInvariants},
      {8, "SCD/rule breakdown parity", 0, BreakdownParity},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget > 0 && seconds >= c.budget) {
      outcome.pass = false;
      outcome.detail += " [over the " + Num(c.budget) + " s budget]";
    }
    failures += !outcome.pass;
    std::printf("%s  %d. %-28s %s (%.2f s)\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str(), seconds);
  }
  std::printf("%d/8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}

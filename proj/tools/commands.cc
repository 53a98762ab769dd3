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

#include "commands.h"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "sememe_sc/checkpoint.h"
#include "sememe_sc/composition.h"
#include "sememe_sc/embedding_store.h"
#include "sememe_sc/errors.h"
#include "sememe_sc/evaluation.h"
#include "sememe_sc/sememe_kb.h"
#include "sememe_sc/synthetic.h"
#include "sememe_sc/text_io.h"
#include "sememe_sc/training.h"

namespace sememe_sc::cli {
namespace fs = std::filesystem;

namespace {

constexpr double kGradCheckTolerance = 1e-4;
constexpr const char* kRunConfigFile = "run_config.txt";

// Echoes to stderr and keeps a copy for the run directory.
class RunLog {
 public:
  void Info(const std::string& line) {
    std::cerr << line << '\n';
    text_ += line + '\n';
  }
  void Save(const std::optional<fs::path>& out) const {
    if (out) WriteFile(*out / "log.txt", text_);
  }

 private:
  std::string text_;
};

std::string Join(const std::vector<std::string>& items, std::string_view sep,
                 std::size_t limit = std::numeric_limits<std::size_t>::max()) {
  std::string out;
  for (std::size_t i = 0; i < items.size() && i < limit; ++i) {
    if (i) out += sep;
    out += items[i];
  }
  if (items.size() > limit) {
    out += std::string(sep) + "... (" + std::to_string(items.size()) + " total)";
  }
  return out;
}

std::string Fixed(double value, int digits = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << value;
  return os.str();
}

ModelSpec SpecFrom(const Config& config) {
  ModelSpec spec;
  spec.kind = ParseModelKind(config.String("model", "scas"));
  spec.rule_mode = ParseRuleMode(config.String("rule-mode", "lowrank"));
  const long rank = config.Int("rule-rank", 5);
  if (rank < 1) throw DataError("rule-rank must be >= 1");
  spec.rule_rank.fill(static_cast<int>(rank));
  spec.shared_attention = config.Bool("shared-attention", true);
  return spec;
}

Task TaskFrom(const Config& config) {
  return ParseTask(config.String("task", "similarity"));
}

std::size_t PositiveSize(const Config& config, std::string_view key, long fallback) {
  const long value = config.Int(key, fallback);
  if (value < 1) throw DataError("setting '" + std::string(key) + "' must be positive");
  return static_cast<std::size_t>(value);
}

Hyperparams HyperFrom(const Config& config, Task task) {
  Hyperparams h;
  h.dim = PositiveSize(config, "dim", static_cast<long>(h.dim));
  h.rule_rank = static_cast<int>(config.Int("rule-rank", h.rule_rank));
  h.lambda = config.Double("lambda", h.lambda);
  h.k = config.Double("k", h.k);
  h.lr0 = config.Double("lr0", DefaultLearningRate(task));
  h.decay = config.Double("decay", h.decay);
  h.epochs = static_cast<int>(config.Int("epochs", h.epochs));
  h.seed = config.Seed();
  h.batch_size = PositiveSize(config, "batch-size", static_cast<long>(h.batch_size));
  ValidateHyperparams(h);
  return h;
}

SplitRatios RatiosFrom(const Config& config) {
  const std::vector<std::string> parts = config.List("split");
  if (parts.empty()) return SplitRatios{};
  if (parts.size() != 3) throw DataError("split needs three ratios: train,valid,test");
  unsigned values[3];
  for (int i = 0; i < 3; ++i) {
    const long v = std::stol(parts[i]);
    if (v < 1) throw DataError("split ratios must be positive integers");
    values[i] = static_cast<unsigned>(v);
  }
  return SplitRatios{values[0], values[1], values[2]};
}

// Prefixes data errors with the file they came from.
template <typename Fn>
auto WithFile(const fs::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

KbDataset LoadKb(const Config& config) {
  const fs::path lexicon = config.RequiredPath("lexicon");
  const fs::path mwes = config.RequiredPath("mwes");
  const std::string lex_text = ReadFile(lexicon);
  const std::string mwe_text = ReadFile(mwes);
  KbDataset kb = WithFile(lexicon.string() + " + " + mwes.string(),
                          [&] { return ParseKb(lex_text, mwe_text); });
  const long min_freq = config.Int("min-sememe-freq", 1);
  if (min_freq < 1) throw DataError("min-sememe-freq must be >= 1");
  if (min_freq > 1) kb = FilterSememes(kb, static_cast<int>(min_freq));
  return kb;
}

EmbeddingTable LoadTable(const fs::path& path, std::size_t dim) {
  return WithFile(path, [&] { return LoadEmbeddings(ReadFile(path), dim); });
}

// The MWEs a task trains and evaluates on, as their own KB so that splits
// are reproducible from the config alone.
KbDataset RestrictMwes(const KbDataset& kb, const std::function<bool(const MweEntry&)>& keep) {
  std::vector<MweEntry> kept;
  for (const MweEntry& m : kb.mwes()) {
    if (keep(m)) kept.push_back(m);
  }
  return KbDataset(kb.inventory(), kb.lexicon(), std::move(kept));
}

KbDataset SememeTaskKb(const KbDataset& kb) {
  return RestrictMwes(kb, [](const MweEntry& m) { return !m.sememes.empty(); });
}

std::set<std::string> SimilarityTokens(const std::vector<fs::path>& datasets) {
  std::set<std::string> tokens;
  for (const fs::path& path : datasets) {
    const std::string text = ReadFile(path);
    for (const SimilarityPair& p : WithFile(path, [&] { return ParseSimilarityPairs(text); })) {
      tokens.insert(p.token1);
      tokens.insert(p.token2);
    }
  }
  return tokens;
}

void RequireCoverage(const KbDataset& kb, const EmbeddingTable& words,
                     const EmbeddingTable* references) {
  std::set<std::string> missing_words;
  std::vector<std::string> missing_refs;
  for (const MweEntry& m : kb.mwes()) {
    for (const std::string* c : {&m.constituent1, &m.constituent2}) {
      if (!words.Contains(*c)) missing_words.insert(*c);
    }
    if (references != nullptr && !references->Contains(m.token)) missing_refs.push_back(m.token);
  }
  std::string message;
  if (!missing_words.empty()) {
    message += "no word embedding for: " +
               Join({missing_words.begin(), missing_words.end()}, ", ", 20);
  }
  if (!missing_refs.empty()) {
    if (!message.empty()) message += "; ";
    message += "no reference MWE embedding for: " + Join(missing_refs, ", ", 20);
  }
  if (!message.empty()) throw DataError(message);
}

// Model parameters for evaluation: the checkpoint when given, otherwise an
// untrained ADD or MUL baseline over the pretrained sememe table.
ModelParams EvalParams(const Config& config, const KbDataset& kb, std::optional<Task> required_task,
                       RunLog& log) {
  if (const auto dir = config.OptionalPath("checkpoint")) {
    Checkpoint ckpt = LoadCheckpoint(*dir);
    if (config.Has("model") &&
        ParseModelKind(config.String("model", "")) != ckpt.params.spec.kind) {
      throw DataError("checkpoint holds model '" +
                      std::string(ModelKindName(ckpt.params.spec.kind)) + "' but config says '" +
                      config.String("model", "") + "'");
    }
    if (config.Has("rule-mode") && UsesRules(ckpt.params.spec.kind) &&
        ParseRuleMode(config.String("rule-mode", "")) != ckpt.params.spec.rule_mode) {
      throw DataError("checkpoint rule mode differs from config");
    }
    if (config.Has("dim") && PositiveSize(config, "dim", 0) != ckpt.params.dim) {
      throw DataError("checkpoint dimension differs from config");
    }
    if (required_task && ckpt.task != *required_task) {
      throw DataError("checkpoint was trained for the " + std::string(TaskName(ckpt.task)) +
                      " task");
    }
    if (ckpt.params.sememes.tokens() != kb.inventory().ids()) {
      throw DataError("checkpoint sememe table does not match the KB inventory");
    }
    log.Info("loaded checkpoint " + dir->string() + " (" +
             std::string(ModelKindName(ckpt.params.spec.kind)) + ", epoch " +
             std::to_string(ckpt.epoch) + ")");
    return std::move(ckpt.params);
  }
  const ModelSpec spec = SpecFrom(config);
  if (UsesCompositionMatrix(spec.kind)) {
    throw DataError("model '" + std::string(ModelKindName(spec.kind)) + "' needs --checkpoint");
  }
  const std::size_t dim = PositiveSize(config, "dim", 200);
  std::optional<EmbeddingTable> pretrained;
  if (const auto path = config.OptionalPath("sememe-embeddings")) {
    pretrained = LoadTable(*path, dim);
  }
  std::vector<std::string> missing;
  EmbeddingTable sememes = AlignOrInit(kb.inventory().ids(), pretrained ? &*pretrained : nullptr,
                                       dim, config.Seed() + 2, 0.01, &missing);
  if (!missing.empty()) log.Info(std::to_string(missing.size()) + " sememes start random");
  return InitParams(spec, dim, std::move(sememes), config.Seed() + 1);
}

fs::path PrepareOut(const Config& config) {
  const fs::path out = config.RequiredPath("out", /*must_exist=*/false);
  fs::create_directories(out);
  WriteFile(out / kRunConfigFile, config.Snapshot());
  return out;
}

std::optional<fs::path> PrepareOptionalOut(const Config& config) {
  if (!config.Has("out")) return std::nullopt;
  return PrepareOut(config);
}

std::string SplitsTsv(const KbDataset& kb) {
  std::string out = "# mwe<TAB>split\n";
  const Splits& s = *kb.splits();
  const std::pair<const char*, const std::vector<std::size_t>*> parts[] = {
      {"train", &s.train}, {"valid", &s.valid}, {"test", &s.test}};
  for (const auto& [name, indices] : parts) {
    for (std::size_t i : *indices) out += kb.mwes()[i].token + '\t' + name + '\n';
  }
  return out;
}

// ---------------------------------------------------------------- scd

std::map<std::string, double> ParseGoldScd(const fs::path& path) {
  std::map<std::string, double> gold;
  const std::string text = ReadFile(path);
  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (IsSkippableLine(lines[i])) continue;
    const auto fields = SplitFields(lines[i], '\t');
    double value = 0;
    if (fields.size() != 2 || !ParseDouble(fields[1], &value)) {
      throw DataError(path.string() + ": line " + std::to_string(i + 1) +
                      ": expected token<TAB>score");
    }
    if (!gold.emplace(std::string(fields[0]), value).second) {
      throw DataError(path.string() + ": line " + std::to_string(i + 1) + ": duplicate token");
    }
  }
  return gold;
}

int CmdScd(const Config& config) {
  RunLog log;
  const KbDataset kb = LoadKb(config);
  std::vector<std::string> unannotated;
  for (const MweEntry& m : kb.mwes()) {
    if (m.sememes.empty()) unannotated.push_back(m.token);
  }
  if (!unannotated.empty()) {
    throw DataError("MWEs without sememe annotations: " + Join(unannotated, ", ", 20));
  }
  std::optional<std::map<std::string, double>> gold;
  if (const auto path = config.OptionalPath("gold-scd")) {
    gold = ParseGoldScd(*path);
    for (const auto& [token, _] : *gold) {
      if (!kb.FindMwe(token)) throw DataError(path->string() + ": unknown MWE '" + token + "'");
    }
  }
  const std::optional<fs::path> out = PrepareOptionalOut(config);

  std::string table = "# mwe<TAB>scd\n";
  std::array<std::size_t, 4> counts{};
  std::vector<double> computed, human;
  for (std::size_t i = 0; i < kb.mwes().size(); ++i) {
    const int scd = ScdValue(MweScd(kb, i));
    ++counts[static_cast<std::size_t>(scd)];
    table += kb.mwes()[i].token + '\t' + std::to_string(scd) + '\n';
    if (gold) {
      if (const auto it = gold->find(kb.mwes()[i].token); it != gold->end()) {
        computed.push_back(scd);
        human.push_back(it->second);
      }
    }
  }
  std::cout << table;
  log.Info("SCD counts 0/1/2/3: " + std::to_string(counts[0]) + '/' + std::to_string(counts[1]) +
           '/' + std::to_string(counts[2]) + '/' + std::to_string(counts[3]));
  if (out) WriteFile(*out / "scd.tsv", table);
  if (gold) {
    const double pearson = Pearson(computed, human);
    const double spearman = Spearman(computed, human);
    const std::string report = "metric,value\npearson," + FormatDouble(pearson) + "\nspearman," +
                               FormatDouble(spearman) + "\nn," + std::to_string(computed.size()) +
                               '\n';
    std::cout << report;
    if (out) WriteFile(*out / "scd_correlation.csv", report);
  }
  log.Save(out);
  return kExitOk;
}

// ---------------------------------------------------------------- train

int CmdTrain(const Config& config) {
  RunLog log;
  const ModelSpec spec = SpecFrom(config);
  const Task task = TaskFrom(config);
  const Hyperparams hyper = HyperFrom(config, task);
  const SplitRatios ratios = RatiosFrom(config);
  const std::uint64_t seed = config.Seed();
  config.RequiredPath("out", /*must_exist=*/false);

  const KbDataset full = LoadKb(config);
  const EmbeddingTable words = LoadTable(config.RequiredPath("embeddings"), hyper.dim);
  std::optional<EmbeddingTable> pretrained;
  if (const auto path = config.OptionalPath("sememe-embeddings")) {
    pretrained = LoadTable(*path, hyper.dim);
  }
  std::optional<EmbeddingTable> references;
  std::vector<std::string> excluded;
  KbDataset kb;
  if (task == Task::kSimilarity) {
    references = LoadTable(config.RequiredPath("mwe-embeddings"), hyper.dim);
    const std::set<std::string> eval_tokens = SimilarityTokens(config.PathList("similarity"));
    kb = RestrictMwes(full, [&](const MweEntry& m) {
      if (!eval_tokens.count(m.token)) return true;
      excluded.push_back(m.token);
      return false;
    });
  } else {
    kb = SememeTaskKb(full);
  }
  if (kb.mwes().size() < 3) {
    throw DataError("only " + std::to_string(kb.mwes().size()) + " MWEs usable for training");
  }
  RequireCoverage(kb, words, references ? &*references : nullptr);
  kb = SplitDataset(kb, ratios, seed);

  std::vector<std::string> random_sememes;
  EmbeddingTable sememes = AlignOrInit(kb.inventory().ids(), pretrained ? &*pretrained : nullptr,
                                       hyper.dim, seed + 2, 0.01, &random_sememes);
  ModelParams initial = InitParams(spec, hyper.dim, std::move(sememes), seed + 1);

  const fs::path out = PrepareOut(config);
  log.Info("model " + std::string(ModelKindName(spec.kind)) + ", task " +
           std::string(TaskName(task)) + ", d=" + std::to_string(hyper.dim) + ", " +
           std::to_string(kb.splits()->train.size()) + "/" +
           std::to_string(kb.splits()->valid.size()) + "/" +
           std::to_string(kb.splits()->test.size()) + " train/valid/test MWEs");
  if (!excluded.empty()) {
    log.Info("excluded " + std::to_string(excluded.size()) +
             " MWEs that appear in similarity datasets: " + Join(excluded, ", ", 20));
    WriteFile(out / "excluded_mwes.txt", Join(excluded, "\n") + "\n");
  }
  if (!random_sememes.empty()) {
    log.Info(std::to_string(random_sememes.size()) +
             " sememes without pretrained vectors start random");
  }
  WriteFile(out / "splits.tsv", SplitsTsv(kb));

  TrainingSet data;
  data.kb = &kb;
  data.words = &words;
  data.references = references ? &*references : nullptr;
  data.train = kb.splits()->train;
  data.valid = kb.splits()->valid;

  double best_valid = std::numeric_limits<double>::infinity();
  int best_epoch = 0;
  try {
    const TrainState final_state =
        Train(std::move(initial), data, task, hyper, [&](const TrainState& state) {
          const EpochRecord& r = state.history.back();
          log.Info("epoch " + std::to_string(r.epoch) + " lr " + FormatDouble(r.lr) + " train " +
                   FormatDouble(r.train_loss) + " valid " + FormatDouble(r.valid_loss));
          if (r.valid_loss < best_valid) {
            best_valid = r.valid_loss;
            best_epoch = r.epoch;
            SaveCheckpoint(out / "checkpoints" / "best",
                           Checkpoint{state.params, task, state.epoch, state.lr});
          }
        });
    SaveCheckpoint(out / "checkpoints" / "final",
                   Checkpoint{final_state.params, task, final_state.epoch, final_state.lr});
    if (best_epoch == 0) {
      SaveCheckpoint(out / "checkpoints" / "best",
                     Checkpoint{final_state.params, task, final_state.epoch, final_state.lr});
    }
    WriteFile(out / "loss.csv", LossHistoryCsv(final_state.history));
    log.Info("best validation loss " + FormatDouble(best_valid) + " at epoch " +
             std::to_string(best_epoch));
  } catch (const NumericalError& e) {
    log.Info(std::string("numerical failure: ") + e.what());
    log.Save(out);
    throw;
  }
  log.Save(out);
  return kExitOk;
}

// ---------------------------------------------------------------- eval-sim

int CmdEvalSim(const Config& config) {
  RunLog log;
  const std::vector<fs::path> datasets = config.PathList("similarity");
  if (datasets.empty()) throw DataError("missing required setting 'similarity'");
  const bool allow_missing = config.Bool("allow-missing", false);
  const KbDataset kb = LoadKb(config);
  const ModelParams params = EvalParams(config, kb, std::nullopt, log);
  const EmbeddingTable words = LoadTable(config.RequiredPath("embeddings"), params.dim);
  std::vector<std::pair<std::string, std::vector<SimilarityPair>>> pairs;
  for (const fs::path& path : datasets) {
    const std::string text = ReadFile(path);
    pairs.emplace_back(path.filename().string(),
                       WithFile(path, [&] { return ParseSimilarityPairs(text); }));
  }
  std::vector<std::pair<std::string, SimilarityReport>> reports;
  for (const auto& [name, p] : pairs) {
    reports.emplace_back(name, EvaluateSimilarity(params, kb, words, p, allow_missing));
  }
  const std::optional<fs::path> out = PrepareOptionalOut(config);
  std::string csv = "dataset,pairs,scored,spearman_x100\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const SimilarityReport& r = reports[i].second;
    csv += reports[i].first + ',' + std::to_string(pairs[i].second.size()) + ',' +
           std::to_string(r.n_scored) + ',' + FormatDouble(r.spearman_x100) + '\n';
    if (!r.excluded.empty()) {
      log.Info(reports[i].first + ": skipped " + std::to_string(r.excluded.size()) +
               " pairs: " + Join(r.excluded, ", ", 20));
    }
  }
  std::cout << csv;
  if (out) WriteFile(*out / "similarity_report.csv", csv);
  log.Save(out);
  return kExitOk;
}

// ---------------------------------------------------------------- eval-sememe

std::string PredictionsTsv(const KbDataset& kb, const std::vector<PredictionRecord>& records) {
  std::string out = "# mwe<TAB>gold sememes<TAB>scores in inventory order\n";
  for (const PredictionRecord& r : records) {
    std::vector<std::string> gold, scores;
    for (std::size_t s : r.gold) gold.push_back(kb.inventory().id(s));
    for (Eigen::Index i = 0; i < r.scores.size(); ++i) scores.push_back(FormatDouble(r.scores(i)));
    out += r.token + '\t' + Join(gold, ",") + '\t' + Join(scores, ",") + '\n';
  }
  return out;
}

int CmdEvalSememe(const Config& config) {
  RunLog log;
  const SplitRatios ratios = RatiosFrom(config);
  const KbDataset full = LoadKb(config);
  const ModelParams params = EvalParams(config, full, Task::kSememe, log);
  const EmbeddingTable words = LoadTable(config.RequiredPath("embeddings"), params.dim);
  KbDataset kb = SememeTaskKb(full);
  if (kb.mwes().size() < 3) throw DataError("fewer than 3 annotated MWEs");
  RequireCoverage(kb, words, nullptr);
  kb = SplitDataset(kb, ratios, config.Seed());
  const Splits& splits = *kb.splits();

  const auto valid = PredictRecords(params, kb, words, splits.valid);
  const auto test = PredictRecords(params, kb, words, splits.test);
  const std::vector<double> grid = DefaultDeltaGrid();
  const double delta = TuneDelta(valid, grid);
  const Prf prf = F1AtThreshold(test, delta);
  const double map = MeanAveragePrecision(test);
  const auto by_scd = BreakdownByScd(kb, splits.test, test);
  const auto by_rule = BreakdownByRule(kb, splits.test, test);

  const std::optional<fs::path> out = PrepareOptionalOut(config);
  const std::string report = "metric,value\nmap_x100," + FormatDouble(100 * map) + "\nf1_x100," +
                             FormatDouble(100 * prf.f1) + "\nprecision_x100," +
                             FormatDouble(100 * prf.precision) + "\nrecall_x100," +
                             FormatDouble(100 * prf.recall) + "\ndelta," + FormatDouble(delta) +
                             "\nn_test," + std::to_string(test.size()) + '\n';
  std::cout << report << '\n' << BreakdownCsv(by_scd) << '\n' << BreakdownCsv(by_rule);
  log.Info("MAP " + Fixed(100 * map, 1) + ", F1 " + Fixed(100 * prf.f1, 1) + " at delta " +
           FormatDouble(delta));
  if (out) {
    WriteFile(*out / "sememe_report.csv", report);
    WriteFile(*out / "breakdown_scd.csv", BreakdownCsv(by_scd));
    WriteFile(*out / "breakdown_rule.csv", BreakdownCsv(by_rule));
    WriteFile(*out / "predictions.tsv", PredictionsTsv(kb, test));
    WriteFile(*out / "splits.tsv", SplitsTsv(kb));
  }
  log.Save(out);
  return kExitOk;
}

// ---------------------------------------------------------------- gen-synthetic

int CmdGenSynthetic(const Config& config) {
  RunLog log;
  SyntheticOptions o;
  o.n_words = PositiveSize(config, "n-words", static_cast<long>(o.n_words));
  o.n_sememes = PositiveSize(config, "n-sememes", static_cast<long>(o.n_sememes));
  o.n_mwes = PositiveSize(config, "n-mwes", static_cast<long>(o.n_mwes));
  o.dim = PositiveSize(config, "dim", static_cast<long>(o.dim));
  o.seed = config.Seed();
  o.noise = config.Double("noise", o.noise);
  o.max_word_sememes =
      PositiveSize(config, "max-word-sememes", static_cast<long>(o.max_word_sememes));
  const long n_pairs = config.Int("n-similarity-pairs", static_cast<long>(o.n_similarity_pairs));
  if (n_pairs < 0) throw DataError("n-similarity-pairs must be non-negative");
  o.n_similarity_pairs = static_cast<std::size_t>(n_pairs);
  o.scd_label_noise = config.Double("scd-label-noise", o.scd_label_noise);
  if (const auto mix = config.List("scd-mixture"); !mix.empty()) {
    if (mix.size() != 4) throw DataError("scd-mixture needs four weights");
    for (std::size_t i = 0; i < 4; ++i) {
      if (!ParseDouble(mix[i], &o.scd_mixture[i])) throw DataError("scd-mixture: bad weight");
    }
  }
  if (o.noise < 0 || o.scd_label_noise < 0) throw DataError("noise levels must be non-negative");
  config.RequiredPath("out", /*must_exist=*/false);
  const SyntheticData data = GenerateSynthetic(o);

  const fs::path out = PrepareOut(config);
  WriteFile(out / "lexicon.tsv", data.lexicon_text);
  WriteFile(out / "mwes.tsv", data.mwe_text);
  WriteFile(out / "words.vec", WriteEmbeddings(data.words));
  WriteFile(out / "sememes.vec", WriteEmbeddings(data.sememes));
  WriteFile(out / "mwe_refs.vec", WriteEmbeddings(data.references));
  WriteFile(out / "similarity.tsv", data.similarity_text);
  WriteFile(out / "gold_scd.tsv", data.gold_scd_text);
  WriteFile(out / "synthetic.conf",
            "# Inputs for train / eval-sim / eval-sememe / scd on this dataset.\n"
            "lexicon=lexicon.tsv\nmwes=mwes.tsv\nembeddings=words.vec\n"
            "sememe-embeddings=sememes.vec\nmwe-embeddings=mwe_refs.vec\n"
            "similarity=similarity.tsv\ngold-scd=gold_scd.tsv\ndim=" +
                std::to_string(o.dim) + "\n");
  log.Info("wrote " + std::to_string(o.n_words) + " words, " + std::to_string(o.n_sememes) +
           " sememes, " + std::to_string(o.n_mwes) + " MWEs to " + out.string());
  log.Save(out);
  return kExitOk;
}

// ---------------------------------------------------------------- gradcheck

int CmdGradcheck(const Config& config) {
  RunLog log;
  std::vector<ModelKind> kinds;
  for (const std::string& name : config.List("models")) kinds.push_back(ParseModelKind(name));
  if (kinds.empty() && config.Has("model")) {
    kinds.push_back(ParseModelKind(config.String("model", "")));
  }
  if (kinds.empty()) kinds.assign(kAllModelKinds.begin(), kAllModelKinds.end());
  std::vector<Task> tasks;
  for (const std::string& name : config.List("tasks")) tasks.push_back(ParseTask(name));
  if (tasks.empty() && config.Has("task")) tasks.push_back(TaskFrom(config));
  if (tasks.empty()) tasks = {Task::kSimilarity, Task::kSememe};
  ModelSpec spec = SpecFrom(config);
  const std::uint64_t seed = config.Seed();
  const std::optional<fs::path> out = PrepareOptionalOut(config);

  std::string csv = "model,task,max_relative_error,checked,status\n";
  bool all_pass = true;
  for (ModelKind kind : kinds) {
    spec.kind = kind;
    for (Task task : tasks) {
      const GradCheckResult r = GradCheck(spec, task, seed);
      const bool pass = r.max_relative_error < kGradCheckTolerance;
      all_pass = all_pass && pass;
      csv += std::string(ModelKindName(kind)) + ',' + std::string(TaskName(task)) + ',' +
             FormatDouble(r.max_relative_error) + ',' + std::to_string(r.n_checked) + ',' +
             (pass ? "pass" : "FAIL") + '\n';
    }
  }
  std::cout << csv;
  if (out) WriteFile(*out / "gradcheck.csv", csv);
  log.Save(out);
  return all_pass ? kExitOk : kExitNumerical;
}

}  // namespace

const std::vector<CommandInfo>& Commands() {
  static const std::vector<CommandInfo> commands = {
      {"scd", "compute SC degrees; correlate with human labels when given",
       {"seed", "out", "model", "task", "rule-mode", "lexicon", "mwes", "gold-scd",
        "min-sememe-freq"},
       CmdScd},
      {"train", "train a composition model for similarity or sememe prediction",
       {"seed", "out", "model", "task", "rule-mode", "lexicon", "mwes", "embeddings",
        "sememe-embeddings", "mwe-embeddings", "similarity", "min-sememe-freq", "split", "dim",
        "rule-rank", "shared-attention", "lambda", "k", "lr0", "decay", "epochs", "batch-size"},
       CmdTrain},
      {"eval-sim", "Spearman correlation on MWE similarity datasets",
       {"seed", "out", "model", "task", "rule-mode", "lexicon", "mwes", "embeddings",
        "sememe-embeddings", "similarity", "checkpoint", "min-sememe-freq", "dim",
        "allow-missing"},
       CmdEvalSim},
      {"eval-sememe", "MAP / F1 of sememe prediction with SCD and rule breakdowns",
       {"seed", "out", "model", "task", "rule-mode", "lexicon", "mwes", "embeddings",
        "sememe-embeddings", "checkpoint", "min-sememe-freq", "split", "dim"},
       CmdEvalSememe},
      {"gen-synthetic", "write a synthetic KB, embeddings and evaluation files",
       {"seed", "out", "model", "task", "rule-mode", "n-words", "n-sememes", "n-mwes", "dim",
        "noise", "scd-mixture", "max-word-sememes", "n-similarity-pairs", "scd-label-noise"},
       CmdGenSynthetic},
      {"gradcheck", "compare analytic gradients with central differences",
       {"seed", "out", "model", "task", "rule-mode", "models", "tasks", "rule-rank",
        "shared-attention"},
       CmdGradcheck},
  };
  return commands;
}

int RunCommand(const CommandInfo& command, const Config& config) {
  try {
    return command.run(config);
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDataError;
  }
}

}  // namespace sememe_sc::cli

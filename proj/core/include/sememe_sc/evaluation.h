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

// Metrics and evaluation protocols: cosine similarity, Pearson / Spearman
// correlation, ranked sememe prediction (AP / MAP), thresholded micro-F1 with
// threshold tuning, and per-bucket breakdowns by SCD and combination rule.

#ifndef SEMEME_SC_EVALUATION_H_
#define SEMEME_SC_EVALUATION_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sememe_sc/composition.h"
#include "sememe_sc/embedding_store.h"
#include "sememe_sc/sememe_kb.h"

namespace sememe_sc {

// Throws PreconditionError for zero vectors or mismatched sizes.
double Cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// 1-based ranks; tied values share the mean of the positions they occupy.
std::vector<double> AverageRanks(std::span<const double> values);

// Both need equal lengths >= 2 and non-constant sequences.
double Pearson(std::span<const double> xs, std::span<const double> ys);
double Spearman(std::span<const double> xs, std::span<const double> ys);

struct SimilarityPair {
  std::string token1;
  std::string token2;
  double human_score = 0;
};

// token1<TAB>token2<TAB>score per line; '#' comments and blank lines skipped.
std::vector<SimilarityPair> ParseSimilarityPairs(std::string_view text);

struct SimilarityReport {
  double spearman_x100 = 0;
  std::size_t n_scored = 0;
  std::vector<std::string> excluded;  // pairs with an uncomposable token
};

// Composes both MWEs of each pair with the model and correlates their cosine
// similarity with the human scores. Pairs naming tokens that are not MWEs of
// `kb` raise PreconditionError unless `allow_missing` is set, in which case
// they are listed in `excluded`.
SimilarityReport EvaluateSimilarity(const ModelParams& params, const KbDataset& kb,
                                    const EmbeddingTable& words,
                                    std::span<const SimilarityPair> pairs,
                                    bool allow_missing = false);

struct PredictionRecord {
  std::string token;
  Eigen::VectorXd scores;            // one per sememe, inventory order
  std::vector<std::size_t> ranking;  // by descending score, ties by position
  SememeSet gold;
};

PredictionRecord MakeRecord(std::string token, Eigen::VectorXd scores, SememeSet gold);

// Scores every listed MWE with the tied classifier on its composed embedding.
std::vector<PredictionRecord> PredictRecords(const ModelParams& params,
                                             const KbDataset& kb,
                                             const EmbeddingTable& words,
                                             std::span<const std::size_t> mwe_indices);

double AveragePrecision(std::span<const std::size_t> ranking, const SememeSet& gold);
double MeanAveragePrecision(std::span<const PredictionRecord> records);

struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// Predicts {i : score_i > delta} and micro-averages over all records.
Prf F1AtThreshold(std::span<const PredictionRecord> records, double delta);

// 0.05, 0.10, ..., 0.95
std::vector<double> DefaultDeltaGrid();

// Grid value with the best F1; ties go to the smaller delta.
double TuneDelta(std::span<const PredictionRecord> records, std::span<const double> grid);

struct BucketRow {
  std::string label;
  std::size_t size = 0;
  double map = 0;
  std::optional<double> mean_scd;  // rule breakdown only
};

// `records[i]` must belong to MWE `mwe_indices[i]`. Empty buckets are omitted.
std::vector<BucketRow> BreakdownByScd(const KbDataset& kb,
                                      std::span<const std::size_t> mwe_indices,
                                      std::span<const PredictionRecord> records);
std::vector<BucketRow> BreakdownByRule(const KbDataset& kb,
                                       std::span<const std::size_t> mwe_indices,
                                       std::span<const PredictionRecord> records);

// bucket,size,map_x100[,average_scd]
std::string BreakdownCsv(const std::vector<BucketRow>& rows);

}  // namespace sememe_sc

#endif  // SEMEME_SC_EVALUATION_H_

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

#include "sememe_sc/evaluation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "sememe_sc/errors.h"
#include "sememe_sc/text_io.h"
#include "sememe_sc/training.h"

namespace sememe_sc {

double Cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size()) throw PreconditionError("cosine: dimension mismatch");
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0 || nv == 0) throw PreconditionError("cosine of a zero vector");
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share rank mean((i+1)..(j+1)).
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double Pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw PreconditionError("correlation: length mismatch");
  if (xs.size() < 2) throw PreconditionError("correlation needs at least 2 points");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) {
    throw PreconditionError("correlation is undefined for a constant sequence");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double Spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw PreconditionError("correlation: length mismatch");
  const std::vector<double> rx = AverageRanks(xs);
  const std::vector<double> ry = AverageRanks(ys);
  return Pearson(rx, ry);
}

std::vector<SimilarityPair> ParseSimilarityPairs(std::string_view text) {
  std::vector<SimilarityPair> pairs;
  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (IsSkippableLine(lines[i])) continue;
    const auto fields = SplitFields(lines[i], '\t');
    if (fields.size() != 3) {
      throw DataError("similarity: expected 3 tab-separated fields, got " +
                          std::to_string(fields.size()),
                      i + 1);
    }
    SimilarityPair pair{std::string(fields[0]), std::string(fields[1]), 0.0};
    if (!ParseDouble(fields[2], &pair.human_score) || !std::isfinite(pair.human_score)) {
      throw DataError("similarity: bad score '" + std::string(fields[2]) + "'", i + 1);
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

SimilarityReport EvaluateSimilarity(const ModelParams& params, const KbDataset& kb,
                                    const EmbeddingTable& words,
                                    std::span<const SimilarityPair> pairs,
                                    bool allow_missing) {
  SimilarityReport report;
  std::vector<double> model_scores;
  std::vector<double> human_scores;
  std::unordered_map<std::string, Eigen::VectorXd> composed;
  auto compose = [&](const std::string& token) -> const Eigen::VectorXd* {
    if (auto it = composed.find(token); it != composed.end()) return &it->second;
    const auto index = kb.FindMwe(token);
    if (!index) return nullptr;
    const MweEntry& mwe = kb.mwes()[*index];
    if (!words.Contains(mwe.constituent1) || !words.Contains(mwe.constituent2)) {
      return nullptr;
    }
    Eigen::VectorXd p = Forward(params, MakeInput(kb, words, *index)).p;
    return &composed.emplace(token, std::move(p)).first->second;
  };
  for (const SimilarityPair& pair : pairs) {
    const Eigen::VectorXd* a = compose(pair.token1);
    const Eigen::VectorXd* b = compose(pair.token2);
    if (a == nullptr || b == nullptr) {
      const std::string label = pair.token1 + "\t" + pair.token2;
      if (!allow_missing) throw PreconditionError("uncomposable pair: " + label);
      report.excluded.push_back(label);
      continue;
    }
    model_scores.push_back(Cosine(*a, *b));
    human_scores.push_back(pair.human_score);
  }
  report.n_scored = model_scores.size();
  report.spearman_x100 = 100.0 * Spearman(model_scores, human_scores);
  return report;
}

PredictionRecord MakeRecord(std::string token, Eigen::VectorXd scores, SememeSet gold) {
  PredictionRecord record;
  record.token = std::move(token);
  record.ranking.resize(static_cast<std::size_t>(scores.size()));
  std::iota(record.ranking.begin(), record.ranking.end(), 0);
  std::stable_sort(record.ranking.begin(), record.ranking.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores(static_cast<Eigen::Index>(a)) >
                            scores(static_cast<Eigen::Index>(b));
                   });
  record.scores = std::move(scores);
  record.gold = std::move(gold);
  return record;
}

std::vector<PredictionRecord> PredictRecords(const ModelParams& params,
                                             const KbDataset& kb,
                                             const EmbeddingTable& words,
                                             std::span<const std::size_t> mwe_indices) {
  std::vector<PredictionRecord> records;
  records.reserve(mwe_indices.size());
  for (std::size_t i : mwe_indices) {
    const Eigen::VectorXd p = Forward(params, MakeInput(kb, words, i)).p;
    records.push_back(MakeRecord(kb.mwes()[i].token,
                                 PredictSememes(p, params.sememes.matrix()),
                                 kb.mwes()[i].sememes));
  }
  return records;
}

double AveragePrecision(std::span<const std::size_t> ranking, const SememeSet& gold) {
  if (gold.empty()) throw PreconditionError("average precision needs gold labels");
  double sum = 0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < ranking.size(); ++k) {
    if (std::binary_search(gold.begin(), gold.end(), ranking[k])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  return sum / static_cast<double>(gold.size());
}

double MeanAveragePrecision(std::span<const PredictionRecord> records) {
  if (records.empty()) throw PreconditionError("MAP over zero records");
  double sum = 0;
  for (const PredictionRecord& r : records) sum += AveragePrecision(r.ranking, r.gold);
  return sum / static_cast<double>(records.size());
}

Prf F1AtThreshold(std::span<const PredictionRecord> records, double delta) {
  std::size_t tp = 0, predicted = 0, actual = 0;
  for (const PredictionRecord& r : records) {
    actual += r.gold.size();
    for (Eigen::Index i = 0; i < r.scores.size(); ++i) {
      if (r.scores(i) > delta) {
        ++predicted;
        if (std::binary_search(r.gold.begin(), r.gold.end(), static_cast<std::size_t>(i))) {
          ++tp;
        }
      }
    }
  }
  Prf prf;
  prf.precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
  prf.recall = actual ? static_cast<double>(tp) / static_cast<double>(actual) : 0.0;
  prf.f1 = tp ? 2.0 * static_cast<double>(tp) / static_cast<double>(predicted + actual) : 0.0;
  return prf;
}

std::vector<double> DefaultDeltaGrid() {
  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(i / 20.0);
  return grid;
}

double TuneDelta(std::span<const PredictionRecord> records, std::span<const double> grid) {
  if (grid.empty()) throw PreconditionError("delta grid is empty");
  std::vector<double> sorted(grid.begin(), grid.end());
  std::sort(sorted.begin(), sorted.end());
  double best_delta = sorted.front();
  double best_f1 = -1;
  for (double delta : sorted) {
    const double f1 = F1AtThreshold(records, delta).f1;
    if (f1 > best_f1) {
      best_f1 = f1;
      best_delta = delta;
    }
  }
  return best_delta;
}

namespace {

template <typename Key>
std::vector<BucketRow> BucketMaps(
    const std::map<Key, std::vector<std::size_t>>& buckets,
    std::span<const std::size_t> mwe_indices, std::span<const PredictionRecord> records,
    const std::function<std::string(Key)>& label) {
  if (mwe_indices.size() != records.size()) {
    throw PreconditionError("breakdown: records and indices differ in length");
  }
  std::unordered_map<std::size_t, std::size_t> position;
  for (std::size_t i = 0; i < mwe_indices.size(); ++i) position[mwe_indices[i]] = i;
  std::vector<BucketRow> rows;
  for (const auto& [key, members] : buckets) {
    if (members.empty()) continue;
    std::vector<PredictionRecord> subset;
    for (std::size_t m : members) subset.push_back(records[position.at(m)]);
    rows.push_back({label(key), members.size(), MeanAveragePrecision(subset), {}});
  }
  return rows;
}

}  // namespace

std::vector<BucketRow> BreakdownByScd(const KbDataset& kb,
                                      std::span<const std::size_t> mwe_indices,
                                      std::span<const PredictionRecord> records) {
  return BucketMaps<ScdLevel>(PartitionByScd(kb, mwe_indices), mwe_indices, records,
                              [](ScdLevel level) {
                                return "SCD " + std::to_string(ScdValue(level));
                              });
}

std::vector<BucketRow> BreakdownByRule(const KbDataset& kb,
                                       std::span<const std::size_t> mwe_indices,
                                       std::span<const PredictionRecord> records) {
  const auto buckets = PartitionByRule(kb, mwe_indices);
  auto rows = BucketMaps<CombinationRule>(
      buckets, mwe_indices, records,
      [](CombinationRule rule) { return std::string(RuleDisplayName(rule)); });
  const auto means = MeanScdByRule(kb, mwe_indices);
  for (BucketRow& row : rows) {
    for (const auto& [rule, mean] : means) {
      if (RuleDisplayName(rule) == row.label) row.mean_scd = mean;
    }
  }
  return rows;
}

std::string BreakdownCsv(const std::vector<BucketRow>& rows) {
  const bool with_scd = std::any_of(rows.begin(), rows.end(),
                                    [](const BucketRow& r) { return r.mean_scd.has_value(); });
  std::string out = with_scd ? "bucket,size,map_x100,average_scd\n" : "bucket,size,map_x100\n";
  for (const BucketRow& row : rows) {
    out += row.label + ',' + std::to_string(row.size) + ',' + FormatDouble(100.0 * row.map);
    if (with_scd) out += ',' + (row.mean_scd ? FormatDouble(*row.mean_scd) : std::string());
    out += '\n';
  }
  return out;
}

}  // namespace sememe_sc

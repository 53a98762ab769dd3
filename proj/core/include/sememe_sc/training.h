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

// Losses, analytic gradients and the SGD regime for the two training tasks:
// regressing composed MWE embeddings onto reference embeddings (similarity)
// and multi-label sememe prediction through a classifier tied to the sememe
// embeddings.

#ifndef SEMEME_SC_TRAINING_H_
#define SEMEME_SC_TRAINING_H_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sememe_sc/composition.h"
#include "sememe_sc/embedding_store.h"
#include "sememe_sc/sememe_kb.h"

namespace sememe_sc {

enum class Task { kSimilarity, kSememe };

std::string_view TaskName(Task task);  // similarity, sememe
Task ParseTask(std::string_view name);

struct Hyperparams {
  std::size_t dim = 200;
  int rule_rank = 5;
  double lambda = 1e-4;
  double k = 100.0;
  double lr0 = 0.01;  // 0.2 is the usual choice for the sememe task
  double decay = 0.99;
  int epochs = 20;
  std::uint64_t seed = 1;
  double delta = 0.5;
  std::size_t batch_size = 1;
};

double DefaultLearningRate(Task task);

// Throws PreconditionError unless every field is in range.
void ValidateHyperparams(const Hyperparams& hyper);

struct TrainingTarget {
  Task task = Task::kSimilarity;
  Eigen::VectorXd reference;  // similarity: p^r
  SememeSet gold;             // sememe prediction: gold labels
};

// ||composed - reference||^2
double SimilarityLoss(const Eigen::VectorXd& composed, const Eigen::VectorXd& reference);

// (lambda / 2) * sum of squared Frobenius norms of the composition and
// attention matrices (or their per-rule factors). Biases and sememe
// embeddings are not penalized.
double Regularization(const ModelParams& params, double lambda);

// sigmoid(W_s p) where the rows of `classifier` are the sememe embeddings.
Eigen::VectorXd PredictSememes(const Eigen::VectorXd& p,
                               const Eigen::MatrixXd& classifier);

Eigen::VectorXd GoldVector(const SememeSet& gold, std::size_t n_sememes);

// Negated weighted cross-entropy:
//   -sum_i (k y_i log s_i + (1 - y_i) log(1 - s_i)),
// with log arguments clamped below at 1e-12.
double SememeLoss(const Eigen::VectorXd& scores, const Eigen::VectorXd& gold, double k);

struct GradientSet {
  Weights weights;
  Eigen::MatrixXd sememes;     // one row per sememe
  std::vector<char> touched;   // rows with a contribution

  static GradientSet ZerosLike(const ModelParams& params);
  void Add(const GradientSet& other);
  double MaxAbs() const;
};

// Task loss (no regularization) for an already composed output.
double TaskLoss(const ModelParams& params, const ComposedOutput& output,
                const TrainingTarget& target, double k);
double ExampleLoss(const ModelParams& params, const MweInput& input,
                   const TrainingTarget& target, double k);

// Gradient of the task loss for one composed example. Sememe rows receive the
// sum of the composition-path and (for the sememe task) classifier-path terms.
// Word embeddings are constants here.
GradientSet BackwardTask(const ModelParams& params, const ComposedOutput& output,
                         const TrainingTarget& target, double k);
void AddRegularizationGradient(const ModelParams& params, double lambda,
                               GradientSet* grads);
// Task gradient plus regularization gradient.
GradientSet Backward(const ModelParams& params, const ComposedOutput& output,
                     const TrainingTarget& target, double lambda, double k);

// theta -= lr * grad for every weight tensor and for sememe rows that are
// both touched and trainable.
void SgdStep(ModelParams* params, const GradientSet& grads, double lr);

struct TrainingSet {
  const KbDataset* kb = nullptr;
  const EmbeddingTable* words = nullptr;       // frozen constituent embeddings
  const EmbeddingTable* references = nullptr;  // p^r rows keyed by MWE token
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
};

TrainingTarget MakeTarget(const TrainingSet& data, Task task, std::size_t mwe_index);

// Mean task loss over `indices` (regularization excluded). NaN when empty.
double MeanLoss(const ModelParams& params, const TrainingSet& data,
                std::span<const std::size_t> indices, Task task, double k);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0;
  double valid_loss = 0;
  double lr = 0;  // rate used during this epoch
};

struct TrainState {
  ModelParams params;
  int epoch = 0;   // completed epochs
  double lr = 0;   // rate for the next epoch: lr0 * decay^epoch
  std::vector<EpochRecord> history;
};

// epoch,train_loss,valid_loss,lr
std::string LossHistoryCsv(const std::vector<EpochRecord>& history);

using EpochCallback = std::function<void(const TrainState&)>;

// Per-example (or mini-batch) SGD over shuffled training MWEs. The learning
// rate is lr0 * decay^epoch. Throws NumericalError naming the epoch and MWE
// on a non-finite loss.
TrainState Train(ModelParams initial, const TrainingSet& data, Task task,
                 const Hyperparams& hyper, const EpochCallback& on_epoch = {});

struct GradCheckOptions {
  std::size_t dim = 5;
  std::size_t n_sememes = 6;
  int rule_rank = 2;
  double epsilon = 1e-5;
  double lambda = 1e-2;
  double k = 100.0;
};

struct GradCheckResult {
  double max_relative_error = 0;
  std::string worst_tensor;
  std::size_t n_checked = 0;
};

// Compares Backward against central differences of the total loss on a small
// random problem. Relative error is |a - n| / max(|a|, |n|, 1e-8).
GradCheckResult GradCheck(const ModelSpec& spec, Task task, std::uint64_t seed,
                          const GradCheckOptions& options = {});

}  // namespace sememe_sc

#endif  // SEMEME_SC_TRAINING_H_

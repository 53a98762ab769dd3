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

#include "sememe_sc/training.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "sememe_sc/errors.h"
#include "sememe_sc/text_io.h"

namespace sememe_sc {

std::string_view TaskName(Task task) {
  return task == Task::kSimilarity ? "similarity" : "sememe";
}

Task ParseTask(std::string_view name) {
  if (name == "similarity") return Task::kSimilarity;
  if (name == "sememe") return Task::kSememe;
  throw PreconditionError("unknown task '" + std::string(name) + "'");
}

double DefaultLearningRate(Task task) {
  return task == Task::kSimilarity ? 0.01 : 0.2;
}

void ValidateHyperparams(const Hyperparams& h) {
  if (h.dim == 0) throw PreconditionError("d must be positive");
  if (h.rule_rank < 1) throw PreconditionError("h_r must be >= 1");
  if (h.lambda < 0) throw PreconditionError("lambda must be non-negative");
  if (!(h.k > 0)) throw PreconditionError("k must be positive");
  if (!(h.lr0 > 0)) throw PreconditionError("lr0 must be positive");
  if (!(h.decay > 0 && h.decay <= 1)) throw PreconditionError("decay must be in (0, 1]");
  if (h.epochs < 0) throw PreconditionError("epochs must be non-negative");
  if (h.batch_size == 0) throw PreconditionError("batch size must be positive");
}

double SimilarityLoss(const Eigen::VectorXd& composed, const Eigen::VectorXd& reference) {
  if (composed.size() != reference.size()) {
    throw PreconditionError("similarity loss: dimension mismatch");
  }
  return (composed - reference).squaredNorm();
}

double Regularization(const ModelParams& params, double lambda) {
  if (lambda < 0) throw PreconditionError("lambda must be non-negative");
  double sum = 0;
  // ForEachTensor needs a mutable view; nothing is written here.
  ForEachTensor(const_cast<Weights&>(params.weights), [&](const TensorView& t) {
    if (!t.regularized) return;
    sum += Eigen::Map<const Eigen::VectorXd>(t.data, t.size()).squaredNorm();
  });
  return 0.5 * lambda * sum;
}

namespace {

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

constexpr double kLogFloor = 1e-12;

}  // namespace

Eigen::VectorXd PredictSememes(const Eigen::VectorXd& p,
                               const Eigen::MatrixXd& classifier) {
  if (classifier.cols() != p.size()) {
    throw PreconditionError("classifier width does not match embedding dimension");
  }
  return (classifier * p).unaryExpr([](double x) { return Sigmoid(x); });
}

Eigen::VectorXd GoldVector(const SememeSet& gold, std::size_t n_sememes) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_sememes));
  for (std::size_t s : gold) {
    if (s >= n_sememes) throw PreconditionError("gold sememe out of range");
    y(static_cast<Eigen::Index>(s)) = 1.0;
  }
  return y;
}

double SememeLoss(const Eigen::VectorXd& scores, const Eigen::VectorXd& gold, double k) {
  if (scores.size() != gold.size()) {
    throw PreconditionError("sememe loss: score and label sizes differ");
  }
  double loss = 0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const double y = gold(i);
    if (y != 0.0 && y != 1.0) throw PreconditionError("sememe labels must be binary");
    const double s = scores(i);
    loss -= k * y * std::log(std::max(s, kLogFloor)) +
            (1.0 - y) * std::log(std::max(1.0 - s, kLogFloor));
  }
  return loss;
}

GradientSet GradientSet::ZerosLike(const ModelParams& params) {
  GradientSet g;
  g.weights = params.weights.ZerosLike();
  g.sememes = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(params.sememes.size()),
                                    static_cast<Eigen::Index>(params.dim));
  g.touched.assign(params.sememes.size(), 0);
  return g;
}

namespace {

std::vector<TensorView> Views(Weights& weights) {
  std::vector<TensorView> views;
  ForEachTensor(weights, [&](const TensorView& t) { views.push_back(t); });
  return views;
}

}  // namespace

void GradientSet::Add(const GradientSet& other) {
  auto mine = Views(weights);
  auto theirs = Views(const_cast<Weights&>(other.weights));
  if (mine.size() != theirs.size()) throw PreconditionError("gradient shapes differ");
  for (std::size_t i = 0; i < mine.size(); ++i) {
    Eigen::Map<Eigen::VectorXd>(mine[i].data, mine[i].size()) +=
        Eigen::Map<const Eigen::VectorXd>(theirs[i].data, theirs[i].size());
  }
  sememes += other.sememes;
  for (std::size_t i = 0; i < touched.size(); ++i) touched[i] |= other.touched[i];
}

double GradientSet::MaxAbs() const {
  double m = sememes.size() ? sememes.cwiseAbs().maxCoeff() : 0.0;
  ForEachTensor(const_cast<Weights&>(weights), [&](const TensorView& t) {
    m = std::max(m, Eigen::Map<const Eigen::VectorXd>(t.data, t.size()).cwiseAbs().maxCoeff());
  });
  return m;
}

double TaskLoss(const ModelParams& params, const ComposedOutput& output,
                const TrainingTarget& target, double k) {
  if (target.task == Task::kSimilarity) {
    return SimilarityLoss(output.p, target.reference);
  }
  const Eigen::VectorXd scores = PredictSememes(output.p, params.sememes.matrix());
  return SememeLoss(scores, GoldVector(target.gold, params.sememes.size()), k);
}

double ExampleLoss(const ModelParams& params, const MweInput& input,
                   const TrainingTarget& target, double k) {
  return TaskLoss(params, Forward(params, input), target, k);
}

namespace {

// Backpropagates d(loss)/d(summary) through one attention direction.
void AttentionBackward(const Eigen::VectorXd& grad_summary, const AttentionResult& att,
                       const SememeSet& targets, const Eigen::VectorXd& query_source,
                       const EmbeddingTable& sememes, Eigen::MatrixXd* grad_attention,
                       Eigen::VectorXd* grad_bias, GradientSet* grads) {
  const auto n = static_cast<Eigen::Index>(targets.size());
  Eigen::VectorXd grad_weight(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    grad_weight(i) = sememes.row(targets[static_cast<std::size_t>(i)]).dot(grad_summary);
  }
  const double mean = att.weights.dot(grad_weight);
  const Eigen::VectorXd grad_logit =
      att.weights.cwiseProduct((grad_weight.array() - mean).matrix());

  Eigen::VectorXd grad_query = Eigen::VectorXd::Zero(att.query.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t s = targets[static_cast<std::size_t>(i)];
    grad_query += grad_logit(i) * sememes.row(s).transpose();
    grads->sememes.row(static_cast<Eigen::Index>(s)) +=
        (att.weights(i) * grad_summary + grad_logit(i) * att.query).transpose();
    grads->touched[s] = 1;
  }
  const Eigen::VectorXd grad_pre =
      grad_query.cwiseProduct((1.0 - att.query.array().square()).matrix());
  *grad_attention += grad_pre * query_source.transpose();
  *grad_bias += grad_pre;
}

}  // namespace

GradientSet BackwardTask(const ModelParams& params, const ComposedOutput& output,
                         const TrainingTarget& target, double k) {
  const CompositionCache& cache = output.cache;
  const ModelKind kind = params.spec.kind;
  if (cache.kind != kind) throw PreconditionError("output was composed by another model");
  if (UsesCompositionMatrix(kind) && cache.pre_activation.size() == 0) {
    throw PreconditionError("composed output carries no cache");
  }
  GradientSet g = GradientSet::ZerosLike(params);
  const Eigen::VectorXd& p = output.p;

  Eigen::VectorXd grad_p;
  if (target.task == Task::kSimilarity) {
    grad_p = 2.0 * (p - target.reference);
  } else {
    const Eigen::MatrixXd& classifier = params.sememes.matrix();
    const Eigen::VectorXd scores = PredictSememes(p, classifier);
    const Eigen::VectorXd y = GoldVector(target.gold, params.sememes.size());
    const Eigen::VectorXd grad_logit =
        ((1.0 - y.array()) * scores.array() - k * y.array() * (1.0 - scores.array()))
            .matrix();
    grad_p = classifier.transpose() * grad_logit;
    g.sememes += grad_logit * p.transpose();
    std::fill(g.touched.begin(), g.touched.end(), 1);
  }
  if (!UsesCompositionMatrix(kind)) return g;

  Weights& gw = g.weights;
  const Eigen::VectorXd grad_pre =
      grad_p.cwiseProduct((1.0 - p.array().square()).matrix());
  const Eigen::MatrixXd grad_matrix = grad_pre * cache.concat.transpose();
  gw.composition_bias = grad_pre;

  const std::size_t r = RuleIndex(cache.input.rule);
  if (!UsesRules(kind)) {
    gw.composition = grad_matrix;
  } else if (params.spec.rule_mode == RuleMode::kFull) {
    gw.rule_composition[r] = grad_matrix;
  } else {
    const Weights& w = params.weights;
    gw.rule_left[r] = grad_matrix * w.rule_right[r].transpose();
    gw.rule_right[r] = w.rule_left[r].transpose() * grad_matrix;
    gw.shared_composition = grad_matrix;
  }
  if (kind == ModelKind::kScasS) return g;

  const auto d = static_cast<Eigen::Index>(params.dim);
  const Eigen::MatrixXd composition = EffectiveComposition(params, cache.input.rule);
  const Eigen::VectorXd grad_aggregate = (composition.transpose() * grad_pre).tail(d);

  if (!UsesAttention(kind)) {
    for (const SememeSet* set : {&cache.input.sememes1, &cache.input.sememes2}) {
      for (std::size_t s : *set) {
        g.sememes.row(static_cast<Eigen::Index>(s)) += grad_aggregate.transpose();
        g.touched[s] = 1;
      }
    }
    return g;
  }

  AttentionBackward(grad_aggregate, cache.attend2, cache.input.sememes2, cache.input.w1,
                    params.sememes, &gw.attention, &gw.attention_bias, &g);
  if (params.spec.shared_attention) {
    AttentionBackward(grad_aggregate, cache.attend1, cache.input.sememes1,
                      cache.input.w2, params.sememes, &gw.attention, &gw.attention_bias,
                      &g);
  } else {
    AttentionBackward(grad_aggregate, cache.attend1, cache.input.sememes1,
                      cache.input.w2, params.sememes, &gw.attention2,
                      &gw.attention2_bias, &g);
  }
  return g;
}

void AddRegularizationGradient(const ModelParams& params, double lambda,
                               GradientSet* grads) {
  if (lambda == 0) return;
  auto values = Views(const_cast<Weights&>(params.weights));
  auto targets = Views(grads->weights);
  if (values.size() != targets.size()) throw PreconditionError("gradient shapes differ");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i].regularized) continue;
    Eigen::Map<Eigen::VectorXd>(targets[i].data, targets[i].size()) +=
        lambda * Eigen::Map<const Eigen::VectorXd>(values[i].data, values[i].size());
  }
}

GradientSet Backward(const ModelParams& params, const ComposedOutput& output,
                     const TrainingTarget& target, double lambda, double k) {
  GradientSet g = BackwardTask(params, output, target, k);
  AddRegularizationGradient(params, lambda, &g);
  return g;
}

void SgdStep(ModelParams* params, const GradientSet& grads, double lr) {
  if (lr < 0) throw PreconditionError("learning rate must be non-negative");
  auto values = Views(params->weights);
  auto deltas = Views(const_cast<Weights&>(grads.weights));
  if (values.size() != deltas.size()) throw PreconditionError("gradient shapes differ");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].size() != deltas[i].size()) {
      throw PreconditionError("gradient shape differs for " + values[i].name);
    }
    Eigen::Map<Eigen::VectorXd>(values[i].data, values[i].size()) -=
        lr * Eigen::Map<const Eigen::VectorXd>(deltas[i].data, deltas[i].size());
  }
  Eigen::MatrixXd& table = params->sememes.mutable_matrix();
  for (std::size_t s = 0; s < grads.touched.size(); ++s) {
    if (!grads.touched[s] || !params->sememes.trainable(s)) continue;
    const auto row = static_cast<Eigen::Index>(s);
    table.row(row) -= lr * grads.sememes.row(row);
  }
}

TrainingTarget MakeTarget(const TrainingSet& data, Task task, std::size_t mwe_index) {
  TrainingTarget target;
  target.task = task;
  const MweEntry& mwe = data.kb->mwes().at(mwe_index);
  if (task == Task::kSimilarity) {
    if (data.references == nullptr) {
      throw PreconditionError("similarity training needs reference MWE embeddings");
    }
    target.reference = data.references->Lookup(mwe.token);
  } else {
    if (mwe.sememes.empty()) {
      throw PreconditionError("MWE '" + mwe.token + "' has no gold sememes");
    }
    target.gold = mwe.sememes;
  }
  return target;
}

double MeanLoss(const ModelParams& params, const TrainingSet& data,
                std::span<const std::size_t> indices, Task task, double k) {
  if (indices.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0;
  for (std::size_t i : indices) {
    sum += ExampleLoss(params, MakeInput(*data.kb, *data.words, i),
                       MakeTarget(data, task, i), k);
  }
  return sum / static_cast<double>(indices.size());
}

std::string LossHistoryCsv(const std::vector<EpochRecord>& history) {
  std::string out = "epoch,train_loss,valid_loss,lr\n";
  for (const EpochRecord& r : history) {
    out += std::to_string(r.epoch) + ',' + FormatDouble(r.train_loss) + ',' +
           FormatDouble(r.valid_loss) + ',' + FormatDouble(r.lr) + '\n';
  }
  return out;
}

TrainState Train(ModelParams initial, const TrainingSet& data, Task task,
                 const Hyperparams& hyper, const EpochCallback& on_epoch) {
  ValidateHyperparams(hyper);
  if (data.kb == nullptr || data.words == nullptr) {
    throw PreconditionError("training set needs a KB and word embeddings");
  }
  if (data.train.empty()) throw PreconditionError("training split is empty");

  // Resolve every example up front so missing embeddings fail before any update.
  std::vector<MweInput> inputs(data.kb->mwes().size());
  std::vector<TrainingTarget> targets(data.kb->mwes().size());
  for (const auto* split : {&data.train, &data.valid}) {
    for (std::size_t i : *split) {
      inputs.at(i) = MakeInput(*data.kb, *data.words, i);
      targets.at(i) = MakeTarget(data, task, i);
    }
  }

  auto mean_loss = [&](const ModelParams& params, const std::vector<std::size_t>& idx) {
    if (idx.empty()) return std::numeric_limits<double>::quiet_NaN();
    double sum = 0;
    for (std::size_t i : idx) sum += ExampleLoss(params, inputs[i], targets[i], hyper.k);
    return sum / static_cast<double>(idx.size());
  };

  TrainState state;
  state.params = std::move(initial);
  state.lr = hyper.lr0;
  std::mt19937_64 rng(hyper.seed);
  std::vector<std::size_t> order = data.train;

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    const double lr = hyper.lr0 * std::pow(hyper.decay, epoch);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += hyper.batch_size) {
      const std::size_t end = std::min(order.size(), start + hyper.batch_size);
      GradientSet grads = GradientSet::ZerosLike(state.params);
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t i = order[b];
        const ComposedOutput out = Forward(state.params, inputs[i]);
        const double loss = TaskLoss(state.params, out, targets[i], hyper.k);
        if (!std::isfinite(loss)) {
          throw NumericalError("non-finite loss at epoch " + std::to_string(epoch + 1) +
                               " on MWE '" + data.kb->mwes()[i].token + "'");
        }
        grads.Add(BackwardTask(state.params, out, targets[i], hyper.k));
      }
      AddRegularizationGradient(state.params, hyper.lambda, &grads);
      SgdStep(&state.params, grads, lr);
    }

    EpochRecord record;
    record.epoch = epoch + 1;
    record.train_loss = mean_loss(state.params, data.train);
    record.valid_loss = mean_loss(state.params, data.valid);
    record.lr = lr;
    if (!std::isfinite(record.train_loss)) {
      throw NumericalError("non-finite training loss after epoch " +
                           std::to_string(epoch + 1));
    }
    state.history.push_back(record);
    state.epoch = epoch + 1;
    state.lr = hyper.lr0 * std::pow(hyper.decay, epoch + 1);
    if (on_epoch) on_epoch(state);
  }
  return state;
}

GradCheckResult GradCheck(const ModelSpec& spec_in, Task task, std::uint64_t seed,
                          const GradCheckOptions& options) {
  const std::size_t d = options.dim;
  const std::size_t n_sememes = options.n_sememes;
  if (d == 0 || n_sememes < 2) throw PreconditionError("grad check needs d >= 1, |S| >= 2");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-0.8, 0.8);
  auto random_vector = [&](std::size_t n) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = uniform(rng);
    return v;
  };
  auto random_set = [&](std::size_t max_size) {
    std::vector<std::size_t> all(n_sememes);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    const std::size_t size =
        1 + std::uniform_int_distribution<std::size_t>(0, max_size - 1)(rng);
    SememeSet set(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(size));
    std::sort(set.begin(), set.end());
    return set;
  };

  ModelSpec spec = spec_in;
  spec.rule_rank.fill(options.rule_rank);
  std::vector<std::string> ids;
  for (std::size_t s = 0; s < n_sememes; ++s) ids.push_back("s" + std::to_string(s));
  EmbeddingTable sememes = InitRandom(ids, d, seed + 1, 0.8);
  ModelParams params = InitParams(spec, d, std::move(sememes), seed + 2);
  // Push the weights away from the near-linear start so tanh curvature shows.
  ForEachTensor(params.weights, [&](const TensorView& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data[i] = uniform(rng);
  });

  std::vector<MweInput> inputs;
  std::vector<TrainingTarget> targets;
  for (CombinationRule rule : kAllRules) {
    MweInput in;
    in.w1 = random_vector(d);
    in.w2 = random_vector(d);
    in.sememes1 = random_set(3);
    in.sememes2 = random_set(3);
    in.rule = rule;
    TrainingTarget target;
    target.task = task;
    target.reference = 0.9 * random_vector(d);
    target.gold = random_set(2);
    inputs.push_back(std::move(in));
    targets.push_back(std::move(target));
  }

  auto total_loss = [&](const ModelParams& p) {
    double loss = Regularization(p, options.lambda);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      loss += ExampleLoss(p, inputs[i], targets[i], options.k);
    }
    return loss;
  };

  GradientSet analytic = GradientSet::ZerosLike(params);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    analytic.Add(BackwardTask(params, Forward(params, inputs[i]), targets[i], options.k));
  }
  AddRegularizationGradient(params, options.lambda, &analytic);

  GradCheckResult result;
  auto compare = [&](double* slot, double analytic_value, const std::string& name) {
    const double saved = *slot;
    *slot = saved + options.epsilon;
    const double plus = total_loss(params);
    *slot = saved - options.epsilon;
    const double minus = total_loss(params);
    *slot = saved;
    const double numeric = (plus - minus) / (2 * options.epsilon);
    const double denom =
        std::max({std::abs(analytic_value), std::abs(numeric), 1e-8});
    const double err = std::abs(analytic_value - numeric) / denom;
    ++result.n_checked;
    if (err > result.max_relative_error) {
      result.max_relative_error = err;
      result.worst_tensor = name;
    }
  };

  auto param_views = Views(params.weights);
  auto grad_views = Views(analytic.weights);
  for (std::size_t t = 0; t < param_views.size(); ++t) {
    for (Eigen::Index i = 0; i < param_views[t].size(); ++i) {
      compare(param_views[t].data + i, grad_views[t].data[i], param_views[t].name);
    }
  }
  // Sememe rows matter whenever they feed the composition or the classifier.
  if (UsesSememes(spec.kind) || task == Task::kSememe) {
    Eigen::MatrixXd& table = params.sememes.mutable_matrix();
    for (Eigen::Index r = 0; r < table.rows(); ++r) {
      for (Eigen::Index c = 0; c < table.cols(); ++c) {
        compare(&table(r, c), analytic.sememes(r, c), "sememes");
      }
    }
  }
  return result;
}

}  // namespace sememe_sc

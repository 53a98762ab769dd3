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

#include "sememe_sc/composition.h"

#include <cmath>
#include <random>

#include "sememe_sc/errors.h"

namespace sememe_sc {

std::string_view ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kAdd: return "add";
    case ModelKind::kMul: return "mul";
    case ModelKind::kScasS: return "scas_s";
    case ModelKind::kScas: return "scas";
    case ModelKind::kScmsa: return "scmsa";
    case ModelKind::kScasR: return "scas_r";
    case ModelKind::kScmsaR: return "scmsa_r";
  }
  return "add";
}

ModelKind ParseModelKind(std::string_view name) {
  for (ModelKind kind : kAllModelKinds) {
    if (ModelKindName(kind) == name) return kind;
  }
  throw PreconditionError("unknown model kind '" + std::string(name) + "'");
}

std::string_view RuleModeName(RuleMode mode) {
  return mode == RuleMode::kFull ? "full" : "lowrank";
}

RuleMode ParseRuleMode(std::string_view name) {
  if (name == "full") return RuleMode::kFull;
  if (name == "lowrank") return RuleMode::kLowRank;
  throw PreconditionError("unknown rule mode '" + std::string(name) + "'");
}

bool UsesCompositionMatrix(ModelKind kind) {
  return kind != ModelKind::kAdd && kind != ModelKind::kMul;
}

bool UsesSememes(ModelKind kind) {
  return kind == ModelKind::kScas || kind == ModelKind::kScmsa ||
         kind == ModelKind::kScasR || kind == ModelKind::kScmsaR;
}

bool UsesAttention(ModelKind kind) {
  return kind == ModelKind::kScmsa || kind == ModelKind::kScmsaR;
}

bool UsesRules(ModelKind kind) {
  return kind == ModelKind::kScasR || kind == ModelKind::kScmsaR;
}

Weights Weights::ZerosLike() const {
  Weights z;
  auto zero = [](const auto& m) {
    using T = std::decay_t<decltype(m)>;
    return T(T::Zero(m.rows(), m.cols()));
  };
  z.composition = zero(composition);
  z.composition_bias = zero(composition_bias);
  z.attention = zero(attention);
  z.attention_bias = zero(attention_bias);
  z.attention2 = zero(attention2);
  z.attention2_bias = zero(attention2_bias);
  for (std::size_t r = 0; r < 4; ++r) {
    z.rule_composition[r] = zero(rule_composition[r]);
    z.rule_left[r] = zero(rule_left[r]);
    z.rule_right[r] = zero(rule_right[r]);
  }
  z.shared_composition = zero(shared_composition);
  return z;
}

namespace {

template <typename M>
void Visit(const std::string& name, M& m, bool regularized,
           const std::function<void(const TensorView&)>& fn) {
  if (m.size() == 0) return;
  fn(TensorView{name, m.data(), m.rows(), m.cols(), regularized});
}

}  // namespace

void ForEachTensor(Weights& w, const std::function<void(const TensorView&)>& fn) {
  Visit("composition", w.composition, true, fn);
  Visit("composition_bias", w.composition_bias, false, fn);
  Visit("attention", w.attention, true, fn);
  Visit("attention_bias", w.attention_bias, false, fn);
  Visit("attention2", w.attention2, true, fn);
  Visit("attention2_bias", w.attention2_bias, false, fn);
  for (CombinationRule rule : kAllRules) {
    const std::size_t r = RuleIndex(rule);
    const std::string suffix = "." + std::string(RuleLabel(rule));
    Visit("rule_composition" + suffix, w.rule_composition[r], true, fn);
    Visit("rule_left" + suffix, w.rule_left[r], true, fn);
    Visit("rule_right" + suffix, w.rule_right[r], true, fn);
  }
  Visit("shared_composition", w.shared_composition, true, fn);
}

ModelParams InitParams(const ModelSpec& spec, std::size_t dim, EmbeddingTable sememes,
                       std::uint64_t seed) {
  if (dim == 0) throw PreconditionError("model dimension must be positive");
  if (sememes.size() > 0 && sememes.dim() != dim) {
    throw PreconditionError("sememe table dimension " + std::to_string(sememes.dim()) +
                            " does not match model dimension " + std::to_string(dim));
  }
  for (int rank : spec.rule_rank) {
    if (rank < 1) throw PreconditionError("rule rank h_r must be >= 1");
  }
  ModelParams params;
  params.spec = spec;
  params.dim = dim;
  params.sememes = std::move(sememes);

  const auto d = static_cast<Eigen::Index>(dim);
  const double bound = 1.0 / std::sqrt(2.0 * static_cast<double>(dim));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-bound, bound);
  auto random_matrix = [&](Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = uniform(rng);
    }
    return m;
  };

  Weights& w = params.weights;
  const ModelKind kind = spec.kind;
  if (!UsesCompositionMatrix(kind)) return params;

  w.composition_bias = Eigen::VectorXd::Zero(d);
  if (!UsesRules(kind)) {
    w.composition = random_matrix(d, 2 * d);
  } else if (spec.rule_mode == RuleMode::kFull) {
    for (auto& m : w.rule_composition) m = random_matrix(d, 2 * d);
  } else {
    for (std::size_t r = 0; r < 4; ++r) {
      w.rule_left[r] = random_matrix(d, spec.rule_rank[r]);
      w.rule_right[r] = random_matrix(spec.rule_rank[r], 2 * d);
    }
    w.shared_composition = random_matrix(d, 2 * d);
  }
  if (UsesAttention(kind)) {
    w.attention = random_matrix(d, d);
    w.attention_bias = Eigen::VectorXd::Zero(d);
    if (!spec.shared_attention) {
      w.attention2 = random_matrix(d, d);
      w.attention2_bias = Eigen::VectorXd::Zero(d);
    }
  }
  return params;
}

MweInput MakeInput(const KbDataset& kb, const EmbeddingTable& words,
                   std::size_t mwe_index) {
  const MweEntry& mwe = kb.mwes().at(mwe_index);
  MweInput input;
  input.w1 = words.Lookup(mwe.constituent1);
  input.w2 = words.Lookup(mwe.constituent2);
  input.sememes1 = kb.Word(mwe.constituent1).sememes;
  input.sememes2 = kb.Word(mwe.constituent2).sememes;
  input.rule = mwe.rule;
  return input;
}

namespace {

void CheckSameDim(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw PreconditionError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
  }
}

void CheckComposition(const Eigen::MatrixXd& composition, const Eigen::VectorXd& bias,
                      Eigen::Index d) {
  if (composition.rows() != d || composition.cols() != 2 * d || bias.size() != d) {
    throw PreconditionError("composition parameters are not dimensioned for d=" +
                            std::to_string(d));
  }
}

void FinishTanh(const Eigen::MatrixXd& composition, const Eigen::VectorXd& bias,
                ComposedOutput* out) {
  out->cache.pre_activation = composition * out->cache.concat + bias;
  out->p = out->cache.pre_activation.array().tanh().matrix();
}

}  // namespace

Eigen::VectorXd AggregateSememes(const SememeSet& sememes, const EmbeddingTable& table) {
  if (sememes.empty()) throw PreconditionError("cannot aggregate an empty sememe set");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(table.dim()));
  for (std::size_t s : sememes) {
    if (s >= table.size()) throw PreconditionError("sememe row out of range");
    sum += table.row(s).transpose();
  }
  return sum;
}

Eigen::VectorXd ComposeAdd(const Eigen::VectorXd& w1, const Eigen::VectorXd& w2) {
  CheckSameDim(w1, w2);
  return w1 + w2;
}

Eigen::VectorXd ComposeMul(const Eigen::VectorXd& w1, const Eigen::VectorXd& w2) {
  CheckSameDim(w1, w2);
  return w1.cwiseProduct(w2);
}

ComposedOutput ComposeScasS(const Eigen::VectorXd& w1, const Eigen::VectorXd& w2,
                            const Eigen::MatrixXd& composition,
                            const Eigen::VectorXd& bias) {
  CheckSameDim(w1, w2);
  CheckComposition(composition, bias, w1.size());
  ComposedOutput out;
  out.cache.kind = ModelKind::kScasS;
  out.cache.input.w1 = w1;
  out.cache.input.w2 = w2;
  out.cache.concat.resize(2 * w1.size());
  out.cache.concat << w1, w2;
  FinishTanh(composition, bias, &out);
  return out;
}

ComposedOutput ComposeScas(const MweInput& input, const Eigen::MatrixXd& composition,
                           const Eigen::VectorXd& bias, const EmbeddingTable& sememes) {
  CheckSameDim(input.w1, input.w2);
  CheckComposition(composition, bias, input.w1.size());
  if (static_cast<Eigen::Index>(sememes.dim()) != input.w1.size()) {
    throw PreconditionError("sememe dimension does not match word dimension");
  }
  ComposedOutput out;
  out.cache.kind = ModelKind::kScas;
  out.cache.input = input;
  out.cache.aggregate1 = AggregateSememes(input.sememes1, sememes);
  out.cache.aggregate2 = AggregateSememes(input.sememes2, sememes);
  out.cache.concat.resize(2 * input.w1.size());
  out.cache.concat << input.w1 + input.w2, out.cache.aggregate1 + out.cache.aggregate2;
  FinishTanh(composition, bias, &out);
  return out;
}

AttentionResult Attend(const Eigen::VectorXd& query_source, const SememeSet& targets,
                       const Eigen::MatrixXd& attention, const Eigen::VectorXd& bias,
                       const EmbeddingTable& sememes) {
  if (targets.empty()) throw PreconditionError("cannot attend over an empty sememe set");
  const Eigen::Index d = query_source.size();
  if (attention.rows() != d || attention.cols() != d || bias.size() != d ||
      static_cast<Eigen::Index>(sememes.dim()) != d) {
    throw PreconditionError("attention parameters are not dimensioned for d=" +
                            std::to_string(d));
  }
  AttentionResult result;
  result.query = (attention * query_source + bias).array().tanh().matrix();
  const auto n = static_cast<Eigen::Index>(targets.size());
  Eigen::VectorXd logits(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t s = targets[static_cast<std::size_t>(i)];
    if (s >= sememes.size()) throw PreconditionError("sememe row out of range");
    logits(i) = sememes.row(s).dot(result.query);
  }
  result.weights = (logits.array() - logits.maxCoeff()).exp().matrix();
  result.weights /= result.weights.sum();
  result.summary = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    result.summary +=
        result.weights(i) * sememes.row(targets[static_cast<std::size_t>(i)]).transpose();
  }
  return result;
}

ComposedOutput ComposeScmsa(const MweInput& input, const Eigen::MatrixXd& composition,
                            const Eigen::VectorXd& bias,
                            const Eigen::MatrixXd& attention,
                            const Eigen::VectorXd& attention_bias,
                            const Eigen::MatrixXd& attention2,
                            const Eigen::VectorXd& attention2_bias,
                            const EmbeddingTable& sememes) {
  CheckSameDim(input.w1, input.w2);
  CheckComposition(composition, bias, input.w1.size());
  ComposedOutput out;
  out.cache.kind = ModelKind::kScmsa;
  out.cache.input = input;
  out.cache.attend2 = Attend(input.w1, input.sememes2, attention, attention_bias, sememes);
  out.cache.attend1 =
      Attend(input.w2, input.sememes1, attention2, attention2_bias, sememes);
  out.cache.aggregate1 = out.cache.attend1.summary;
  out.cache.aggregate2 = out.cache.attend2.summary;
  out.cache.concat.resize(2 * input.w1.size());
  out.cache.concat << input.w1 + input.w2, out.cache.aggregate1 + out.cache.aggregate2;
  FinishTanh(composition, bias, &out);
  return out;
}

Eigen::MatrixXd CompositionMatrixForRule(CombinationRule rule, const ModelParams& params) {
  const std::size_t r = RuleIndex(rule);
  const Weights& w = params.weights;
  if (params.spec.rule_mode == RuleMode::kFull) {
    if (w.rule_composition[r].size() == 0) {
      throw PreconditionError("missing composition matrix for rule " +
                              std::string(RuleLabel(rule)));
    }
    return w.rule_composition[r];
  }
  if (w.rule_left[r].size() == 0 || w.rule_right[r].size() == 0 ||
      w.shared_composition.size() == 0) {
    throw PreconditionError("missing low-rank tensors for rule " +
                            std::string(RuleLabel(rule)));
  }
  return w.rule_left[r] * w.rule_right[r] + w.shared_composition;
}

Eigen::MatrixXd EffectiveComposition(const ModelParams& params, CombinationRule rule) {
  if (UsesRules(params.spec.kind)) return CompositionMatrixForRule(rule, params);
  return params.weights.composition;
}

ComposedOutput Forward(const ModelParams& params, const MweInput& input) {
  const ModelKind kind = params.spec.kind;
  const Weights& w = params.weights;
  ComposedOutput out;
  switch (kind) {
    case ModelKind::kAdd:
    case ModelKind::kMul:
      out.p = kind == ModelKind::kAdd ? ComposeAdd(input.w1, input.w2)
                                      : ComposeMul(input.w1, input.w2);
      out.cache.input = input;
      break;
    case ModelKind::kScasS:
      out = ComposeScasS(input.w1, input.w2, w.composition, w.composition_bias);
      out.cache.input = input;
      break;
    case ModelKind::kScas:
    case ModelKind::kScasR:
      out = ComposeScas(input, EffectiveComposition(params, input.rule),
                        w.composition_bias, params.sememes);
      break;
    case ModelKind::kScmsa:
    case ModelKind::kScmsaR: {
      const bool shared = params.spec.shared_attention;
      out = ComposeScmsa(input, EffectiveComposition(params, input.rule),
                         w.composition_bias, w.attention, w.attention_bias,
                         shared ? w.attention : w.attention2,
                         shared ? w.attention_bias : w.attention2_bias, params.sememes);
      break;
    }
  }
  out.cache.kind = kind;
  return out;
}

}  // namespace sememe_sc

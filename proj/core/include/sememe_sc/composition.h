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

// Composition models mapping two constituent embeddings (plus, for the
// sememe-aware kinds, their sememe sets and combination rule) to an MWE
// embedding p. Tanh-based kinds keep a cache for exact backpropagation.

#ifndef SEMEME_SC_COMPOSITION_H_
#define SEMEME_SC_COMPOSITION_H_

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "sememe_sc/embedding_store.h"
#include "sememe_sc/sememe_kb.h"

namespace sememe_sc {

enum class ModelKind { kAdd, kMul, kScasS, kScas, kScmsa, kScasR, kScmsaR };
enum class RuleMode { kFull, kLowRank };

inline constexpr std::array<ModelKind, 7> kAllModelKinds = {
    ModelKind::kAdd,  ModelKind::kMul,  ModelKind::kScasS, ModelKind::kScas,
    ModelKind::kScmsa, ModelKind::kScasR, ModelKind::kScmsaR};

// add, mul, scas_s, scas, scmsa, scas_r, scmsa_r
std::string_view ModelKindName(ModelKind kind);
ModelKind ParseModelKind(std::string_view name);
// full, lowrank
std::string_view RuleModeName(RuleMode mode);
RuleMode ParseRuleMode(std::string_view name);

bool UsesCompositionMatrix(ModelKind kind);  // every tanh-based kind
bool UsesSememes(ModelKind kind);            // SCAS, SCMSA and their +R forms
bool UsesAttention(ModelKind kind);
bool UsesRules(ModelKind kind);

struct ModelSpec {
  ModelKind kind = ModelKind::kScas;
  RuleMode rule_mode = RuleMode::kLowRank;
  // Per-rule rank of the low-rank perturbation, indexed by RuleIndex().
  std::array<int, 4> rule_rank = {5, 5, 5, 5};
  // One (W_a, b_a) for both attention directions; false gives the second
  // direction its own pair.
  bool shared_attention = true;
};

// Learnable tensors apart from the sememe table. Tensors a kind does not use
// stay empty (zero-sized).
struct Weights {
  Eigen::MatrixXd composition;          // W_c, d x 2d
  Eigen::VectorXd composition_bias;     // b_c
  Eigen::MatrixXd attention;            // W_a, d x d; query built from w1
  Eigen::VectorXd attention_bias;       // b_a
  Eigen::MatrixXd attention2;           // query built from w2 when unshared
  Eigen::VectorXd attention2_bias;
  std::array<Eigen::MatrixXd, 4> rule_composition;  // W_c^r, full mode
  std::array<Eigen::MatrixXd, 4> rule_left;         // U^r, d x h_r
  std::array<Eigen::MatrixXd, 4> rule_right;        // V^r, h_r x 2d
  Eigen::MatrixXd shared_composition;               // W_c^c, lowrank mode

  // Same shapes, all zeros.
  Weights ZerosLike() const;
};

// A flat view of one tensor. `regularized` marks members of the L2 set
// (composition and attention matrices; biases are excluded).
struct TensorView {
  std::string name;
  double* data;
  Eigen::Index rows;
  Eigen::Index cols;
  bool regularized;

  Eigen::Index size() const { return rows * cols; }
};

// Visits the non-empty tensors in a fixed order.
void ForEachTensor(Weights& weights, const std::function<void(const TensorView&)>& fn);

struct ModelParams {
  ModelSpec spec;
  std::size_t dim = 0;
  Weights weights;
  // Rows aligned with the KB's sememe inventory; doubles as the tied
  // sememe-prediction classifier.
  EmbeddingTable sememes;
};

// Matrices uniform in [-1/sqrt(2d), 1/sqrt(2d)], biases zero. The sememe
// table is taken as-is.
ModelParams InitParams(const ModelSpec& spec, std::size_t dim, EmbeddingTable sememes,
                       std::uint64_t seed);

// Constituent embeddings plus sememe sets (rows of ModelParams::sememes).
struct MweInput {
  Eigen::VectorXd w1;
  Eigen::VectorXd w2;
  SememeSet sememes1;
  SememeSet sememes2;
  CombinationRule rule = CombinationRule::kOther;
};

// Constituent rows come from `words`; sememe positions are the KB inventory
// positions, so the sememe table must follow inventory order.
MweInput MakeInput(const KbDataset& kb, const EmbeddingTable& words,
                   std::size_t mwe_index);

struct AttentionResult {
  Eigen::VectorXd query;    // e = tanh(W_a w + b_a)
  Eigen::VectorXd weights;  // softmax over the target sememes, in set order
  Eigen::VectorXd summary;  // attention-weighted sum of the target sememes
};

struct CompositionCache {
  ModelKind kind = ModelKind::kAdd;
  MweInput input;
  Eigen::VectorXd aggregate1;      // w1'
  Eigen::VectorXd aggregate2;      // w2'
  Eigen::VectorXd concat;          // input to the composition matrix
  Eigen::VectorXd pre_activation;  // W x + b
  AttentionResult attend1;         // over S_w1, query from w2 (SCMSA)
  AttentionResult attend2;         // over S_w2, query from w1 (SCMSA)
};

struct ComposedOutput {
  Eigen::VectorXd p;
  CompositionCache cache;
};

Eigen::VectorXd AggregateSememes(const SememeSet& sememes, const EmbeddingTable& table);

Eigen::VectorXd ComposeAdd(const Eigen::VectorXd& w1, const Eigen::VectorXd& w2);
Eigen::VectorXd ComposeMul(const Eigen::VectorXd& w1, const Eigen::VectorXd& w2);

// p = tanh(W_c [w1; w2] + b_c)
ComposedOutput ComposeScasS(const Eigen::VectorXd& w1, const Eigen::VectorXd& w2,
                            const Eigen::MatrixXd& composition,
                            const Eigen::VectorXd& bias);

// p = tanh(W_c [w1 + w2; w1' + w2'] + b_c) with w' the summed sememes.
ComposedOutput ComposeScas(const MweInput& input, const Eigen::MatrixXd& composition,
                           const Eigen::VectorXd& bias, const EmbeddingTable& sememes);

AttentionResult Attend(const Eigen::VectorXd& query_source, const SememeSet& targets,
                       const Eigen::MatrixXd& attention, const Eigen::VectorXd& bias,
                       const EmbeddingTable& sememes);

// Mutual attention: w1 queries S_w2 to give w2', w2 queries S_w1 to give w1'.
// `attention2`/`bias2` serve the w2 -> S_w1 direction.
ComposedOutput ComposeScmsa(const MweInput& input, const Eigen::MatrixXd& composition,
                            const Eigen::VectorXd& bias,
                            const Eigen::MatrixXd& attention,
                            const Eigen::VectorXd& attention_bias,
                            const Eigen::MatrixXd& attention2,
                            const Eigen::VectorXd& attention2_bias,
                            const EmbeddingTable& sememes);

// Full mode: W_c^r. Low-rank mode: U^r V^r + W_c^c.
Eigen::MatrixXd CompositionMatrixForRule(CombinationRule rule, const ModelParams& params);

// The composition matrix `params` applies to an MWE with `rule`.
Eigen::MatrixXd EffectiveComposition(const ModelParams& params, CombinationRule rule);

ComposedOutput Forward(const ModelParams& params, const MweInput& input);

}  // namespace sememe_sc

#endif  // SEMEME_SC_COMPOSITION_H_

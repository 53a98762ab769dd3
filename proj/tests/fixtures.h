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

// Shared scenario builders for unit and acceptance tests.

#ifndef SEMEME_SC_TESTS_FIXTURES_H_
#define SEMEME_SC_TESTS_FIXTURES_H_

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <vector>

#include "oracles.h"
#include "sememe_sc/composition.h"
#include "sememe_sc/sememe_kb.h"
#include "sememe_sc/synthetic.h"
#include "sememe_sc/training.h"

namespace sememe_sc::fixture {

// A generated dataset parsed back into a KB, with the sememe table reordered
// to the KB inventory. Pointers inside `data` refer to members, so the struct
// lives on the heap.
struct Problem {
  SyntheticData synthetic;
  KbDataset kb;
  EmbeddingTable sememes;  // inventory order, ground-truth values
  TrainingSet data;
};

inline std::unique_ptr<Problem> MakeProblem(const SyntheticOptions& options) {
  auto problem = std::make_unique<Problem>();
  problem->synthetic = GenerateSynthetic(options);
  problem->kb = ParseKb(problem->synthetic.lexicon_text, problem->synthetic.mwe_text);
  problem->sememes = problem->synthetic.sememes.Select(problem->kb.inventory().ids());
  problem->sememes.MarkAllTrainable();
  problem->data.kb = &problem->kb;
  problem->data.words = &problem->synthetic.words;
  problem->data.references = &problem->synthetic.references;
  problem->data.train = AllMweIndices(problem->kb);
  return problem;
}

// Max relative error between Backward and central differences of the full
// objective (task losses plus one regularization term) over every weight and,
// when `include_sememes`, every sememe entry.
inline double FiniteDifferenceError(ModelParams params, const std::vector<MweInput>& inputs,
                                    const std::vector<TrainingTarget>& targets,
                                    double lambda, double k, bool include_sememes,
                                    double eps = 1e-5) {
  auto objective = [&]() {
    double total = Regularization(params, lambda);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      total += ExampleLoss(params, inputs[i], targets[i], k);
    }
    return total;
  };
  GradientSet analytic = GradientSet::ZerosLike(params);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    analytic.Add(BackwardTask(params, Forward(params, inputs[i]), targets[i], k));
  }
  AddRegularizationGradient(params, lambda, &analytic);

  std::vector<TensorView> numeric_views, analytic_views;
  ForEachTensor(params.weights, [&](const TensorView& t) { numeric_views.push_back(t); });
  ForEachTensor(analytic.weights, [&](const TensorView& t) { analytic_views.push_back(t); });
  double worst = 0;
  for (std::size_t t = 0; t < numeric_views.size(); ++t) {
    for (Eigen::Index i = 0; i < numeric_views[t].size(); ++i) {
      const double n = oracle::CentralDifference(numeric_views[t].data + i, eps, objective);
      worst = std::max(worst, oracle::RelativeError(analytic_views[t].data[i], n));
    }
  }
  if (include_sememes) {
    Eigen::MatrixXd& table = params.sememes.mutable_matrix();
    for (Eigen::Index i = 0; i < table.size(); ++i) {
      const double n = oracle::CentralDifference(table.data() + i, eps, objective);
      worst = std::max(worst, oracle::RelativeError(analytic.sememes.data()[i], n));
    }
  }
  return worst;
}

}  // namespace sememe_sc::fixture

#endif  // SEMEME_SC_TESTS_FIXTURES_H_

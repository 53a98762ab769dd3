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

// Forward and forward+backward cost per model kind at the default d = 200.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "sememe_sc/composition.h"
#include "sememe_sc/training.h"

namespace sememe_sc {
namespace {

constexpr std::size_t kDim = 200;
constexpr std::size_t kSememes = 2000;

struct Setup {
  ModelParams params;
  MweInput input;
  TrainingTarget similarity;
  TrainingTarget sememe;
};

Setup MakeSetup(ModelKind kind) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < kSememes; ++i) ids.push_back("s" + std::to_string(i));
  ModelSpec spec;
  spec.kind = kind;
  Setup s{InitParams(spec, kDim, InitRandom(ids, kDim, 1, 0.1), 2), {}, {}, {}};
  const EmbeddingTable words = InitRandom({"a", "b", "p"}, kDim, 3, 0.5);
  s.input.w1 = words.Lookup("a");
  s.input.w2 = words.Lookup("b");
  s.input.sememes1 = {3, 17, 250, 1999};
  s.input.sememes2 = {17, 40, 800};
  s.input.rule = CombinationRule::kNN;
  s.similarity.reference = words.Lookup("p");
  s.sememe.task = Task::kSememe;
  s.sememe.gold = {17, 40, 1200};
  return s;
}

void BM_Forward(benchmark::State& state) {
  const Setup s = MakeSetup(kAllModelKinds[static_cast<std::size_t>(state.range(0))]);
  for (auto _ : state) benchmark::DoNotOptimize(Forward(s.params, s.input).p);
  state.SetLabel(std::string(ModelKindName(s.params.spec.kind)));
}

void BM_SimilarityStep(benchmark::State& state) {
  const Setup s = MakeSetup(kAllModelKinds[static_cast<std::size_t>(state.range(0))]);
  for (auto _ : state) {
    const ComposedOutput out = Forward(s.params, s.input);
    benchmark::DoNotOptimize(Backward(s.params, out, s.similarity, 1e-4, 100).MaxAbs());
  }
  state.SetLabel(std::string(ModelKindName(s.params.spec.kind)));
}

void BM_SememeStep(benchmark::State& state) {
  const Setup s = MakeSetup(kAllModelKinds[static_cast<std::size_t>(state.range(0))]);
  for (auto _ : state) {
    const ComposedOutput out = Forward(s.params, s.input);
    benchmark::DoNotOptimize(Backward(s.params, out, s.sememe, 1e-4, 100).MaxAbs());
  }
  state.SetLabel(std::string(ModelKindName(s.params.spec.kind)));
}

BENCHMARK(BM_Forward)->DenseRange(0, static_cast<int>(kAllModelKinds.size()) - 1);
BENCHMARK(BM_SimilarityStep)->DenseRange(0, static_cast<int>(kAllModelKinds.size()) - 1);
BENCHMARK(BM_SememeStep)->DenseRange(0, static_cast<int>(kAllModelKinds.size()) - 1);

}  // namespace
}  // namespace sememe_sc

BENCHMARK_MAIN();

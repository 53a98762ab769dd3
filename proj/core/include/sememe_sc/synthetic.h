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

// Random sememe KBs with a hidden SCAS ground truth, used for end-to-end runs
// without external resources.

#ifndef SEMEME_SC_SYNTHETIC_H_
#define SEMEME_SC_SYNTHETIC_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sememe_sc/embedding_store.h"
#include "sememe_sc/sememe_kb.h"

namespace sememe_sc {

struct SyntheticOptions {
  std::size_t n_words = 200;
  std::size_t n_sememes = 50;
  std::size_t n_mwes = 300;
  std::size_t dim = 20;
  std::uint64_t seed = 1;
  // Std-dev of Gaussian noise added to the reference embeddings.
  double noise = 0.0;
  // Requested share of SCD 0, 1, 2, 3 among the MWEs.
  std::array<double, 4> scd_mixture = {0.25, 0.25, 0.25, 0.25};
  std::size_t max_word_sememes = 6;
  double embedding_scale = 0.5;  // words and sememes ~ U[-s, s]
  double weight_scale = 2.0;     // W_c ~ U[-g/sqrt(2d), g/sqrt(2d)]
  std::size_t n_similarity_pairs = 100;
  double scd_label_noise = 0.5;  // std-dev of the simulated human SCD labels
};

struct SyntheticData {
  std::string lexicon_text;
  std::string mwe_text;
  std::string similarity_text;  // token1, token2, cosine of reference embeddings
  std::string gold_scd_text;    // token, computed SCD plus label noise
  EmbeddingTable words;
  EmbeddingTable sememes;
  EmbeddingTable references;  // p^r for every MWE
  Eigen::MatrixXd composition;
  Eigen::VectorXd composition_bias;
  std::vector<ScdLevel> requested_scd;  // per MWE, in file order
};

// Throws PreconditionError when the sizes cannot be realized (too few words
// for distinct pairs, too few sememes for the requested SCD classes).
SyntheticData GenerateSynthetic(const SyntheticOptions& options);

}  // namespace sememe_sc

#endif  // SEMEME_SC_SYNTHETIC_H_

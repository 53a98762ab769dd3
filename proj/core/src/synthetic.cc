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

#include "sememe_sc/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "sememe_sc/errors.h"
#include "sememe_sc/text_io.h"

namespace sememe_sc {

namespace {

using Rng = std::mt19937_64;

std::vector<std::size_t> SampleWithout(Rng& rng, std::vector<std::size_t> pool,
                                       std::size_t count) {
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min(count, pool.size()));
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::size_t UniformIn(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::string JoinIds(const std::vector<std::size_t>& set) {
  std::string out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += ',';
    out += "sem" + std::to_string(set[i]);
  }
  return out;
}

// Gold MWE sememes realizing `level` against the constituents' union, or
// nothing when the union makes that level impossible.
std::optional<std::vector<std::size_t>> GoldForLevel(Rng& rng, ScdLevel level,
                                                      const std::vector<std::size_t>& u,
                                                      std::size_t n_sememes) {
  std::vector<std::size_t> outside;
  for (std::size_t s = 0; s < n_sememes; ++s) {
    if (!std::binary_search(u.begin(), u.end(), s)) outside.push_back(s);
  }
  std::vector<std::size_t> gold;
  switch (level) {
    case ScdLevel::k3:
      return u;
    case ScdLevel::k2:
      if (u.size() < 2) return std::nullopt;
      return SampleWithout(rng, u, UniformIn(rng, 1, u.size() - 1));
    case ScdLevel::k1: {
      if (outside.empty()) return std::nullopt;
      gold = SampleWithout(rng, u, UniformIn(rng, 1, std::min<std::size_t>(u.size(), 3)));
      const auto extra =
          SampleWithout(rng, outside, UniformIn(rng, 1, std::min<std::size_t>(outside.size(), 3)));
      gold.insert(gold.end(), extra.begin(), extra.end());
      std::sort(gold.begin(), gold.end());
      return gold;
    }
    case ScdLevel::k0:
      if (outside.empty()) return std::nullopt;
      return SampleWithout(rng, outside,
                           UniformIn(rng, 1, std::min<std::size_t>(outside.size(), 3)));
  }
  return std::nullopt;
}

}  // namespace

SyntheticData GenerateSynthetic(const SyntheticOptions& options) {
  const std::size_t n_words = options.n_words;
  const std::size_t n_sememes = options.n_sememes;
  const std::size_t d = options.dim;
  if (n_words < 2 || n_sememes < 2 || options.n_mwes == 0 || d == 0) {
    throw PreconditionError("synthetic: need >= 2 words, >= 2 sememes, >= 1 MWE, d >= 1");
  }
  if (options.n_mwes > n_words * (n_words - 1)) {
    throw PreconditionError("synthetic: more MWEs than distinct ordered word pairs");
  }
  if (options.max_word_sememes == 0) {
    throw PreconditionError("synthetic: max_word_sememes must be positive");
  }
  const double mixture_sum =
      std::accumulate(options.scd_mixture.begin(), options.scd_mixture.end(), 0.0);
  if (!(mixture_sum > 0) ||
      std::any_of(options.scd_mixture.begin(), options.scd_mixture.end(),
                  [](double w) { return w < 0; })) {
    throw PreconditionError("synthetic: SCD mixture weights must be non-negative");
  }

  Rng rng(options.seed);
  SyntheticData data;

  std::vector<std::size_t> all_sememes(n_sememes);
  std::iota(all_sememes.begin(), all_sememes.end(), 0);
  std::vector<std::vector<std::size_t>> word_sememes(n_words);
  std::vector<std::string> word_tokens;
  const std::size_t max_per_word = std::min(options.max_word_sememes, n_sememes);
  for (std::size_t w = 0; w < n_words; ++w) {
    word_tokens.push_back("w" + std::to_string(w));
    word_sememes[w] = SampleWithout(rng, all_sememes, UniformIn(rng, 1, max_per_word));
    data.lexicon_text += word_tokens[w] + '\t' + JoinIds(word_sememes[w]) + '\n';
  }

  std::vector<std::string> sememe_tokens;
  for (std::size_t s = 0; s < n_sememes; ++s) sememe_tokens.push_back("sem" + std::to_string(s));
  data.words = InitRandom(word_tokens, d, rng(), options.embedding_scale);
  data.words.MarkAllTrainable(false);
  data.sememes = InitRandom(sememe_tokens, d, rng(), options.embedding_scale);

  const auto dd = static_cast<Eigen::Index>(d);
  const double bound = options.weight_scale / std::sqrt(2.0 * static_cast<double>(d));
  std::uniform_real_distribution<double> weight(-bound, bound);
  std::uniform_real_distribution<double> small(-0.1, 0.1);
  data.composition.resize(dd, 2 * dd);
  for (Eigen::Index j = 0; j < 2 * dd; ++j) {
    for (Eigen::Index i = 0; i < dd; ++i) data.composition(i, j) = weight(rng);
  }
  data.composition_bias.resize(dd);
  for (Eigen::Index i = 0; i < dd; ++i) data.composition_bias(i) = small(rng);

  std::discrete_distribution<int> level_dist(options.scd_mixture.begin(),
                                             options.scd_mixture.end());
  std::normal_distribution<double> gaussian(0.0, 1.0);
  std::set<std::pair<std::size_t, std::size_t>> used_pairs;
  std::vector<std::string> mwe_tokens;
  Eigen::MatrixXd references(static_cast<Eigen::Index>(options.n_mwes), dd);
  constexpr int kMaxAttempts = 10000;

  for (std::size_t m = 0; m < options.n_mwes; ++m) {
    const auto level = static_cast<ScdLevel>(level_dist(rng));
    std::size_t a = 0, b = 0;
    std::optional<std::vector<std::size_t>> gold;
    for (int attempt = 0; attempt < kMaxAttempts && !gold; ++attempt) {
      a = UniformIn(rng, 0, n_words - 1);
      b = UniformIn(rng, 0, n_words - 1);
      if (a == b || used_pairs.count({a, b})) continue;
      std::vector<std::size_t> u;
      std::set_union(word_sememes[a].begin(), word_sememes[a].end(),
                     word_sememes[b].begin(), word_sememes[b].end(), std::back_inserter(u));
      gold = GoldForLevel(rng, level, u, n_sememes);
    }
    if (!gold) {
      throw PreconditionError("synthetic: cannot realize SCD " +
                              std::to_string(ScdValue(level)) + " with these sizes");
    }
    used_pairs.insert({a, b});
    const auto rule = kAllRules[UniformIn(rng, 0, 3)];
    mwe_tokens.push_back("m" + std::to_string(m));
    data.mwe_text += mwe_tokens.back() + '\t' + word_tokens[a] + '\t' + word_tokens[b] +
                     '\t' + std::string(RuleLabel(rule)) + '\t' + JoinIds(*gold) + '\n';
    data.requested_scd.push_back(level);

    Eigen::VectorXd concat(2 * dd);
    Eigen::VectorXd aggregate = Eigen::VectorXd::Zero(dd);
    for (std::size_t s : word_sememes[a]) aggregate += data.sememes.row(s).transpose();
    for (std::size_t s : word_sememes[b]) aggregate += data.sememes.row(s).transpose();
    concat << data.words.row(a).transpose() + data.words.row(b).transpose(), aggregate;
    Eigen::VectorXd p =
        (data.composition * concat + data.composition_bias).array().tanh().matrix();
    if (options.noise > 0) {
      for (Eigen::Index i = 0; i < dd; ++i) p(i) += options.noise * gaussian(rng);
    }
    references.row(static_cast<Eigen::Index>(m)) = p.transpose();

    const double label = std::clamp(
        ScdValue(level) + options.scd_label_noise * gaussian(rng), 0.0, 3.0);
    data.gold_scd_text += mwe_tokens.back() + '\t' + FormatDouble(label) + '\n';
  }
  data.references = EmbeddingTable(mwe_tokens, std::move(references));

  const std::size_t max_pairs = options.n_mwes * (options.n_mwes - 1) / 2;
  const std::size_t n_pairs = std::min(options.n_similarity_pairs, max_pairs);
  std::set<std::pair<std::size_t, std::size_t>> sim_pairs;
  while (sim_pairs.size() < n_pairs) {
    std::size_t a = UniformIn(rng, 0, options.n_mwes - 1);
    std::size_t b = UniformIn(rng, 0, options.n_mwes - 1);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!sim_pairs.insert({a, b}).second) continue;
    const Eigen::VectorXd pa = data.references.row(a).transpose();
    const Eigen::VectorXd pb = data.references.row(b).transpose();
    const double cosine = pa.dot(pb) / (pa.norm() * pb.norm());
    data.similarity_text +=
        mwe_tokens[a] + '\t' + mwe_tokens[b] + '\t' + FormatDouble(cosine) + '\n';
  }
  return data;
}

}  // namespace sememe_sc

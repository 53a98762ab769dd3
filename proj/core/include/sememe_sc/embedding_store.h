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

#ifndef SEMEME_SC_EMBEDDING_STORE_H_
#define SEMEME_SC_EMBEDDING_STORE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace sememe_sc {

// Token -> dense row of a |tokens| x dim matrix. Every row is frozen or
// trainable; training only ever writes trainable rows. Lookups of unknown
// tokens throw instead of returning zeros.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::vector<std::string> tokens, Eigen::MatrixXd matrix,
                 bool trainable = false);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.cols()); }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::optional<std::size_t> Find(std::string_view token) const;
  bool Contains(std::string_view token) const { return Find(token).has_value(); }
  std::size_t IndexOf(std::string_view token) const;

  Eigen::VectorXd Lookup(std::string_view token) const {
    return matrix_.row(static_cast<Eigen::Index>(IndexOf(token))).transpose();
  }
  auto row(std::size_t i) const { return matrix_.row(static_cast<Eigen::Index>(i)); }

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  Eigen::MatrixXd& mutable_matrix() { return matrix_; }

  bool trainable(std::size_t i) const { return trainable_.at(i) != 0; }
  void MarkTrainable(std::span<const std::string> tokens, bool value = true);
  void MarkAllTrainable(bool value = true);

  // Rows for `tokens`, in that order, keeping their trainable flags.
  EmbeddingTable Select(std::span<const std::string> tokens) const;

  bool operator==(const EmbeddingTable& other) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
  Eigen::MatrixXd matrix_;
  std::vector<char> trainable_;
};

// `token v1 ... vd` per line. The dimension comes from the first row unless
// `expected_dim` is given. All rows come back frozen.
EmbeddingTable LoadEmbeddings(std::string_view text,
                              std::optional<std::size_t> expected_dim = {});
std::string WriteEmbeddings(const EmbeddingTable& table);

// Uniform in [-scale, scale], every row trainable.
EmbeddingTable InitRandom(std::vector<std::string> tokens, std::size_t dim,
                          std::uint64_t seed, double scale = 0.01);

// Rows for `tokens` in order: copied from `pretrained` where present, drawn
// as in InitRandom otherwise. Every row is trainable. Tokens without a
// pretrained row are appended to `missing` when it is non-null.
EmbeddingTable AlignOrInit(std::span<const std::string> tokens,
                           const EmbeddingTable* pretrained, std::size_t dim,
                           std::uint64_t seed, double scale = 0.01,
                           std::vector<std::string>* missing = nullptr);

}  // namespace sememe_sc

#endif  // SEMEME_SC_EMBEDDING_STORE_H_

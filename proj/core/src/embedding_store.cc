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

#include "sememe_sc/embedding_store.h"

#include <random>
#include <unordered_set>

#include "sememe_sc/errors.h"
#include "sememe_sc/text_io.h"

namespace sememe_sc {

EmbeddingTable::EmbeddingTable(std::vector<std::string> tokens,
                               Eigen::MatrixXd matrix, bool trainable)
    : tokens_(std::move(tokens)),
      matrix_(std::move(matrix)),
      trainable_(tokens_.size(), trainable ? 1 : 0) {
  if (static_cast<std::size_t>(matrix_.rows()) != tokens_.size()) {
    throw PreconditionError("embedding matrix has " + std::to_string(matrix_.rows()) +
                            " rows for " + std::to_string(tokens_.size()) + " tokens");
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) throw PreconditionError("empty embedding token");
    if (!index_.emplace(tokens_[i], i).second) {
      throw PreconditionError("duplicate embedding token '" + tokens_[i] + "'");
    }
  }
}

std::optional<std::size_t> EmbeddingTable::Find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t EmbeddingTable::IndexOf(std::string_view token) const {
  if (auto found = Find(token)) return *found;
  throw PreconditionError("unknown token '" + std::string(token) + "'");
}

void EmbeddingTable::MarkTrainable(std::span<const std::string> tokens, bool value) {
  std::vector<std::size_t> rows;
  rows.reserve(tokens.size());
  for (const auto& token : tokens) rows.push_back(IndexOf(token));
  for (std::size_t r : rows) trainable_[r] = value ? 1 : 0;
}

void EmbeddingTable::MarkAllTrainable(bool value) {
  std::fill(trainable_.begin(), trainable_.end(), value ? 1 : 0);
}

EmbeddingTable EmbeddingTable::Select(std::span<const std::string> tokens) const {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(tokens.size()), matrix_.cols());
  std::vector<char> flags;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::size_t src = IndexOf(tokens[i]);
    rows.row(static_cast<Eigen::Index>(i)) = matrix_.row(static_cast<Eigen::Index>(src));
    flags.push_back(trainable_[src]);
  }
  EmbeddingTable out({tokens.begin(), tokens.end()}, std::move(rows));
  out.trainable_ = std::move(flags);
  return out;
}

bool EmbeddingTable::operator==(const EmbeddingTable& other) const {
  return tokens_ == other.tokens_ && trainable_ == other.trainable_ &&
         matrix_.rows() == other.matrix_.rows() &&
         matrix_.cols() == other.matrix_.cols() && matrix_ == other.matrix_;
}

EmbeddingTable LoadEmbeddings(std::string_view text,
                              std::optional<std::size_t> expected_dim) {
  std::vector<std::string> tokens;
  std::vector<double> values;
  std::unordered_set<std::string_view> seen;
  std::optional<std::size_t> dim = expected_dim;
  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) continue;
    const auto fields = SplitFields(lines[i], ' ');
    if (fields.size() < 2 || fields[0].empty()) {
      throw DataError("embedding line needs a token and at least one value", line_no);
    }
    const std::size_t row_dim = fields.size() - 1;
    if (!dim) dim = row_dim;
    if (row_dim != *dim) {
      throw DataError("expected dimension " + std::to_string(*dim) + ", got " +
                          std::to_string(row_dim),
                      line_no);
    }
    for (std::size_t f = 1; f < fields.size(); ++f) {
      double v = 0;
      if (!ParseDouble(fields[f], &v)) {
        throw DataError("non-numeric value '" + std::string(fields[f]) + "'", line_no);
      }
      values.push_back(v);
    }
    if (!seen.emplace(fields[0]).second) {
      throw DataError("duplicate token '" + std::string(fields[0]) + "'", line_no);
    }
    tokens.emplace_back(fields[0]);
  }
  const auto rows = static_cast<Eigen::Index>(tokens.size());
  const auto cols = static_cast<Eigen::Index>(dim.value_or(0));
  Eigen::MatrixXd matrix =
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          values.data(), rows, cols);
  return EmbeddingTable(std::move(tokens), std::move(matrix));
}

std::string WriteEmbeddings(const EmbeddingTable& table) {
  std::string out;
  const Eigen::MatrixXd& m = table.matrix();
  for (std::size_t i = 0; i < table.size(); ++i) {
    out += table.tokens()[i];
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out += ' ';
      out += FormatDouble(m(static_cast<Eigen::Index>(i), j));
    }
    out += '\n';
  }
  return out;
}

EmbeddingTable InitRandom(std::vector<std::string> tokens, std::size_t dim,
                          std::uint64_t seed, double scale) {
  if (tokens.empty()) throw PreconditionError("InitRandom needs at least one token");
  if (!(scale > 0)) throw PreconditionError("InitRandom scale must be positive");
  if (dim == 0) throw PreconditionError("InitRandom dimension must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-scale, scale);
  Eigen::MatrixXd matrix(static_cast<Eigen::Index>(tokens.size()),
                         static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) matrix(i, j) = uniform(rng);
  }
  return EmbeddingTable(std::move(tokens), std::move(matrix), /*trainable=*/true);
}

EmbeddingTable AlignOrInit(std::span<const std::string> tokens,
                           const EmbeddingTable* pretrained, std::size_t dim,
                           std::uint64_t seed, double scale,
                           std::vector<std::string>* missing) {
  if (pretrained != nullptr && pretrained->dim() != dim) {
    throw PreconditionError("pretrained dimension " + std::to_string(pretrained->dim()) +
                            " does not match " + std::to_string(dim));
  }
  EmbeddingTable table =
      InitRandom(std::vector<std::string>(tokens.begin(), tokens.end()), dim, seed, scale);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::optional<std::size_t> row =
        pretrained != nullptr ? pretrained->Find(tokens[i]) : std::nullopt;
    if (row) {
      table.mutable_matrix().row(static_cast<Eigen::Index>(i)) =
          pretrained->matrix().row(static_cast<Eigen::Index>(*row));
    } else if (missing != nullptr) {
      missing->push_back(tokens[i]);
    }
  }
  return table;
}

}  // namespace sememe_sc

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

#include "sememe_sc/checkpoint.h"

#include "sememe_sc/errors.h"
#include "sememe_sc/text_io.h"

namespace sememe_sc {

namespace {

constexpr const char* kManifest = "manifest.txt";
constexpr const char* kSememeFile = "sememes.vec";

EmbeddingTable TensorAsTable(const TensorView& t) {
  std::vector<std::string> tokens;
  for (Eigen::Index r = 0; r < t.rows; ++r) tokens.push_back(std::to_string(r));
  Eigen::MatrixXd m = Eigen::Map<const Eigen::MatrixXd>(t.data, t.rows, t.cols);
  return EmbeddingTable(std::move(tokens), std::move(m));
}

std::string RankList(const std::array<int, 4>& ranks) {
  std::string out;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ranks[i]);
  }
  return out;
}

std::array<int, 4> ParseRankList(const std::string& text) {
  const auto fields = SplitFields(text, ',');
  std::array<int, 4> ranks{};
  if (fields.size() == 1) {
    ranks.fill(std::stoi(std::string(fields[0])));
  } else if (fields.size() == 4) {
    for (std::size_t i = 0; i < 4; ++i) ranks[i] = std::stoi(std::string(fields[i]));
  } else {
    throw DataError("checkpoint: h_r must have 1 or 4 entries");
  }
  return ranks;
}

}  // namespace

std::map<std::string, std::string> ParseKeyValues(std::string_view text) {
  std::map<std::string, std::string> values;
  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (IsSkippableLine(lines[i])) continue;
    const std::size_t eq = lines[i].find('=');
    if (eq == std::string_view::npos) {
      throw DataError("expected key=value", i + 1);
    }
    auto trim = [](std::string_view s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string_view::npos ? std::string() : std::string(s.substr(b, e - b + 1));
    };
    std::string key = trim(lines[i].substr(0, eq));
    if (key.empty()) throw DataError("empty key", i + 1);
    values[key] = trim(lines[i].substr(eq + 1));
  }
  return values;
}

void SaveCheckpoint(const std::filesystem::path& dir, const Checkpoint& checkpoint) {
  std::filesystem::create_directories(dir);
  const ModelParams& params = checkpoint.params;
  std::string manifest;
  manifest += "kind=" + std::string(ModelKindName(params.spec.kind)) + "\n";
  manifest += "d=" + std::to_string(params.dim) + "\n";
  manifest += "h_r=" + RankList(params.spec.rule_rank) + "\n";
  manifest += "rule_mode=" + std::string(RuleModeName(params.spec.rule_mode)) + "\n";
  manifest += "epoch=" + std::to_string(checkpoint.epoch) + "\n";
  manifest += "lr=" + FormatDouble(checkpoint.lr) + "\n";
  manifest += "task=" + std::string(TaskName(checkpoint.task)) + "\n";
  manifest += std::string("shared_attention=") +
              (params.spec.shared_attention ? "true" : "false") + "\n";
  WriteFile(dir / kManifest, manifest);

  ForEachTensor(const_cast<Weights&>(params.weights), [&](const TensorView& t) {
    WriteFile(dir / (t.name + ".vec"), WriteEmbeddings(TensorAsTable(t)));
  });
  WriteFile(dir / kSememeFile, WriteEmbeddings(params.sememes));
}

Checkpoint LoadCheckpoint(const std::filesystem::path& dir) {
  const auto kv = ParseKeyValues(ReadFile(dir / kManifest));
  auto get = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw DataError("checkpoint manifest lacks '" + key + "'");
    return it->second;
  };
  Checkpoint checkpoint;
  ModelSpec spec;
  spec.kind = ParseModelKind(get("kind"));
  spec.rule_mode = ParseRuleMode(get("rule_mode"));
  spec.rule_rank = ParseRankList(get("h_r"));
  spec.shared_attention = get("shared_attention") != "false";
  const std::size_t dim = std::stoul(get("d"));
  checkpoint.task = ParseTask(get("task"));
  checkpoint.epoch = std::stoi(get("epoch"));
  if (!ParseDouble(get("lr"), &checkpoint.lr)) throw DataError("checkpoint: bad lr");

  EmbeddingTable sememes = LoadEmbeddings(ReadFile(dir / kSememeFile));
  if (sememes.size() > 0 && sememes.dim() != dim) {
    throw DataError("checkpoint: sememe table dimension differs from d");
  }
  sememes.MarkAllTrainable(true);
  checkpoint.params = InitParams(spec, dim, std::move(sememes), 0);
  ForEachTensor(checkpoint.params.weights, [&](const TensorView& t) {
    const EmbeddingTable table = LoadEmbeddings(ReadFile(dir / (t.name + ".vec")));
    if (static_cast<Eigen::Index>(table.size()) != t.rows ||
        static_cast<Eigen::Index>(table.dim()) != t.cols) {
      throw DataError("checkpoint: tensor '" + t.name + "' has the wrong shape");
    }
    Eigen::Map<Eigen::MatrixXd>(t.data, t.rows, t.cols) = table.matrix();
  });
  return checkpoint;
}

}  // namespace sememe_sc

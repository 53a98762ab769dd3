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

#include "config.h"

#include <charconv>

#include "sememe_sc/checkpoint.h"
#include "sememe_sc/errors.h"
#include "sememe_sc/text_io.h"

namespace sememe_sc::cli {
namespace fs = std::filesystem;

const std::vector<KeyInfo>& KnownKeys() {
  static const std::vector<KeyInfo> keys = {
      {"seed", "random seed for splits, initialization, shuffling and generation"},
      {"out", "run directory for all outputs", true},
      {"model", "add, mul, scas_s, scas, scmsa, scas_r or scmsa_r"},
      {"task", "similarity or sememe"},
      {"rule-mode", "full or lowrank"},
      {"lexicon", "word<TAB>sememes lexicon file", true},
      {"mwes", "MWE file: token, constituents, rule, sememes", true},
      {"embeddings", "constituent word vectors (text format)", true},
      {"sememe-embeddings", "pretrained sememe vectors; missing rows start random", true},
      {"mwe-embeddings", "reference MWE vectors for similarity training", true},
      {"similarity", "comma-separated MWE similarity datasets", true},
      {"gold-scd", "human SCD labels: token<TAB>score", true},
      {"checkpoint", "checkpoint directory written by train", true},
      {"min-sememe-freq", "drop sememes annotated on fewer entries"},
      {"split", "train,valid,test ratios"},
      {"dim", "embedding dimension d"},
      {"rule-rank", "low-rank size h_r for every rule"},
      {"shared-attention", "share W_a between the two attention directions"},
      {"lambda", "L2 regularization weight"},
      {"k", "weight on positive sememe labels"},
      {"lr0", "initial learning rate (task default when absent)"},
      {"decay", "per-epoch learning rate decay"},
      {"epochs", "number of epochs"},
      {"batch-size", "examples per SGD step"},
      {"allow-missing", "skip similarity pairs whose tokens are not MWEs"},
      {"n-words", "synthetic: number of words"},
      {"n-sememes", "synthetic: number of sememes"},
      {"n-mwes", "synthetic: number of MWEs"},
      {"noise", "synthetic: std-dev of noise on reference embeddings"},
      {"scd-mixture", "synthetic: four SCD level weights, 0 to 3"},
      {"max-word-sememes", "synthetic: largest sememe set per word"},
      {"n-similarity-pairs", "synthetic: similarity pairs to emit"},
      {"scd-label-noise", "synthetic: std-dev of simulated human SCD labels"},
      {"models", "gradcheck: comma-separated model kinds"},
      {"tasks", "gradcheck: comma-separated tasks"},
  };
  return keys;
}

const KeyInfo* FindKey(std::string_view name) {
  for (const KeyInfo& k : KnownKeys()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

namespace {

std::string Absolute(const fs::path& base, std::string_view value) {
  fs::path p(value);
  if (p.is_relative()) p = base / p;
  return p.lexically_normal().string();
}

std::string ResolvePathValue(const fs::path& base, std::string_view value) {
  std::string out;
  for (std::string_view part : SplitFields(value, ',')) {
    if (!out.empty()) out += ',';
    out += Absolute(base, part);
  }
  return out;
}

}  // namespace

Config Config::Load(const std::optional<fs::path>& file,
                    const std::map<std::string, std::string>& overrides) {
  Config config;
  if (file) {
    const fs::path base = fs::absolute(*file).parent_path();
    for (const auto& [key, value] : ParseKeyValues(ReadFile(*file))) {
      const KeyInfo* info = FindKey(key);
      if (info == nullptr) {
        throw DataError("config " + file->string() + ": unknown key '" + key + "'");
      }
      config.values_[key] = info->is_path ? ResolvePathValue(base, value) : value;
    }
  }
  for (const auto& [key, value] : overrides) {
    const KeyInfo* info = FindKey(key);
    if (info == nullptr) throw DataError("unknown option '" + key + "'");
    config.values_[key] = info->is_path ? ResolvePathValue(fs::current_path(), value) : value;
  }
  return config;
}

bool Config::Has(std::string_view key) const { return values_.contains(key); }

std::string Config::String(std::string_view key, std::string_view fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? std::string(fallback) : it->second;
}

std::string Config::RequiredString(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) {
    throw DataError("missing required setting '" + std::string(key) + "'");
  }
  return it->second;
}

double Config::Double(std::string_view key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  double value = 0;
  if (!ParseDouble(it->second, &value)) {
    throw DataError("setting '" + std::string(key) + "' is not a number: '" + it->second + "'");
  }
  return value;
}

long Config::Int(std::string_view key, long fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  long value = 0;
  const std::string& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw DataError("setting '" + std::string(key) + "' is not an integer: '" + s + "'");
  }
  return value;
}

std::uint64_t Config::Seed() const {
  const auto it = values_.find("seed");
  if (it == values_.end()) return 1;
  std::uint64_t value = 0;
  const std::string& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw DataError("seed must be a non-negative integer: '" + s + "'");
  }
  return value;
}

bool Config::Bool(std::string_view key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw DataError("setting '" + std::string(key) + "' must be true or false");
}

std::vector<std::string> Config::List(std::string_view key) const {
  std::vector<std::string> out;
  const auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) return out;
  for (std::string_view part : SplitFields(it->second, ',')) {
    if (part.empty()) throw DataError("setting '" + std::string(key) + "' has an empty item");
    out.emplace_back(part);
  }
  return out;
}

fs::path Config::RequiredPath(std::string_view key, bool must_exist) const {
  const fs::path p = RequiredString(key);
  if (must_exist && !fs::exists(p)) {
    throw DataError("setting '" + std::string(key) + "': no such path " + p.string());
  }
  return p;
}

std::optional<fs::path> Config::OptionalPath(std::string_view key) const {
  if (!Has(key) || String(key, "").empty()) return std::nullopt;
  return RequiredPath(key);
}

std::vector<fs::path> Config::PathList(std::string_view key) const {
  std::vector<fs::path> out;
  for (const std::string& item : List(key)) {
    if (!fs::exists(item)) {
      throw DataError("setting '" + std::string(key) + "': no such path " + item);
    }
    out.emplace_back(item);
  }
  return out;
}

std::string Config::Snapshot() const {
  std::string out;
  for (const auto& [key, value] : values_) out += key + '=' + value + '\n';
  return out;
}

}  // namespace sememe_sc::cli

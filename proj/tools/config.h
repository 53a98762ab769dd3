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

// Run configuration: a key=value file merged with command-line overrides.
// Flag names and file keys are the same strings.

#ifndef SEMEME_SC_TOOLS_CONFIG_H_
#define SEMEME_SC_TOOLS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sememe_sc::cli {

struct KeyInfo {
  std::string_view name;
  std::string_view help;
  bool is_path = false;
};

// Every key the tool understands, in display order.
const std::vector<KeyInfo>& KnownKeys();
const KeyInfo* FindKey(std::string_view name);

class Config {
 public:
  // Reads `file` (if any), then applies `overrides`. Relative paths in the
  // file resolve against its directory; relative override paths against the
  // working directory. Unknown keys raise DataError.
  static Config Load(const std::optional<std::filesystem::path>& file,
                     const std::map<std::string, std::string>& overrides);

  bool Has(std::string_view key) const;
  std::string String(std::string_view key, std::string_view fallback) const;
  std::string RequiredString(std::string_view key) const;
  double Double(std::string_view key, double fallback) const;
  long Int(std::string_view key, long fallback) const;
  std::uint64_t Seed() const;
  bool Bool(std::string_view key, bool fallback) const;
  // Comma-separated values; empty when the key is absent.
  std::vector<std::string> List(std::string_view key) const;

  // Path keys must exist when `must_exist` is set.
  std::filesystem::path RequiredPath(std::string_view key, bool must_exist = true) const;
  std::optional<std::filesystem::path> OptionalPath(std::string_view key) const;
  std::vector<std::filesystem::path> PathList(std::string_view key) const;

  // Sorted key=value lines with absolute paths; loading it reproduces the run.
  std::string Snapshot() const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace sememe_sc::cli

#endif  // SEMEME_SC_TOOLS_CONFIG_H_

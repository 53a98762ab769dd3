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

#ifndef SEMEME_SC_CHECKPOINT_H_
#define SEMEME_SC_CHECKPOINT_H_

#include <filesystem>
#include <map>
#include <string>

#include "sememe_sc/composition.h"
#include "sememe_sc/training.h"

namespace sememe_sc {

struct Checkpoint {
  ModelParams params;
  Task task = Task::kSimilarity;
  int epoch = 0;
  double lr = 0;
};

// Writes `dir/manifest.txt` (key=value lines: kind, d, h_r, rule_mode, epoch,
// lr, task, shared_attention) and one embedding-format file per tensor, rows
// keyed by row number; the sememe table is keyed by sememe identifier.
// Output bytes depend only on the arguments.
void SaveCheckpoint(const std::filesystem::path& dir, const Checkpoint& checkpoint);
Checkpoint LoadCheckpoint(const std::filesystem::path& dir);

std::map<std::string, std::string> ParseKeyValues(std::string_view text);

}  // namespace sememe_sc

#endif  // SEMEME_SC_CHECKPOINT_H_

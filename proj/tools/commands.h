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

#ifndef SEMEME_SC_TOOLS_COMMANDS_H_
#define SEMEME_SC_TOOLS_COMMANDS_H_

#include <functional>
#include <string_view>
#include <vector>

#include "config.h"

namespace sememe_sc::cli {

enum ExitCode : int { kExitOk = 0, kExitDataError = 1, kExitNumerical = 2 };

struct CommandInfo {
  std::string_view name;
  std::string_view description;
  std::vector<std::string_view> keys;  // flags accepted besides --config
  std::function<int(const Config&)> run;
};

const std::vector<CommandInfo>& Commands();

// Runs `command`, mapping exceptions to exit codes and reporting them on stderr.
int RunCommand(const CommandInfo& command, const Config& config);

}  // namespace sememe_sc::cli

#endif  // SEMEME_SC_TOOLS_COMMANDS_H_

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

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.h"
#include "config.h"

int main(int argc, char** argv) {
  namespace cli = sememe_sc::cli;
  CLI::App app{"Sememe-incorporated semantic compositionality: SC degrees, composition "
               "models, training and evaluation."};
  app.require_subcommand(1);

  struct Parsed {
    CLI::App* sub = nullptr;
    const cli::CommandInfo* info = nullptr;
    std::string config_path;
    std::map<std::string, std::string> values;
    std::vector<std::pair<std::string, CLI::Option*>> options;
  };
  std::vector<Parsed> parsed(cli::Commands().size());
  for (std::size_t c = 0; c < cli::Commands().size(); ++c) {
    const cli::CommandInfo& info = cli::Commands()[c];
    Parsed& p = parsed[c];
    p.info = &info;
    p.sub = app.add_subcommand(std::string(info.name), std::string(info.description));
    p.sub->add_option("--config", p.config_path, "key=value config file; flags override it");
    for (std::string_view key : info.keys) {
      const cli::KeyInfo* k = cli::FindKey(key);
      const std::string name(key);
      p.options.emplace_back(name, p.sub->add_option("--" + name, p.values[name],
                                                      k ? std::string(k->help) : ""));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitDataError;
  }

  for (Parsed& p : parsed) {
    if (!p.sub->parsed()) continue;
    std::map<std::string, std::string> overrides;
    for (const auto& [name, option] : p.options) {
      if (option->count() > 0) overrides[name] = p.values[name];
    }
    std::optional<std::filesystem::path> file;
    if (!p.config_path.empty()) file = p.config_path;
    std::optional<cli::Config> config;
    try {
      config = cli::Config::Load(file, overrides);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return cli::kExitDataError;
    }
    return cli::RunCommand(*p.info, *config);
  }
  return cli::kExitDataError;
}

// Copyright 2026 The ringret Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// key=value run configuration merged into a subcommand's arguments.

#ifndef RINGRET_TOOLS_RUN_CONFIG_HPP_
#define RINGRET_TOOLS_RUN_CONFIG_HPP_

#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ringret::cli {

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct RunConfig {
  std::vector<ConfigEntry> entries;  // file order
  std::filesystem::path source;      // the config file, for messages
  std::filesystem::path base_dir;    // its directory
};

// Blank lines and lines starting with '#' are ignored. Keys may be written
// with or without a leading "--". Throws ParseError on malformed lines and
// repeated keys.
RunConfig parse_run_config(std::string_view text, std::filesystem::path base_dir);
RunConfig read_run_config(const std::filesystem::path& path);

// Option names whose values are filesystem paths.
const std::set<std::string>& path_keys();

// Returns `args` (the tokens after the subcommand name) with every config
// entry not already given on the command line prepended as "--key=value".
// `known(key)` says whether the subcommand accepts the key; unknown keys
// raise ParseError. Relative paths are resolved against base_dir.
std::vector<std::string> merge_run_config(
    const RunConfig& config, const std::vector<std::string>& args,
    const std::function<bool(const std::string&)>& known);

// Removes "--config FILE" / "--config=FILE" from `args` and returns FILE
// (empty when absent).
std::string take_config_path(std::vector<std::string>& args);

}  // namespace ringret::cli

#endif  // RINGRET_TOOLS_RUN_CONFIG_HPP_

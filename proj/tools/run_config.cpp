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

#include "run_config.hpp"

#include <algorithm>

#include "ringret/errors.hpp"
#include "ringret/manifest.hpp"

namespace ringret::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Long option name given in a command-line token, or "" for other tokens.
std::string option_name(const std::string& token) {
  if (token.size() < 3 || token.compare(0, 2, "--") != 0) return {};
  return token.substr(2, token.find('=') == std::string::npos ? std::string::npos
                                                               : token.find('=') - 2);
}

}  // namespace

RunConfig parse_run_config(std::string_view text, std::filesystem::path base_dir) {
  RunConfig config;
  config.base_dir = std::move(base_dir);
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos
                                                                    : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", line_no);
    std::string key(trim(line.substr(0, eq)));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty()) throw ParseError("empty key", line_no);
    if (!seen.insert(key).second) throw ParseError("key '" + key + "' repeated", line_no);
    config.entries.push_back({key, std::string(trim(line.substr(eq + 1))), line_no});
  }
  return config;
}

RunConfig read_run_config(const std::filesystem::path& path) {
  try {
    RunConfig config = parse_run_config(read_text_file(path), path.parent_path());
    config.source = path;
    return config;
  } catch (const ParseError& e) {
    throw e.in_file(path.string());
  }
}

const std::set<std::string>& path_keys() {
  static const std::set<std::string> keys = {
      "out",       "manifest", "features", "checkpoint", "rankings",
      "relevance", "clusters", "images",   "ringview",   "variants"};
  return keys;
}

std::vector<std::string> merge_run_config(
    const RunConfig& config, const std::vector<std::string>& args,
    const std::function<bool(const std::string&)>& known) {
  std::set<std::string> given;
  for (const auto& a : args) {
    const auto name = option_name(a);
    if (!name.empty()) given.insert(name);
  }
  std::vector<std::string> merged;
  for (const auto& [key, value, line] : config.entries) {
    if (!known(key)) {
      throw ParseError("unknown config key '" + key + "'", line, config.source.string());
    }
    if (given.count(key)) continue;  // command-line flags win
    std::string v = value;
    if (path_keys().count(key) && !v.empty()) {
      const std::filesystem::path p(v);
      if (p.is_relative()) v = (config.base_dir / p).lexically_normal().string();
    }
    merged.push_back("--" + key + "=" + v);
  }
  merged.insert(merged.end(), args.begin(), args.end());
  return merged;
}

std::string take_config_path(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size();) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  return path;
}

}  // namespace ringret::cli

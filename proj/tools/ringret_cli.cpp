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

// ringret command-line entry point.
//
// Exit codes: 0 success, 1 usage error, 2 data or format error, 3 numeric
// failure.

#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "commands.hpp"
#include "ringret/errors.hpp"
#include "run_config.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kNumeric = 3;

void setup_logging() {
  auto logger = spdlog::stderr_logger_st("ringret");
  logger->set_pattern("%Y-%m-%dT%H:%M:%S.%e%z [%l] %v");
  spdlog::set_default_logger(logger);
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"ringret: text-to-3D fine-grained retrieval toolkit"};
  app.require_subcommand(1);
  const auto commands = ringret::cli::register_commands(app);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    if (!args.empty()) {
      CLI::App* sub = nullptr;
      try {
        sub = app.get_subcommand(args.front());
      } catch (const CLI::OptionNotFound&) {
      }
      if (sub != nullptr) {
        std::vector<std::string> rest(args.begin() + 1, args.end());
        const std::string config_path = ringret::cli::take_config_path(rest);
        if (!config_path.empty()) {
          const auto config = ringret::cli::read_run_config(config_path);
          rest = ringret::cli::merge_run_config(config, rest, [&](const std::string& key) {
            return key != "config" && sub->get_option_no_throw("--" + key) != nullptr;
          });
        }
        args.assign(1, args.front());
        args.insert(args.end(), rest.begin(), rest.end());
      }
    }
  } catch (const ringret::Error& e) {
    spdlog::error("config: {}", e.what());
    return kUsage;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsage;
  }

  try {
    for (const auto& c : commands) {
      if (c.app->parsed()) c.run();
    }
  } catch (const ringret::NumericError& e) {
    spdlog::error("{}", e.what());
    return kNumeric;
  } catch (const ringret::Error& e) {
    spdlog::error("{}", e.what());
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return kData;
  } catch (const std::exception& e) {
    spdlog::error("unexpected failure: {}", e.what());
    return kData;
  }
  return 0;
}

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

#ifndef RINGRET_TOOLS_COMMANDS_HPP_
#define RINGRET_TOOLS_COMMANDS_HPP_

#include <functional>
#include <vector>

#include "CLI11.hpp"

namespace ringret::cli {

struct Command {
  CLI::App* app;
  std::function<void()> run;
};

// Adds synth, render, encode, train, retrieve, evaluate, cluster, augment
// and info to `app`.
std::vector<Command> register_commands(CLI::App& app);

}  // namespace ringret::cli

#endif  // RINGRET_TOOLS_COMMANDS_HPP_

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

#ifndef RINGRET_PRESETS_HPP_
#define RINGRET_PRESETS_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "ringret/aggregator.hpp"
#include "ringret/losses.hpp"
#include "ringret/retrieval.hpp"
#include "ringret/trainer.hpp"

namespace ringret {

// One team's hyperparameter profile.
struct Preset {
  std::string name;
  std::string summary;
  TrainConfig train;
  LossConfig loss;
  AggregatorMode mode = AggregatorMode::kFlat;
  int joint_dim = 128;
  ScoreStrategy scoring = ScoreStrategy::kSingle;
  int topk = 1;  // topk_sum_max only
};

// nero, tiktorch, etinifni, polars, thp.
const std::vector<Preset>& presets();
// Throws InvalidArgument for an unknown name.
const Preset& find_preset(std::string_view name);

// Aligned table of every preset.
std::string presets_table();

}  // namespace ringret

#endif  // RINGRET_PRESETS_HPP_

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

#ifndef RINGRET_CHECKPOINT_HPP_
#define RINGRET_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "ringret/aggregator.hpp"

namespace ringret {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// AGGP layout, all little-endian:
//   "AGGP" | u32 version
//   u32 input_dim, text_dim, model_dim, heads, layers, joint_dim, tokens, rings
//   f64 dropout | u32 mode (0 flat, 1 hierarchical, 2 mean_pool)
//   every tensor of AggregatorParams::tensors() in order, f64, column-major
std::string encode_checkpoint(const AggregatorParams& params);
AggregatorParams decode_checkpoint(std::string_view bytes);

void save_checkpoint(const AggregatorParams& params,
                     const std::filesystem::path& path);
AggregatorParams load_checkpoint(const std::filesystem::path& path);

}  // namespace ringret

#endif  // RINGRET_CHECKPOINT_HPP_

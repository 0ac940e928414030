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

#ifndef RINGRET_PGM_HPP_
#define RINGRET_PGM_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "ringret/ringview.hpp"

namespace ringret {

// Binary PGM (P5, maxval 255); byte = round(255 * coverage), halves away
// from zero.
std::string encode_pgm(const SilhouetteImage& image);
SilhouetteImage decode_pgm(std::string_view bytes);

void write_pgm(const SilhouetteImage& image, const std::filesystem::path& path);
SilhouetteImage read_pgm(const std::filesystem::path& path);

std::uint8_t quantize_coverage(double coverage);

}  // namespace ringret

#endif  // RINGRET_PGM_HPP_

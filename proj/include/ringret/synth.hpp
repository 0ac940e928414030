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

#ifndef RINGRET_SYNTH_HPP_
#define RINGRET_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ringret/manifest.hpp"
#include "ringret/mesh.hpp"

namespace ringret {

struct SynthSpec {
  int families = 5;
  int per_family = 4;
  int queries = 10;
  std::uint64_t seed = 0;
  // When true every query is relevant to all versions of its family;
  // otherwise to exactly one version (the single-pair training regime that
  // query propagation expands).
  bool family_relevance = true;
};

// A family is a parametric shape (sphere, box, cylinder, cone, ellipsoid)
// at one aspect class; its versions differ in tessellation and a small
// per-axis jitter.
struct SyntheticDataset {
  DatasetManifest manifest;
  std::vector<TriangleMesh> meshes;  // parallel to manifest.models
  std::vector<int> model_family;     // parallel to manifest.models
  std::vector<int> query_family;     // parallel to manifest.queries
};

SyntheticDataset generate_synthetic_dataset(const SynthSpec& spec);

// Writes `manifest.tsv` and `models/<id>.obj` under `dir`.
void write_synthetic_dataset(const SyntheticDataset& data,
                             const std::filesystem::path& dir);

}  // namespace ringret

#endif  // RINGRET_SYNTH_HPP_

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

#include "ringret/synth.hpp"

#include <array>
#include <string>

#include <fmt/format.h>

#include "ringret/errors.hpp"
#include "ringret/primitives.hpp"
#include "ringret/random.hpp"

namespace ringret {
namespace {

constexpr std::array<const char*, 5> kNouns = {"sphere", "box", "cylinder",
                                               "cone", "ellipsoid"};

struct AspectClass {
  const char* adjective;
  const char* pose;
  double y_scale;
};

constexpr std::array<AspectClass, 5> kAspects = {{
    {"compact", "sitting still", 1.0},
    {"tall thin", "standing upright", 2.2},
    {"short wide", "lying flat", 0.45},
    {"stretched narrow", "reaching up", 1.6},
    {"squat broad", "resting low", 0.7},
}};

constexpr std::array<const char*, 6> kTemplates = {
    "a {adj} {noun}",
    "a {adj} {noun} {pose}",
    "3d model of a {noun} that is {adj}",
    "the {adj} {noun} object",
    "picture a {noun} shape which looks {adj}",
    "{adj} {noun} seen from every side",
};

TriangleMesh make_family_member(int shape, const AspectClass& aspect,
                                int version, Rng& rng) {
  const int level = version % 4;
  const int segments = 10 + 6 * level;
  const int rings = 6 + 4 * level;
  Vec3 scale(1.0, aspect.y_scale, 1.0);
  for (int k = 0; k < 3; ++k) scale[k] *= uniform(rng, 0.96, 1.04);

  TriangleMesh mesh;
  switch (shape) {
    case 0:
      mesh = make_uv_sphere(segments, rings, Vec3(1, 1, 1));
      break;
    case 1:
      mesh = make_box(Vec3(1.4, 1.4, 1.4), 1 + level);
      break;
    case 2:
      mesh = make_cylinder(0.6, 1.4, segments, 1 + level);
      break;
    case 3:
      mesh = make_cone(0.8, 1.6, segments);
      break;
    default:
      mesh = make_uv_sphere(segments, rings, Vec3(1.2, 0.6, 0.45));
      break;
  }
  mesh.vertices = scale.asDiagonal() * mesh.vertices;
  return mesh;
}

// Family f takes shape f % 5 and aspect (f + f / 5) % 5, so the first 25
// families are distinct (shape, aspect) buckets and the first five share
// no descriptive words.
const AspectClass& family_aspect(int family) {
  return kAspects[static_cast<std::size_t>(family + family / 5) % kAspects.size()];
}

std::string render_template(const char* tmpl, const std::string& noun,
                            const AspectClass& aspect) {
  return fmt::format(fmt::runtime(tmpl), fmt::arg("adj", aspect.adjective),
                     fmt::arg("noun", noun), fmt::arg("pose", aspect.pose));
}

}  // namespace

SyntheticDataset generate_synthetic_dataset(const SynthSpec& spec) {
  if (spec.families < 2) {
    throw InvalidArgument("synthetic dataset needs at least 2 families");
  }
  if (spec.per_family < 1 || spec.queries < 0) {
    throw InvalidArgument("synthetic dataset: invalid counts");
  }
  Rng rng(spec.seed);
  SyntheticDataset data;
  std::vector<std::vector<std::string>> family_models(
      static_cast<std::size_t>(spec.families));

  for (int f = 0; f < spec.families; ++f) {
    const int shape = f % static_cast<int>(kNouns.size());
    const auto& aspect = family_aspect(f);
    for (int v = 0; v < spec.per_family; ++v) {
      const std::string id = fmt::format("f{:02}_{}_v{}", f, kNouns[shape], v);
      data.manifest.models.push_back({id, "models/" + id + ".obj"});
      data.meshes.push_back(make_family_member(shape, aspect, v, rng));
      data.model_family.push_back(f);
      family_models[static_cast<std::size_t>(f)].push_back(id);
    }
  }

  for (int q = 0; q < spec.queries; ++q) {
    const int f = q % spec.families;
    const int round = q / spec.families;
    const int shape = f % static_cast<int>(kNouns.size());
    const auto& aspect = family_aspect(f);
    const std::string id = fmt::format("q{:03}", q);
    // Drawn independently of the family: a fixed template/family pairing
    // would tie template words to families.
    const char* tmpl = kTemplates[uniform_index(rng, kTemplates.size())];
    data.manifest.queries.push_back(
        {id, render_template(tmpl, kNouns[shape], aspect)});
    data.query_family.push_back(f);

    const auto& members = family_models[static_cast<std::size_t>(f)];
    if (spec.family_relevance) {
      for (const auto& m : members) data.manifest.relevance.push_back({id, m});
    } else {
      const auto pick = static_cast<std::size_t>(round) % members.size();
      data.manifest.relevance.push_back({id, members[pick]});
    }
  }
  data.manifest.validate();
  return data;
}

void write_synthetic_dataset(const SyntheticDataset& data,
                             const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "models");
  for (std::size_t i = 0; i < data.meshes.size(); ++i) {
    write_obj(data.meshes[i], dir / data.manifest.models[i].mesh_path);
  }
  write_manifest(data.manifest, dir / "manifest.tsv");
}

}  // namespace ringret

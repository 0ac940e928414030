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

#ifndef RINGRET_RINGVIEW_HPP_
#define RINGRET_RINGVIEW_HPP_

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ringret/bounding_sphere.hpp"
#include "ringret/mesh.hpp"

namespace ringret {

// Camera rig: `views_per_ring` cameras evenly spaced in longitude on each
// latitude ring, all looking at the bounding-sphere center. World is Y up.
struct RingViewConfig {
  int views_per_ring = 12;
  std::vector<double> latitudes = {-90, -60, -30, 0, 30, 60, 90};
  double distance_factor = 2.5;  // camera distance in bounding-sphere radii
  int image_size = 224;
  double fov_y = 90;  // full vertical field of view, degrees
  int supersample = 4;

  int rings() const { return static_cast<int>(latitudes.size()); }
  int total_views() const { return rings() * views_per_ring; }
  void validate() const;
};

// Parses `key=value` lines (`#` comments allowed). Unknown keys are errors.
RingViewConfig parse_ringview_config(std::string_view text);
std::string to_config_text(const RingViewConfig& config);

struct CameraPose {
  Vec3 position;
  Vec3 look_at;
  Vec3 up;
};

struct RingViewPose {
  int ring = 0;
  int view = 0;
  CameraPose pose;
};

// Poses in ring-major order. Requires radius > 0.
std::vector<RingViewPose> camera_poses(const RingViewConfig& config,
                                       const Vec3& center, double radius);

// Per-pixel fraction of covered subsamples, row 0 at the top.
struct SilhouetteImage {
  using Grid =
      Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Grid coverage;

  SilhouetteImage() = default;
  SilhouetteImage(int width, int height) : coverage(Grid::Zero(height, width)) {}

  int width() const { return static_cast<int>(coverage.cols()); }
  int height() const { return static_cast<int>(coverage.rows()); }
};

// Rasterizes the perspective silhouette seen from `pose`. A subsample is
// covered iff its pixel ray hits any triangle, regardless of facing. Throws
// InvalidArgument if `bound` is not entirely inside the view frustum.
SilhouetteImage render_silhouette(const TriangleMesh& mesh,
                                  const CameraPose& pose,
                                  const RingViewConfig& config,
                                  const Sphere& bound = Sphere{Vec3::Zero(), 1.0});

// All R x V views of a mesh, ring-major. `jobs` > 1 renders views on worker
// threads; the output does not depend on it.
std::vector<SilhouetteImage> render_ring_views(const TriangleMesh& mesh,
                                               const RingViewConfig& config,
                                               int jobs = 1);

// `<model_id>_r<ring>_v<view>.pgm`
std::string ring_view_filename(std::string_view model_id, int ring, int view);

}  // namespace ringret

#endif  // RINGRET_RINGVIEW_HPP_

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

#ifndef RINGRET_MESH_HPP_
#define RINGRET_MESH_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace ringret {

template <typename Scalar>
using Vec3T = Eigen::Matrix<Scalar, 3, 1>;
using Vec3 = Vec3T<double>;

// Indexed triangle mesh. Columns of `vertices` are points in model units,
// columns of `faces` are 0-based vertex index triples.
struct TriangleMesh {
  Eigen::Matrix3Xd vertices;
  Eigen::Matrix3Xi faces;

  Eigen::Index num_vertices() const { return vertices.cols(); }
  Eigen::Index num_faces() const { return faces.cols(); }

  // Throws InvalidArgument if a face references a missing vertex or repeats
  // an index.
  void validate() const;
};

struct PointCloud {
  Eigen::Matrix3Xd points;

  Eigen::Index size() const { return points.cols(); }
};

enum class Axis { kX, kY, kZ };

// Parses the `v` and `f` records of a Wavefront OBJ document. Polygons are
// fan-triangulated; negative indices are relative to the current vertex count.
TriangleMesh parse_obj(std::string_view text);
TriangleMesh read_obj(const std::filesystem::path& path);

// Writes `v` and `f` records with round-trip precision.
std::string to_obj(const TriangleMesh& mesh);
void write_obj(const TriangleMesh& mesh, const std::filesystem::path& path);

// Centers the mesh on its minimum enclosing sphere and scales it to radius 1.
TriangleMesh normalize_model(const TriangleMesh& mesh);

// Right-handed rotation about a world axis through the origin.
Eigen::Matrix3d axis_rotation(Axis axis, double degrees);
TriangleMesh fix_axis_rotation(const TriangleMesh& mesh, Axis axis,
                               double degrees);

// Area-weighted uniform surface sampling; depends only on (mesh, n, seed).
PointCloud sample_point_cloud(const TriangleMesh& mesh, std::size_t n,
                              std::uint64_t seed);

}  // namespace ringret

#endif  // RINGRET_MESH_HPP_

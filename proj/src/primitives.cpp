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

#include "ringret/primitives.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "ringret/errors.hpp"

namespace ringret {
namespace {

class MeshBuilder {
 public:
  int add_vertex(const Vec3& v) {
    vertices_.push_back(v);
    return static_cast<int>(vertices_.size()) - 1;
  }
  void add_face(int a, int b, int c) {
    if (a == b || b == c || a == c) return;
    faces_.emplace_back(a, b, c);
  }
  void add_quad(int a, int b, int c, int d) {
    add_face(a, b, c);
    add_face(a, c, d);
  }
  const Vec3& vertex(int i) const {
    return vertices_[static_cast<std::size_t>(i)];
  }
  std::size_t vertex_count() const { return vertices_.size(); }

  TriangleMesh build() const {
    TriangleMesh mesh;
    mesh.vertices.resize(3, static_cast<Eigen::Index>(vertices_.size()));
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      mesh.vertices.col(static_cast<Eigen::Index>(i)) = vertices_[i];
    }
    mesh.faces.resize(3, static_cast<Eigen::Index>(faces_.size()));
    for (std::size_t i = 0; i < faces_.size(); ++i) {
      mesh.faces.col(static_cast<Eigen::Index>(i)) = faces_[i];
    }
    return mesh;
  }

 private:
  std::vector<Vec3> vertices_;
  std::vector<Eigen::Vector3i> faces_;
};

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace

TriangleMesh make_icosphere(int subdivisions) {
  require(subdivisions >= 0, "make_icosphere: negative subdivision level");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : verts) v.normalize();
  std::vector<Eigen::Vector3i> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoints;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      const auto it = midpoints.find(key);
      if (it != midpoints.end()) return it->second;
      verts.push_back((verts[static_cast<std::size_t>(a)] +
                       verts[static_cast<std::size_t>(b)])
                          .normalized());
      const int idx = static_cast<int>(verts.size()) - 1;
      midpoints.emplace(key, idx);
      return idx;
    };
    std::vector<Eigen::Vector3i> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = midpoint(f[0], f[1]);
      const int bc = midpoint(f[1], f[2]);
      const int ca = midpoint(f[2], f[0]);
      next.emplace_back(f[0], ab, ca);
      next.emplace_back(f[1], bc, ab);
      next.emplace_back(f[2], ca, bc);
      next.emplace_back(ab, bc, ca);
    }
    faces = std::move(next);
  }

  MeshBuilder b;
  for (const auto& v : verts) b.add_vertex(v);
  for (const auto& f : faces) b.add_face(f[0], f[1], f[2]);
  return b.build();
}

TriangleMesh make_uv_sphere(int segments, int rings, const Vec3& radii) {
  require(segments >= 3 && rings >= 2, "make_uv_sphere: too coarse");
  MeshBuilder b;
  const int top = b.add_vertex({0, radii.y(), 0});
  std::vector<std::vector<int>> grid;
  for (int r = 1; r < rings; ++r) {
    const double theta = std::numbers::pi * r / rings;
    std::vector<int> row;
    for (int s = 0; s < segments; ++s) {
      const double phi = 2 * std::numbers::pi * s / segments;
      row.push_back(b.add_vertex({radii.x() * std::sin(theta) * std::cos(phi),
                                  radii.y() * std::cos(theta),
                                  radii.z() * std::sin(theta) * std::sin(phi)}));
    }
    grid.push_back(std::move(row));
  }
  const int bottom = b.add_vertex({0, -radii.y(), 0});
  for (int s = 0; s < segments; ++s) {
    const int s1 = (s + 1) % segments;
    b.add_face(top, grid.front()[s1], grid.front()[s]);
    b.add_face(bottom, grid.back()[s], grid.back()[s1]);
    for (std::size_t r = 0; r + 1 < grid.size(); ++r) {
      b.add_quad(grid[r][s], grid[r][s1], grid[r + 1][s1], grid[r + 1][s]);
    }
  }
  return b.build();
}

TriangleMesh make_box(const Vec3& extents, int subdivisions) {
  require(subdivisions >= 1, "make_box: subdivisions must be >= 1");
  MeshBuilder b;
  const Vec3 half = extents / 2;
  const int n = subdivisions;
  // One grid per face: origin corner plus two spanning edges.
  for (int axis = 0; axis < 3; ++axis) {
    for (int side = -1; side <= 1; side += 2) {
      const int u = (axis + 1) % 3;
      const int v = (axis + 2) % 3;
      std::vector<int> idx;
      for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
          Vec3 p;
          p[axis] = side * half[axis];
          p[u] = -half[u] + extents[u] * i / n;
          p[v] = -half[v] + extents[v] * j / n;
          idx.push_back(b.add_vertex(p));
        }
      }
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const int a = idx[static_cast<std::size_t>(i * (n + 1) + j)];
          const int c = idx[static_cast<std::size_t>((i + 1) * (n + 1) + j)];
          const int d = idx[static_cast<std::size_t>((i + 1) * (n + 1) + j + 1)];
          const int e = idx[static_cast<std::size_t>(i * (n + 1) + j + 1)];
          if (side > 0) {
            b.add_quad(a, c, d, e);
          } else {
            b.add_quad(a, e, d, c);
          }
        }
      }
    }
  }
  return b.build();
}

TriangleMesh make_cylinder(double radius, double height, int segments,
                           int stacks) {
  require(segments >= 3 && stacks >= 1, "make_cylinder: too coarse");
  MeshBuilder b;
  std::vector<std::vector<int>> rows;
  for (int k = 0; k <= stacks; ++k) {
    const double y = -height / 2 + height * k / stacks;
    std::vector<int> row;
    for (int s = 0; s < segments; ++s) {
      const double phi = 2 * std::numbers::pi * s / segments;
      row.push_back(
          b.add_vertex({radius * std::cos(phi), y, radius * std::sin(phi)}));
    }
    rows.push_back(std::move(row));
  }
  const int bottom = b.add_vertex({0, -height / 2, 0});
  const int top = b.add_vertex({0, height / 2, 0});
  for (int s = 0; s < segments; ++s) {
    const int s1 = (s + 1) % segments;
    for (int k = 0; k < stacks; ++k) {
      b.add_quad(rows[k][s], rows[k + 1][s], rows[k + 1][s1], rows[k][s1]);
    }
    b.add_face(bottom, rows.front()[s], rows.front()[s1]);
    b.add_face(top, rows.back()[s1], rows.back()[s]);
  }
  return b.build();
}

TriangleMesh make_cone(double radius, double height, int segments) {
  require(segments >= 3, "make_cone: too coarse");
  MeshBuilder b;
  std::vector<int> base;
  for (int s = 0; s < segments; ++s) {
    const double phi = 2 * std::numbers::pi * s / segments;
    base.push_back(b.add_vertex(
        {radius * std::cos(phi), -height / 2, radius * std::sin(phi)}));
  }
  const int apex = b.add_vertex({0, height / 2, 0});
  const int center = b.add_vertex({0, -height / 2, 0});
  for (int s = 0; s < segments; ++s) {
    const int s1 = (s + 1) % segments;
    b.add_face(apex, base[s1], base[s]);
    b.add_face(center, base[s], base[s1]);
  }
  return b.build();
}

}  // namespace ringret

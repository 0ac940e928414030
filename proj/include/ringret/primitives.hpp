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

#ifndef RINGRET_PRIMITIVES_HPP_
#define RINGRET_PRIMITIVES_HPP_

#include "ringret/mesh.hpp"

namespace ringret {

// Procedural closed meshes centered at the origin, Y up.

// Subdivided icosahedron with vertices on the unit sphere.
TriangleMesh make_icosphere(int subdivisions);

// Latitude/longitude sphere scaled by per-axis radii (an ellipsoid).
TriangleMesh make_uv_sphere(int segments, int rings, const Vec3& radii);

// Axis-aligned box with the given full extents; each face split into a
// subdivisions x subdivisions grid.
TriangleMesh make_box(const Vec3& extents, int subdivisions);

// Capped cylinder along Y.
TriangleMesh make_cylinder(double radius, double height, int segments,
                           int stacks);

// Cone along Y, apex up, with a capped base.
TriangleMesh make_cone(double radius, double height, int segments);

}  // namespace ringret

#endif  // RINGRET_PRIMITIVES_HPP_

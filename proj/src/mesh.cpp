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

#include "ringret/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Geometry>
#include <fmt/format.h>

#include "ringret/bounding_sphere.hpp"
#include "ringret/errors.hpp"
#include "ringret/random.hpp"

namespace ringret {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

double parse_double(std::string_view tok, std::size_t line) {
  double value = 0;
  const auto* end = tok.data() + tok.size();
  // from_chars rejects a leading '+', which some exporters emit.
  const char* begin = tok.data();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError("invalid coordinate '" + std::string(tok) + "'", line);
  }
  return value;
}

// Resolves one `f` index token ("7", "7/1/2", "-1//3") to a 0-based index.
int resolve_index(std::string_view tok, std::size_t vertex_count,
                  std::size_t line) {
  const auto slash = tok.find('/');
  const std::string_view head = tok.substr(0, slash);
  long long raw = 0;
  const auto [ptr, ec] =
      std::from_chars(head.data(), head.data() + head.size(), raw);
  if (ec != std::errc() || ptr != head.data() + head.size()) {
    throw ParseError("invalid face index '" + std::string(tok) + "'", line);
  }
  const auto count = static_cast<long long>(vertex_count);
  long long resolved = 0;
  if (raw > 0) {
    resolved = raw - 1;
  } else if (raw < 0) {
    resolved = count + raw;
  } else {
    throw ParseError("face index 0 is not valid in OBJ", line);
  }
  if (resolved < 0 || resolved >= count) {
    throw ParseError("face index " + std::to_string(raw) + " out of range (" +
                         std::to_string(count) + " vertices)",
                     line);
  }
  return static_cast<int>(resolved);
}

}  // namespace

void TriangleMesh::validate() const {
  for (Eigen::Index f = 0; f < faces.cols(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const int idx = faces(k, f);
      if (idx < 0 || idx >= vertices.cols()) {
        throw InvalidArgument(
            fmt::format("face {} references missing vertex {}", f, idx));
      }
    }
    if (faces(0, f) == faces(1, f) || faces(1, f) == faces(2, f) ||
        faces(0, f) == faces(2, f)) {
      throw InvalidArgument(fmt::format("face {} repeats a vertex index", f));
    }
  }
}

TriangleMesh parse_obj(std::string_view text) {
  std::vector<Vec3> vertices;
  std::vector<Eigen::Vector3i> faces;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto tokens = split_ws(line);
    if (tokens[0] == "v") {
      if (tokens.size() < 4) {
        throw ParseError("vertex record needs three coordinates", line_no);
      }
      vertices.emplace_back(parse_double(tokens[1], line_no),
                            parse_double(tokens[2], line_no),
                            parse_double(tokens[3], line_no));
    } else if (tokens[0] == "f") {
      if (tokens.size() < 4) {
        throw ParseError("face record needs at least three indices", line_no);
      }
      std::vector<int> poly;
      poly.reserve(tokens.size() - 1);
      for (std::size_t t = 1; t < tokens.size(); ++t) {
        poly.push_back(resolve_index(tokens[t], vertices.size(), line_no));
      }
      for (std::size_t t = 1; t + 1 < poly.size(); ++t) {
        const Eigen::Vector3i tri(poly[0], poly[t], poly[t + 1]);
        // Repeated corners collapse to a segment; such triangles carry no area.
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) continue;
        faces.push_back(tri);
      }
    }
  }
  if (vertices.empty()) throw InvalidArgument("empty model: no vertices");

  TriangleMesh mesh;
  mesh.vertices.resize(3, static_cast<Eigen::Index>(vertices.size()));
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    mesh.vertices.col(static_cast<Eigen::Index>(i)) = vertices[i];
  }
  mesh.faces.resize(3, static_cast<Eigen::Index>(faces.size()));
  for (std::size_t i = 0; i < faces.size(); ++i) {
    mesh.faces.col(static_cast<Eigen::Index>(i)) = faces[i];
  }
  return mesh;
}

TriangleMesh read_obj(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_obj(buf.str());
  } catch (const ParseError& e) {
    throw e.in_file(path.string());
  }
}

std::string to_obj(const TriangleMesh& mesh) {
  std::string out;
  for (Eigen::Index i = 0; i < mesh.vertices.cols(); ++i) {
    out += fmt::format("v {} {} {}\n", mesh.vertices(0, i),
                       mesh.vertices(1, i), mesh.vertices(2, i));
  }
  for (Eigen::Index f = 0; f < mesh.faces.cols(); ++f) {
    out += fmt::format("f {} {} {}\n", mesh.faces(0, f) + 1,
                       mesh.faces(1, f) + 1, mesh.faces(2, f) + 1);
  }
  return out;
}

void write_obj(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << to_obj(mesh);
}

TriangleMesh normalize_model(const TriangleMesh& mesh) {
  if (mesh.vertices.cols() == 0) {
    throw InvalidArgument("normalize_model: empty mesh");
  }
  const Sphere sphere = bounding_sphere<double>(mesh.vertices);
  TriangleMesh out = mesh;
  out.vertices.colwise() -= sphere.center;
  if (sphere.radius > 0) out.vertices /= sphere.radius;
  return out;
}

Eigen::Matrix3d axis_rotation(Axis axis, double degrees) {
  const double radians = degrees * std::numbers::pi / 180.0;
  const Vec3 unit = axis == Axis::kX   ? Vec3::UnitX()
                    : axis == Axis::kY ? Vec3::UnitY()
                                       : Vec3::UnitZ();
  return Eigen::AngleAxisd(radians, unit).toRotationMatrix();
}

TriangleMesh fix_axis_rotation(const TriangleMesh& mesh, Axis axis,
                               double degrees) {
  TriangleMesh out = mesh;
  out.vertices = axis_rotation(axis, degrees) * mesh.vertices;
  return out;
}

PointCloud sample_point_cloud(const TriangleMesh& mesh, std::size_t n,
                              std::uint64_t seed) {
  const Eigen::Index nf = mesh.faces.cols();
  std::vector<double> cumulative(static_cast<std::size_t>(nf));
  double total = 0;
  for (Eigen::Index f = 0; f < nf; ++f) {
    const Vec3 a = mesh.vertices.col(mesh.faces(0, f));
    const Vec3 b = mesh.vertices.col(mesh.faces(1, f));
    const Vec3 c = mesh.vertices.col(mesh.faces(2, f));
    total += 0.5 * (b - a).cross(c - a).norm();
    cumulative[static_cast<std::size_t>(f)] = total;
  }
  if (!(total > 0)) {
    throw InvalidArgument("sample_point_cloud: mesh has zero surface area");
  }

  Rng rng(seed);
  PointCloud cloud;
  cloud.points.resize(3, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double target = uniform01(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    if (it == cumulative.end()) --it;
    const auto f = static_cast<Eigen::Index>(it - cumulative.begin());
    double r1 = uniform01(rng);
    double r2 = uniform01(rng);
    if (r1 + r2 > 1) {
      r1 = 1 - r1;
      r2 = 1 - r2;
    }
    const Vec3 a = mesh.vertices.col(mesh.faces(0, f));
    const Vec3 b = mesh.vertices.col(mesh.faces(1, f));
    const Vec3 c = mesh.vertices.col(mesh.faces(2, f));
    cloud.points.col(static_cast<Eigen::Index>(i)) =
        a + r1 * (b - a) + r2 * (c - a);
  }
  return cloud;
}

}  // namespace ringret

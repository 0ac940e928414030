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

#include "ringret/ringview.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Geometry>
#include <fmt/format.h>

#include "ringret/errors.hpp"
#include "ringret/parallel.hpp"

namespace ringret {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view s, std::size_t line) {
  s = trim(s);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("expected a number, got '" + std::string(s) + "'", line);
  }
  return v;
}

int to_int(std::string_view s, std::size_t line) {
  s = trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("expected an integer, got '" + std::string(s) + "'", line);
  }
  return v;
}

// Camera frame: right, true up, forward (unit, right-handed).
struct CameraFrame {
  Vec3 right;
  Vec3 up;
  Vec3 forward;
};

CameraFrame make_frame(const CameraPose& pose) {
  CameraFrame f;
  f.forward = (pose.look_at - pose.position).normalized();
  f.right = f.forward.cross(pose.up).normalized();
  f.up = f.right.cross(f.forward);
  return f;
}

void check_frustum(const CameraPose& pose, const CameraFrame& frame,
                   double half_fov, const Sphere& bound) {
  const Vec3 rel = bound.center - pose.position;
  const double x = rel.dot(frame.right);
  const double y = rel.dot(frame.up);
  const double z = rel.dot(frame.forward);
  const double s = std::sin(half_fov);
  const double c = std::cos(half_fov);
  const double rho = bound.radius - 1e-12;
  const bool inside = z > rho && z * s - x * c >= rho && z * s + x * c >= rho &&
                      z * s - y * c >= rho && z * s + y * c >= rho;
  if (!inside) {
    throw InvalidArgument(
        "render_silhouette: bounding sphere is not inside the view frustum");
  }
}

}  // namespace

void RingViewConfig::validate() const {
  if (views_per_ring < 1) throw InvalidArgument("views_per_ring must be >= 1");
  if (latitudes.empty()) throw InvalidArgument("at least one latitude needed");
  for (const double lat : latitudes) {
    if (!(lat >= -90 && lat <= 90)) {
      throw InvalidArgument("latitude out of [-90, 90]");
    }
  }
  if (!(distance_factor > 1)) throw InvalidArgument("distance_factor must be > 1");
  if (image_size < 8) throw InvalidArgument("image_size must be >= 8");
  if (!(fov_y > 0 && fov_y < 180)) throw InvalidArgument("fov_y out of (0, 180)");
  if (supersample < 1) throw InvalidArgument("supersample must be >= 1");
}

RingViewConfig parse_ringview_config(std::string_view text) {
  RingViewConfig config;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected key=value", line_no);
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "views_per_ring") {
      config.views_per_ring = to_int(value, line_no);
    } else if (key == "latitudes") {
      config.latitudes.clear();
      std::size_t start = 0;
      while (start <= value.size()) {
        const auto comma = value.find(',', start);
        config.latitudes.push_back(to_double(
            value.substr(start, comma == std::string_view::npos
                                    ? std::string_view::npos
                                    : comma - start),
            line_no));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    } else if (key == "distance_factor") {
      config.distance_factor = to_double(value, line_no);
    } else if (key == "image_size") {
      config.image_size = to_int(value, line_no);
    } else if (key == "fov_y") {
      config.fov_y = to_double(value, line_no);
    } else if (key == "supersample") {
      config.supersample = to_int(value, line_no);
    } else {
      throw ParseError("unknown ring-view key '" + std::string(key) + "'",
                       line_no);
    }
  }
  config.validate();
  return config;
}

std::string to_config_text(const RingViewConfig& config) {
  std::string out = fmt::format("views_per_ring={}\n", config.views_per_ring);
  out += "latitudes=";
  for (std::size_t i = 0; i < config.latitudes.size(); ++i) {
    out += fmt::format("{}{}", i ? "," : "", config.latitudes[i]);
  }
  out += fmt::format("\ndistance_factor={}\nimage_size={}\nfov_y={}\n"
                     "supersample={}\n",
                     config.distance_factor, config.image_size, config.fov_y,
                     config.supersample);
  return out;
}

std::vector<RingViewPose> camera_poses(const RingViewConfig& config,
                                       const Vec3& center, double radius) {
  config.validate();
  if (!(radius > 0)) throw InvalidArgument("camera_poses: radius must be > 0");
  const double d = config.distance_factor * radius;
  std::vector<RingViewPose> poses;
  poses.reserve(static_cast<std::size_t>(config.total_views()));
  for (int r = 0; r < config.rings(); ++r) {
    const double lat_deg = config.latitudes[static_cast<std::size_t>(r)];
    const double lat = lat_deg * kDeg;
    for (int k = 0; k < config.views_per_ring; ++k) {
      const double lon = 2 * std::numbers::pi * k / config.views_per_ring;
      RingViewPose p{r, k, {}};
      p.pose.position =
          center + d * Vec3(std::cos(lat) * std::cos(lon), std::sin(lat),
                            std::cos(lat) * std::sin(lon));
      p.pose.look_at = center;
      if (std::abs(std::abs(lat_deg) - 90.0) < 1e-12) {
        const double sign = lat_deg > 0 ? 1.0 : -1.0;
        p.pose.up = sign * Vec3(-std::cos(lon), 0, -std::sin(lon));
      } else {
        const Vec3 dir = (p.pose.look_at - p.pose.position).normalized();
        p.pose.up = (Vec3::UnitY() - Vec3::UnitY().dot(dir) * dir).normalized();
      }
      poses.push_back(p);
    }
  }
  return poses;
}

SilhouetteImage render_silhouette(const TriangleMesh& mesh,
                                  const CameraPose& pose,
                                  const RingViewConfig& config,
                                  const Sphere& bound) {
  config.validate();
  const int size = config.image_size;
  const int ss = config.supersample;
  const int grid = size * ss;
  const CameraFrame frame = make_frame(pose);
  const double half_fov = config.fov_y * kDeg / 2;
  check_frustum(pose, frame, half_fov, bound);

  SilhouetteImage image(size, size);
  if (mesh.faces.cols() == 0) return image;

  // Vertex positions on the subsample grid; subsample (i, j) has its center
  // at (i + 0.5, j + 0.5).
  const double tan_half = std::tan(half_fov);
  const Eigen::Index nv = mesh.vertices.cols();
  Eigen::Matrix2Xd screen(2, nv);
  for (Eigen::Index v = 0; v < nv; ++v) {
    const Vec3 rel = mesh.vertices.col(v) - pose.position;
    const double z = rel.dot(frame.forward);
    if (!(z > 0)) {
      throw InvalidArgument("render_silhouette: vertex behind the camera");
    }
    const double ndc_x = rel.dot(frame.right) / (z * tan_half);
    const double ndc_y = rel.dot(frame.up) / (z * tan_half);
    screen(0, v) = (ndc_x + 1) * 0.5 * grid;
    screen(1, v) = (1 - ndc_y) * 0.5 * grid;
  }

  std::vector<std::uint8_t> hits(static_cast<std::size_t>(grid) * grid, 0);
  for (Eigen::Index f = 0; f < mesh.faces.cols(); ++f) {
    const Eigen::Vector2d a = screen.col(mesh.faces(0, f));
    const Eigen::Vector2d b = screen.col(mesh.faces(1, f));
    const Eigen::Vector2d c = screen.col(mesh.faces(2, f));
    const double area = (b.x() - a.x()) * (c.y() - a.y()) -
                        (b.y() - a.y()) * (c.x() - a.x());
    if (area == 0) continue;
    const double sign = area > 0 ? 1.0 : -1.0;
    const int x0 = std::max(0, static_cast<int>(std::ceil(
                                   std::min({a.x(), b.x(), c.x()}) - 0.5)));
    const int x1 = std::min(grid - 1, static_cast<int>(std::floor(
                                          std::max({a.x(), b.x(), c.x()}) - 0.5)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(
                                   std::min({a.y(), b.y(), c.y()}) - 0.5)));
    const int y1 = std::min(grid - 1, static_cast<int>(std::floor(
                                          std::max({a.y(), b.y(), c.y()}) - 0.5)));
    for (int y = y0; y <= y1; ++y) {
      const double py = y + 0.5;
      for (int x = x0; x <= x1; ++x) {
        const double px = x + 0.5;
        const double e0 = (b.x() - a.x()) * (py - a.y()) - (b.y() - a.y()) * (px - a.x());
        const double e1 = (c.x() - b.x()) * (py - b.y()) - (c.y() - b.y()) * (px - b.x());
        const double e2 = (a.x() - c.x()) * (py - c.y()) - (a.y() - c.y()) * (px - c.x());
        if (sign * e0 >= 0 && sign * e1 >= 0 && sign * e2 >= 0) {
          hits[static_cast<std::size_t>(y) * grid + x] = 1;
        }
      }
    }
  }

  const double inv = 1.0 / (ss * ss);
  for (int py = 0; py < size; ++py) {
    for (int px = 0; px < size; ++px) {
      int count = 0;
      for (int sy = 0; sy < ss; ++sy) {
        const std::size_t row = static_cast<std::size_t>(py * ss + sy) * grid;
        for (int sx = 0; sx < ss; ++sx) count += hits[row + px * ss + sx];
      }
      image.coverage(py, px) = count * inv;
    }
  }
  return image;
}

std::vector<SilhouetteImage> render_ring_views(const TriangleMesh& mesh,
                                               const RingViewConfig& config,
                                               int jobs) {
  if (mesh.vertices.cols() == 0) {
    throw InvalidArgument("render_ring_views: empty mesh");
  }
  const Sphere bound = bounding_sphere<double>(mesh.vertices);
  const auto poses = camera_poses(config, bound.center, bound.radius);
  std::vector<SilhouetteImage> images(poses.size());
  parallel_for(poses.size(), jobs, [&](std::size_t i) {
    images[i] = render_silhouette(mesh, poses[i].pose, config, bound);
  });
  return images;
}

std::string ring_view_filename(std::string_view model_id, int ring, int view) {
  return fmt::format("{}_r{}_v{}.pgm", model_id, ring, view);
}

}  // namespace ringret

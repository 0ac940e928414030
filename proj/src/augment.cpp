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

#include "ringret/augment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "ringret/errors.hpp"
#include "ringret/random.hpp"
#include "text_fields.hpp"

namespace ringret {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

int cell_of(double v, double lo, double extent, int parts) {
  if (extent <= 0) return 0;
  const int c = static_cast<int>(std::floor((v - lo) / extent * parts));
  return std::clamp(c, 0, parts - 1);
}

// mean, std, min, max, median of `values`, which is sorted in place so the
// result does not depend on input order.
void append_stats(std::vector<double>& values, double* out) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double sum = 0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double sq = 0;
  for (double v : values) sq += (v - mean) * (v - mean);
  const std::size_t mid = values.size() / 2;
  out[0] = mean;
  out[1] = std::sqrt(sq / n);
  out[2] = values.front();
  out[3] = values.back();
  out[4] = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double squared_distance(const MatrixXd& a, Index i, const MatrixXd& b, Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

// Nearest centroid per row, ties to the lowest index; returns the inertia.
double assign(const MatrixXd& x, const MatrixXd& c, std::vector<int>& out,
              std::vector<double>* dist = nullptr) {
  out.assign(static_cast<std::size_t>(x.rows()), 0);
  if (dist) dist->assign(static_cast<std::size_t>(x.rows()), 0);
  double inertia = 0;
  for (Index i = 0; i < x.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Index j = 0; j < c.rows(); ++j) {
      const double d = squared_distance(x, i, c, j);
      if (d < best) {
        best = d;
        arg = static_cast<int>(j);
      }
    }
    out[static_cast<std::size_t>(i)] = arg;
    if (dist) (*dist)[static_cast<std::size_t>(i)] = best;
    inertia += best;
  }
  return inertia;
}

MatrixXd kmeans_pp(const MatrixXd& x, int k, Rng& rng) {
  const Index n = x.rows();
  MatrixXd c(k, x.cols());
  c.row(0) = x.row(static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(n))));
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = squared_distance(x, i, c, 0);
  for (int j = 1; j < k; ++j) {
    double total = 0;
    for (double d : d2) total += d;
    Index pick = n - 1;
    if (total > 0) {
      const double u = uniform01(rng) * total;
      double acc = 0;
      for (Index i = 0; i < n; ++i) {
        acc += d2[static_cast<std::size_t>(i)];
        if (u < acc) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    }
    c.row(j) = x.row(pick);
    for (Index i = 0; i < n; ++i) {
      auto& d = d2[static_cast<std::size_t>(i)];
      d = std::min(d, squared_distance(x, i, c, j));
    }
  }
  return c;
}

ClusterModel lloyd(const MatrixXd& x, int k, Rng& rng, int max_iters) {
  ClusterModel model;
  model.centroids = kmeans_pp(x, k, rng);
  std::vector<int> current, previous;
  std::vector<double> dist;
  bool converged = false;
  for (int it = 0; it < max_iters; ++it) {
    model.inertia_trace.push_back(assign(x, model.centroids, current, &dist));
    model.iterations = it + 1;
    if (current == previous) {
      converged = true;
      break;
    }
    previous = current;
    MatrixXd sums = MatrixXd::Zero(k, x.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < x.rows(); ++i) {
      const int a = current[static_cast<std::size_t>(i)];
      sums.row(a) += x.row(i);
      ++counts[static_cast<std::size_t>(a)];
    }
    std::vector<bool> taken(static_cast<std::size_t>(x.rows()), false);
    for (int j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) {
        model.centroids.row(j) = sums.row(j) / counts[static_cast<std::size_t>(j)];
        continue;
      }
      // Empty cluster: move it onto the point farthest from its centroid.
      Index far = -1;
      for (Index i = 0; i < x.rows(); ++i) {
        if (taken[static_cast<std::size_t>(i)]) continue;
        if (far < 0 || dist[static_cast<std::size_t>(i)] > dist[static_cast<std::size_t>(far)]) {
          far = i;
        }
      }
      taken[static_cast<std::size_t>(far)] = true;
      model.centroids.row(j) = x.row(far);
    }
  }
  if (!converged) {
    model.inertia_trace.push_back(assign(x, model.centroids, current));
  }
  model.assignment = current;
  model.inertia = model.inertia_trace.back();
  return model;
}

}  // namespace

void GridStatsConfig::validate() const {
  if (height_parts < 1 || length_parts < 1 || width_parts < 1) {
    throw InvalidArgument("grid stats: all part counts must be >= 1");
  }
}

VectorXd grid_stats_features(const PointCloud& cloud, const GridStatsConfig& config) {
  config.validate();
  const Index n = cloud.size();
  if (n == 0) throw InvalidArgument("grid_stats_features: empty point cloud");
  const Eigen::Vector3d lo = cloud.points.rowwise().minCoeff();
  const Eigen::Vector3d extent = cloud.points.rowwise().maxCoeff() - lo;
  const int length_axis = extent.z() > extent.x() ? 2 : 0;
  const int width_axis = 2 - length_axis;

  const int cells = config.cells();
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(cells));
  for (Index i = 0; i < n; ++i) {
    const auto p = cloud.points.col(i);
    const int h = cell_of(p.y(), lo.y(), extent.y(), config.height_parts);
    const int l = cell_of(p[length_axis], lo[length_axis], extent[length_axis],
                          config.length_parts);
    const int w = cell_of(p[width_axis], lo[width_axis], extent[width_axis],
                          config.width_parts);
    members[static_cast<std::size_t>((h * config.length_parts + l) * config.width_parts + w)]
        .push_back(i);
  }
  VectorXd out = VectorXd::Zero(config.dim());
  std::vector<double> values;
  for (int c = 0; c < cells; ++c) {
    const auto& idx = members[static_cast<std::size_t>(c)];
    if (idx.empty()) continue;
    for (int axis = 0; axis < 3; ++axis) {
      values.clear();
      for (Index i : idx) values.push_back(cloud.points(axis, i));
      append_stats(values, out.data() + (c * 3 + axis) * 5);
    }
  }
  return out;
}

MatrixXd zscore(const MatrixXd& features) {
  MatrixXd out(features.rows(), features.cols());
  const double n = static_cast<double>(features.rows());
  for (Index j = 0; j < features.cols(); ++j) {
    const double mean = features.col(j).sum() / n;
    const double sd = std::sqrt((features.col(j).array() - mean).square().sum() / n);
    if (sd > 0) {
      out.col(j) = (features.col(j).array() - mean) / sd;
    } else {
      out.col(j).setZero();
    }
  }
  return out;
}

ClusterModel kmeans(const MatrixXd& features, int k, std::uint64_t seed,
                    const KMeansOptions& options) {
  if (k < 1) throw InvalidArgument("kmeans: k must be >= 1");
  if (k > features.rows()) {
    throw InvalidArgument(fmt::format("kmeans: k = {} exceeds {} points", k, features.rows()));
  }
  if (options.max_iters < 1 || options.restarts < 1) {
    throw InvalidArgument("kmeans: max_iters and restarts must be >= 1");
  }
  if (!features.allFinite()) throw NumericError("kmeans: non-finite features");
  ClusterModel best;
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng = derive_rng(seed, static_cast<std::uint64_t>(r));
    ClusterModel m = lloyd(features, k, rng, options.max_iters);
    if (r == 0 || m.inertia < best.inertia) best = std::move(m);
  }
  return best;
}

std::vector<RelevancePair> propagate_queries(const ClusterAssignment& clusters,
                                             const std::vector<RelevancePair>& pairs) {
  std::map<int, std::vector<std::string>> members;
  for (const auto& [id, c] : clusters) members[c].push_back(id);
  std::set<RelevancePair> out(pairs.begin(), pairs.end());
  for (const auto& p : pairs) {
    const auto it = clusters.find(p.model_id);
    if (it == clusters.end()) {
      throw InvalidArgument("propagate_queries: model '" + p.model_id +
                            "' has no cluster assignment");
    }
    for (const auto& m : members[it->second]) out.insert({p.query_id, m});
  }
  return {out.begin(), out.end()};
}

std::string to_cluster_tsv(const std::vector<std::string>& model_ids,
                           const std::vector<int>& assignment) {
  if (model_ids.size() != assignment.size()) {
    throw ShapeError("to_cluster_tsv: one assignment per model expected");
  }
  std::string out;
  for (std::size_t i = 0; i < model_ids.size(); ++i) {
    out += fmt::format("{}\t{}\n", model_ids[i], assignment[i]);
  }
  return out;
}

ClusterAssignment parse_cluster_tsv(std::string_view data) {
  ClusterAssignment out;
  text::for_each_line(data, [&](std::string_view line, std::size_t line_no) {
    const auto f = text::split(line, '\t');
    if (f.size() != 2) throw ParseError("expected 2 tab-separated fields", line_no);
    if (!is_valid_id(f[0])) throw ParseError("invalid id '" + std::string(f[0]) + "'", line_no);
    const long long c = text::parse_int(f[1], line_no);
    if (c < 0) throw ParseError("negative cluster index", line_no);
    if (!out.emplace(std::string(f[0]), static_cast<int>(c)).second) {
      throw ParseError("model '" + std::string(f[0]) + "' listed twice", line_no);
    }
  });
  return out;
}

}  // namespace ringret

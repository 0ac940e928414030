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

#ifndef RINGRET_AUGMENT_HPP_
#define RINGRET_AUGMENT_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ringret/manifest.hpp"
#include "ringret/mesh.hpp"

namespace ringret {

// Cells along height (Y), length (the longer horizontal extent) and width.
struct GridStatsConfig {
  int height_parts = 5;
  int length_parts = 6;
  int width_parts = 2;

  void validate() const;
  int cells() const { return height_parts * length_parts * width_parts; }
  // cells x 3 coordinates x {mean, std, min, max, median}
  int dim() const { return cells() * 3 * 5; }
};

// Per-cell statistics of the cloud over its axis-aligned bounding box.
// Layout: cell (h, l, w) row-major, then x, y, z, then mean, std, min, max,
// median. Empty cells are zeros.
Eigen::VectorXd grid_stats_features(const PointCloud& cloud,
                                    const GridStatsConfig& config = {});

// Column-wise standardization; constant columns become zero.
Eigen::MatrixXd zscore(const Eigen::MatrixXd& features);

struct ClusterModel {
  Eigen::MatrixXd centroids;           // k x F
  std::vector<int> assignment;         // per row of the input
  double inertia = 0;                  // sum of squared distances
  std::vector<double> inertia_trace;   // after every assignment step
  int iterations = 0;
};

struct KMeansOptions {
  int max_iters = 100;
  int restarts = 1;  // best inertia wins, first on ties
};

// k-means++ seeding then Lloyd iterations until the assignment is unchanged
// or max_iters is reached. Empty clusters are re-seeded with the point
// farthest from its centroid. The returned assignment is the Voronoi
// partition of the returned centroids (ties go to the lowest index).
ClusterModel kmeans(const Eigen::MatrixXd& features, int k, std::uint64_t seed,
                    const KMeansOptions& options = {});

using ClusterAssignment = std::map<std::string, int>;

// Adds (q, m') for every m' sharing a cluster with m, for each (q, m).
// Output is sorted and unique and contains the input.
std::vector<RelevancePair> propagate_queries(const ClusterAssignment& clusters,
                                             const std::vector<RelevancePair>& pairs);

// TSV `model_id<TAB>cluster_index`.
std::string to_cluster_tsv(const std::vector<std::string>& model_ids,
                           const std::vector<int>& assignment);
ClusterAssignment parse_cluster_tsv(std::string_view text);

}  // namespace ringret

#endif  // RINGRET_AUGMENT_HPP_

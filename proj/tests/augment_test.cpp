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
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ringret/errors.hpp"
#include "ringret/synth.hpp"

namespace ringret {
namespace {

using Eigen::MatrixXd;
using testing_util::random_matrix;

PointCloud random_cloud(Rng& rng, int n) {
  PointCloud c;
  c.points = random_matrix(rng, 3, n);
  c.points.row(2) *= 2;  // length runs along z
  return c;
}

TEST(GridStatsTest, Dimension) {
  EXPECT_EQ(GridStatsConfig{}.dim(), 900);
  Rng rng(1);
  EXPECT_EQ(grid_stats_features(random_cloud(rng, 500)).size(), 900);
  EXPECT_THROW(grid_stats_features(PointCloud{}), InvalidArgument);
  EXPECT_THROW(grid_stats_features(random_cloud(rng, 5), GridStatsConfig{0, 1, 1}),
               InvalidArgument);
}

TEST(GridStatsTest, SinglePointFillsOneCell) {
  PointCloud c;
  c.points = Eigen::Vector3d(0.5, -1, 2);
  const Eigen::VectorXd f = grid_stats_features(c);
  // Zero extent puts the point in cell 0; stats are (v, 0, v, v, v) per axis.
  for (int axis = 0; axis < 3; ++axis) {
    const double v = c.points(axis, 0);
    Eigen::VectorXd want(5);
    want << v, 0, v, v, v;
    EXPECT_EQ(f.segment(axis * 5, 5), want);
  }
  EXPECT_EQ(f.tail(900 - 15).cwiseAbs().maxCoeff(), 0.0);
}

TEST(GridStatsTest, KnownCellStats) {
  // Two points per axis-aligned extreme, all on one 1x1x1 grid.
  PointCloud c;
  c.points.resize(3, 4);
  c.points << 0, 1, 2, 3,  //
      5, 5, 5, 5,          //
      1, 1, 1, 1;
  const Eigen::VectorXd f = grid_stats_features(c, GridStatsConfig{1, 1, 1});
  ASSERT_EQ(f.size(), 15);
  EXPECT_DOUBLE_EQ(f[0], 1.5);
  EXPECT_DOUBLE_EQ(f[1], std::sqrt(1.25));
  EXPECT_DOUBLE_EQ(f[2], 0);
  EXPECT_DOUBLE_EQ(f[3], 3);
  EXPECT_DOUBLE_EQ(f[4], 1.5);
  EXPECT_DOUBLE_EQ(f[5], 5);
  EXPECT_DOUBLE_EQ(f[6], 0);
}

TEST(GridStatsTest, PermutationInvariantAndTranslationInvariantSpread) {
  Rng rng(2);
  const PointCloud c = random_cloud(rng, 300);
  PointCloud shuffled = c;
  std::vector<int> order(300);
  for (int i = 0; i < 300; ++i) order[static_cast<std::size_t>(i)] = i;
  shuffle(order.begin(), order.end(), rng);
  for (int i = 0; i < 300; ++i) shuffled.points.col(i) = c.points.col(order[static_cast<std::size_t>(i)]);
  const Eigen::VectorXd f = grid_stats_features(c);
  EXPECT_EQ(f, grid_stats_features(shuffled));

  PointCloud moved = c;
  moved.points.colwise() += Eigen::Vector3d(4, -2, 1);
  const Eigen::VectorXd g = grid_stats_features(moved);
  for (int i = 0; i < 900; i += 5) {
    EXPECT_NEAR(f[i + 1], g[i + 1], 1e-9) << i;  // std
  }
}

TEST(ZScoreTest, ColumnsStandardized) {
  Rng rng(3);
  MatrixXd x = random_matrix(rng, 20, 4);
  x.col(2).setConstant(7);
  const MatrixXd z = zscore(x);
  for (int j : {0, 1, 3}) {
    EXPECT_NEAR(z.col(j).mean(), 0, 1e-12);
    EXPECT_NEAR(z.col(j).squaredNorm() / 20, 1, 1e-12);
  }
  EXPECT_EQ(z.col(2).cwiseAbs().maxCoeff(), 0.0);
}

TEST(KMeansTest, TwoBlobs) {
  Rng rng(4);
  MatrixXd x = 0.1 * random_matrix(rng, 40, 2);
  x.topRows(20).rowwise() += Eigen::RowVector2d(5, 5);
  const ClusterModel m = kmeans(x, 2, 11);
  for (int i = 1; i < 20; ++i) EXPECT_EQ(m.assignment[static_cast<std::size_t>(i)], m.assignment[0]);
  for (int i = 21; i < 40; ++i) EXPECT_EQ(m.assignment[static_cast<std::size_t>(i)], m.assignment[20]);
  EXPECT_NE(m.assignment[0], m.assignment[20]);
}

TEST(KMeansTest, OneClusterPerPoint) {
  Rng rng(5);
  const MatrixXd x = random_matrix(rng, 7, 3);
  const ClusterModel m = kmeans(x, 7, 0);
  EXPECT_EQ(m.inertia, 0.0);
  EXPECT_EQ(std::set<int>(m.assignment.begin(), m.assignment.end()).size(), 7u);
  EXPECT_THROW(kmeans(x, 8, 0), InvalidArgument);
  EXPECT_THROW(kmeans(x, 0, 0), InvalidArgument);
}

TEST(KMeansTest, InertiaNeverIncreasesAndEndsVoronoi) {
  Rng rng(6);
  for (int run = 0; run < 100; ++run) {
    const int n = 10 + static_cast<int>(uniform_index(rng, 60));
    const int k = 1 + static_cast<int>(uniform_index(rng, 8));
    const MatrixXd x = random_matrix(rng, n, 5);
    const ClusterModel m = kmeans(x, k, static_cast<std::uint64_t>(run));
    for (std::size_t i = 1; i < m.inertia_trace.size(); ++i) {
      ASSERT_LE(m.inertia_trace[i], m.inertia_trace[i - 1]) << "run " << run;
    }
    double inertia = 0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      for (int j = 1; j < k; ++j) {
        if ((x.row(i) - m.centroids.row(j)).squaredNorm() <
            (x.row(i) - m.centroids.row(best)).squaredNorm()) {
          best = j;
        }
      }
      ASSERT_EQ(m.assignment[static_cast<std::size_t>(i)], best);
      inertia += (x.row(i) - m.centroids.row(best)).squaredNorm();
    }
    EXPECT_NEAR(m.inertia, inertia, 1e-9 * (1 + inertia));
  }
}

TEST(KMeansTest, DeterministicAndRestartsHelp) {
  Rng rng(7);
  const MatrixXd x = random_matrix(rng, 50, 3);
  const ClusterModel a = kmeans(x, 5, 3), b = kmeans(x, 5, 3);
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.centroids, b.centroids);
  const ClusterModel many = kmeans(x, 5, 3, KMeansOptions{100, 8});
  EXPECT_LE(many.inertia, a.inertia);
}

TEST(PropagateTest, SingletonsAreIdentity) {
  const ClusterAssignment c = {{"a", 0}, {"b", 1}, {"c", 2}};
  const std::vector<RelevancePair> pairs = {{"q1", "a"}, {"q2", "c"}};
  EXPECT_EQ(propagate_queries(c, pairs), pairs);
}

TEST(PropagateTest, ClusterOfThree) {
  const ClusterAssignment c = {{"a", 0}, {"b", 0}, {"c", 0}, {"d", 1}};
  const auto out = propagate_queries(c, {{"q", "b"}});
  EXPECT_EQ(out, (std::vector<RelevancePair>{{"q", "a"}, {"q", "b"}, {"q", "c"}}));
  EXPECT_THROW(propagate_queries(c, {{"q", "zz"}}), InvalidArgument);
}

TEST(PropagateTest, FourVersionsQuadruple) {
  SynthSpec spec;
  spec.queries = 20;
  spec.family_relevance = false;
  const SyntheticDataset d = generate_synthetic_dataset(spec);
  ClusterAssignment perfect;
  for (std::size_t m = 0; m < d.manifest.models.size(); ++m) {
    perfect[d.manifest.models[m].id] = d.model_family[m];
  }
  const auto& pairs = d.manifest.relevance;
  const auto out = propagate_queries(perfect, pairs);
  EXPECT_EQ(out.size(), 4 * pairs.size());
  // Closed under the cluster relation and a superset of the input.
  const std::set<RelevancePair> set(out.begin(), out.end());
  for (const auto& p : pairs) EXPECT_TRUE(set.count(p));
  for (const auto& p : out) {
    for (const auto& [id, c] : perfect) {
      if (c == perfect.at(p.model_id)) {
        EXPECT_TRUE(set.count({p.query_id, id}));
      }
    }
  }
}

TEST(ClusterTsvTest, RoundTripAndErrors) {
  const std::string text = to_cluster_tsv({"m1", "m2"}, {3, 0});
  EXPECT_EQ(text, "m1\t3\nm2\t0\n");
  EXPECT_EQ(parse_cluster_tsv(text), (ClusterAssignment{{"m1", 3}, {"m2", 0}}));
  EXPECT_THROW(to_cluster_tsv({"m1"}, {1, 2}), ShapeError);
  auto line_of = [](const char* t) -> std::size_t {
    try {
      parse_cluster_tsv(t);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("m1\t1\nm2\n"), 2u);
  EXPECT_EQ(line_of("m1\t1\nm1\t2\n"), 2u);
  EXPECT_EQ(line_of("m1\t-1\n"), 1u);
  EXPECT_EQ(line_of("m1\tx\n"), 1u);
  EXPECT_EQ(line_of("bad id\t1\n"), 1u);
}

}  // namespace
}  // namespace ringret

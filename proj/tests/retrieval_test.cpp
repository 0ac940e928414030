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

#include "ringret/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ringret/errors.hpp"

namespace ringret {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using testing_util::random_matrix;

// Unit vector at cosine c to e1.
VectorXd at_cosine(double c, int dim = 3) {
  VectorXd v = VectorXd::Zero(dim);
  v[0] = c;
  v[1] = std::sqrt(1 - c * c);
  return v;
}

TEST(CosineTest, Examples) {
  const VectorXd u = Eigen::Vector2d(1, 0);
  EXPECT_DOUBLE_EQ(cosine_sim(u, u), 1.0);
  EXPECT_DOUBLE_EQ(cosine_sim(Eigen::Vector2d(3, 4), Eigen::Vector2d(3, 4)), 1.0);
  EXPECT_EQ(cosine_sim(u, Eigen::Vector2d(0, 2)), 0.0);
  EXPECT_NEAR(cosine_sim(u, Eigen::Vector2d(1, 1)), 0.70710678, 1e-8);
  EXPECT_EQ(cosine_sim(u, Eigen::Vector2d(0, 0)), 0.0);
  EXPECT_THROW(cosine_sim(u, Eigen::Vector3d(1, 0, 0)), ShapeError);
}

TEST(RankTest, SingleModelAndTies) {
  const Ranking one = rank_scores("q", {"m"}, VectorXd::Constant(1, 0.3));
  ASSERT_EQ(one.items.size(), 1u);
  EXPECT_EQ(one.items[0].model_id, "m");
  const Ranking tie = rank_scores("q", {"b", "a", "c"}, Eigen::Vector3d(0.5, 0.5, 0.9));
  EXPECT_EQ(tie.items[0].model_id, "c");
  EXPECT_EQ(tie.items[1].model_id, "a");
  EXPECT_EQ(tie.items[2].model_id, "b");
  EXPECT_THROW(rank_scores("q", {}, VectorXd()), InvalidArgument);
  EXPECT_THROW(rank_scores("q", {"a", "a"}, Eigen::Vector2d(1, 2)), InvalidArgument);
  EXPECT_THROW(rank_scores("q", {"a"}, Eigen::Vector2d(1, 2)), ShapeError);
}

TEST(RankTest, GalleryMatchesNaiveSort) {
  Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    const MatrixXd g = random_matrix(rng, 5, 4);
    const VectorXd q = random_matrix(rng, 4, 1);
    std::vector<std::string> ids = {"e", "b", "d", "a", "c"};
    const Ranking r = rank_gallery("q", q, EmbeddingMatrix(ids, g));
    std::vector<std::pair<double, std::string>> naive;
    for (int i = 0; i < 5; ++i) {
      const double s = static_cast<double>(g.row(i).cast<float>().cast<double>().dot(q)) /
                       (g.row(i).cast<float>().cast<double>().norm() * q.norm());
      naive.push_back({-s, ids[static_cast<std::size_t>(i)]});
    }
    std::sort(naive.begin(), naive.end());
    for (int i = 0; i < 5; ++i) {
      EXPECT_EQ(r.items[static_cast<std::size_t>(i)].model_id, naive[static_cast<std::size_t>(i)].second);
      EXPECT_NEAR(r.items[static_cast<std::size_t>(i)].score, -naive[static_cast<std::size_t>(i)].first, 1e-12);
    }
  }
}

TEST(SumViewsTest, Examples) {
  const VectorXd q = Eigen::Vector3d(1, 0, 0);
  MatrixXd both(2, 3);
  both << 2, 0, 0, 5, 0, 0;
  EXPECT_DOUBLE_EQ(score_sum_views(q, both), 2.0);
  MatrixXd half(2, 3);
  half << 1, 0, 0, 0, 1, 0;
  EXPECT_DOUBLE_EQ(score_sum_views(q, half), 1.0);
  MatrixXd three(3, 3);
  three << 1, 1, 0, 0.5, -0.5, 0.5, -1, 0, 3;
  const double want = 1 / std::sqrt(2.0) + 0.5 / std::sqrt(0.75) - 1 / std::sqrt(10.0);
  EXPECT_NEAR(score_sum_views(q, three), want, 1e-15);
}

TEST(TopkSumMaxTest, Examples) {
  const MatrixXd view = at_cosine(1).transpose();
  EXPECT_NEAR(score_topk_sum_max({at_cosine(0.37).transpose()}, {view}, 1), 0.37, 1e-15);

  MatrixXd g1 = at_cosine(0.3).transpose(), g2 = at_cosine(0.8).transpose();
  const MatrixXd query = at_cosine(1).transpose();
  EXPECT_NEAR(score_topk_sum_max({query}, {g1, g2}, 1), 0.8, 1e-15);

  MatrixXd variants(7, 3);
  const double cos[] = {0.5, 0.9, 0.3, 0.7, 0.8, 0.4, 0.6};
  for (int i = 0; i < 7; ++i) variants.row(i) = at_cosine(cos[i]).transpose();
  EXPECT_NEAR(score_topk_sum_max({variants}, {view}, 6), 3.9, 1e-12);
  EXPECT_THROW(score_topk_sum_max({variants}, {view}, 8), InvalidArgument);
  EXPECT_THROW(score_topk_sum_max({variants}, {view}, 0), InvalidArgument);
}

TEST(TopkSumMaxTest, MeanOverPartitionsMaxOverViews) {
  MatrixXd views(2, 3);
  views << 1, 0, 0, 0, 1, 0;
  MatrixXd p1(2, 3), p2(1, 3);
  p1 << 1, 0, 0, 0.6, 0.8, 0;  // view 0: 1 + 0.6, view 1: 0 + 0.8
  p2 << 0, 1, 0;                // view 1: 1
  EXPECT_NEAR(score_topk_sum_max({p1, p2}, {views}, 1), (1.0 + 1.0) / 2, 1e-15);
  EXPECT_THROW(score_topk_sum_max({p1, p2}, {views}, 2), InvalidArgument);
  EXPECT_NEAR(score_topk_sum_max({p1}, {views}, 2), 1.6, 1e-15);
}

ScoreTable table(double v) {
  ScoreTable t;
  t.query_ids = {"q"};
  t.model_ids = {"a", "b"};
  t.scores = Eigen::RowVector2d(v, 0.1);
  return t;
}

TEST(EnsembleTest, Examples) {
  const ScoreTable one = ensemble_max({table(0.4)});
  EXPECT_EQ(one.scores, table(0.4).scores);
  const ScoreTable three = ensemble_max({table(0.2), table(0.9), table(0.5)});
  EXPECT_EQ(three.scores(0, 0), 0.9);
  ScoreTable other = table(0.1);
  other.model_ids = {"a", "c"};
  EXPECT_THROW(ensemble_max({table(0.2), other}), InvalidArgument);
  EXPECT_THROW(ensemble_max({}), InvalidArgument);
}

TEST(ScoreTableTest, CosinesAndRankings) {
  Rng rng(19);
  const EmbeddingMatrix q({"q1", "q2"}, random_matrix(rng, 2, 4));
  const EmbeddingMatrix g({"m1", "m2", "m3"}, random_matrix(rng, 3, 4));
  const ScoreTable t = score_table(q, g);
  ASSERT_EQ(t.scores.rows(), 2);
  ASSERT_EQ(t.scores.cols(), 3);
  EXPECT_NEAR(t.scores(1, 2), cosine_sim(q.row(1), g.row(2)), 1e-15);
  const auto rankings = rank_table(t);
  ASSERT_EQ(rankings.size(), 2u);
  const Ranking direct = rank_gallery("q2", q.row(1), g);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(rankings[1].items[i].model_id, direct.items[i].model_id);
  }
}

TEST(RankingTsvTest, RoundTrip) {
  const std::vector<Ranking> runs = {
      rank_scores("q1", {"a", "b", "c"}, Eigen::Vector3d(0.1, 0.123456789012, -0.5)),
      rank_scores("q2", {"a", "b", "c"}, Eigen::Vector3d(0.3, 0.3, 0.2))};
  const std::string text = to_ranking_tsv(runs);
  EXPECT_EQ(text.substr(0, text.find('\n')), "q1\tb\t0.123456789");
  const auto back = parse_ranking_tsv(text);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].items[1].model_id, "b");
  EXPECT_EQ(to_ranking_tsv(back), text);
}

TEST(RankingTsvTest, Errors) {
  auto line_of = [](const char* text) -> std::size_t {
    try {
      parse_ranking_tsv(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("q1\ta\t0.5\nq1\tb\n"), 2u);
  EXPECT_EQ(line_of("q1\ta\t0.5\nq1\tb\t0.7\n"), 2u);
  EXPECT_EQ(line_of("q1\ta\t0.5\nq1\ta\t0.4\n"), 2u);
  EXPECT_EQ(line_of("q1\ta\t0.5\nq2\ta\t0.4\nq1\tb\t0.1\n"), 3u);
  EXPECT_EQ(line_of("q1\ta\tnope\n"), 1u);
}

TEST(StrategyTest, Names) {
  for (auto s : {ScoreStrategy::kSingle, ScoreStrategy::kSumViews, ScoreStrategy::kTopkSumMax,
                 ScoreStrategy::kEnsembleMax}) {
    EXPECT_EQ(parse_score_strategy(score_strategy_name(s)), s);
  }
  EXPECT_THROW(parse_score_strategy("vote"), InvalidArgument);
}

}  // namespace
}  // namespace ringret

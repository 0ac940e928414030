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

#include "ringret/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ringret/errors.hpp"

namespace ringret {
namespace {

// Flags from a 1-based list of relevant ranks.
HitList hits_at(int n, std::initializer_list<int> ranks) {
  HitList h(static_cast<std::size_t>(n), false);
  for (int r : ranks) h[static_cast<std::size_t>(r - 1)] = true;
  return h;
}

Ranking ranking_of(std::string query, std::vector<std::string> ids) {
  Ranking r;
  r.query_id = std::move(query);
  double score = 1.0;
  for (auto& id : ids) {
    r.items.push_back({std::move(id), score});
    score -= 0.01;
  }
  return r;
}

TEST(NearestNeighborTest, FirstRankDecides) {
  EXPECT_EQ(nn(hits_at(5, {1})), 1.0);
  EXPECT_EQ(nn(hits_at(5, {2})), 0.0);
}

TEST(PrecisionTest, CountsTopTen) {
  EXPECT_DOUBLE_EQ(p_at_k(hits_at(20, {1})), 0.1);
  EXPECT_DOUBLE_EQ(p_at_k(hits_at(20, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10})), 1.0);
  EXPECT_DOUBLE_EQ(p_at_k(hits_at(5, {1, 2})), 0.2);  // short list, still /10
}

TEST(NdcgTest, SecondRank) {
  EXPECT_DOUBLE_EQ(ndcg(hits_at(4, {1})), 1.0);
  EXPECT_NEAR(ndcg(hits_at(4, {2})), std::log2(2.0) / std::log2(3.0), 1e-15);
  EXPECT_NEAR(ndcg(hits_at(4, {2})), 0.6309, 1e-4);
}

TEST(NdcgTest, PerfectOrderingIsOne) {
  for (int m = 1; m <= 6; ++m) {
    HitList h(10, false);
    for (int i = 0; i < m; ++i) h[static_cast<std::size_t>(i)] = true;
    EXPECT_DOUBLE_EQ(ndcg(h), 1.0) << m;
  }
}

TEST(AveragePrecisionTest, Examples) {
  EXPECT_DOUBLE_EQ(average_precision(hits_at(3, {1})), 1.0);
  EXPECT_DOUBLE_EQ(average_precision(hits_at(5, {1, 3})), 5.0 / 6.0);
  EXPECT_DOUBLE_EQ(average_precision(hits_at(17, {17})), 1.0 / 17.0);
}

TEST(TierTest, Examples) {
  EXPECT_DOUBLE_EQ(first_tier(hits_at(6, {1, 2})), 1.0);
  EXPECT_DOUBLE_EQ(second_tier(hits_at(6, {1, 2})), 1.0);
  EXPECT_DOUBLE_EQ(first_tier(hits_at(6, {1, 4})), 0.5);
  EXPECT_DOUBLE_EQ(second_tier(hits_at(6, {1, 4})), 1.0);
}

TEST(FalloutTest, Examples) {
  HitList all(12, true);
  all[10] = all[11] = false;
  EXPECT_DOUBLE_EQ(fallout_rate(all), 0.0);
  EXPECT_DOUBLE_EQ(fallout_rate(hits_at(30, {3}), 30), 1.0);
  // 9 non-relevant in the top 10 out of 29.
  EXPECT_DOUBLE_EQ(fallout_rate(hits_at(30, {3})), 9.0 / 29.0);
}

TEST(FalloutTest, LeaderboardConsistencyFixesCutoffTen) {
  const double n = 711, m = 188.0 / 50.0, p10 = 0.238;
  const double fr = (10 - 10 * p10) / (n - m);
  EXPECT_NEAR(fr, 0.0108, 0.0005);
  // A cutoff of 20 would be inconsistent with any P@10 of 0.238.
  EXPECT_GT((20 - 10 * p10) / (n - m), 0.0108 + 0.0005);
}

TEST(PrCurveTest, Examples) {
  const auto one = pr_curve(hits_at(3, {1}));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], std::make_pair(1.0, 1.0));
  const auto two = pr_curve(hits_at(5, {1, 3}));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_DOUBLE_EQ(two[0].first, 0.5);
  EXPECT_DOUBLE_EQ(two[0].second, 1.0);
  EXPECT_DOUBLE_EQ(two[1].first, 1.0);
  EXPECT_DOUBLE_EQ(two[1].second, 2.0 / 3.0);
}

TEST(PrCurveTest, InterpolatedIsNonIncreasing) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto inst = testing_util::random_ranking_instance(rng);
    const auto curve = interpolated_pr(relevance_flags(inst.ranking, inst.relevant));
    for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_LE(curve[i], curve[i - 1]);
    EXPECT_GT(curve[10], 0.0);
  }
}

TEST(RelevanceFlagsTest, RejectsMissingRelevantId) {
  const Ranking r = ranking_of("q", {"a", "b"});
  EXPECT_THROW(relevance_flags(r, {"c"}), InvalidArgument);
  EXPECT_THROW(relevance_flags(ranking_of("q", {"a", "a"}), {"a"}), InvalidArgument);
}

TEST(MetricsOracleTest, RandomInstancesMatchExactly) {
  Rng rng(11);
  for (int t = 0; t < 1000; ++t) {
    const auto inst = testing_util::random_ranking_instance(rng);
    const QueryMetrics got = evaluate_query(relevance_flags(inst.ranking, inst.relevant));
    const oracle::Metrics want = oracle::metrics(inst.ids, inst.relevant);
    ASSERT_EQ(got.nn, want.nn) << t;
    ASSERT_EQ(got.p_at_10, want.p10) << t;
    ASSERT_EQ(got.ndcg, want.ndcg) << t;
    ASSERT_EQ(got.map, want.ap) << t;
    ASSERT_EQ(got.ft, want.ft) << t;
    ASSERT_EQ(got.st, want.st) << t;
    ASSERT_EQ(got.fr, want.fr) << t;
  }
}

TEST(MetricsPropertyTest, BoundsAndOrdering) {
  Rng rng(12);
  for (int t = 0; t < 500; ++t) {
    const auto inst = testing_util::random_ranking_instance(rng);
    const QueryMetrics q = evaluate_query(relevance_flags(inst.ranking, inst.relevant));
    for (double v : {q.nn, q.p_at_10, q.ndcg, q.map, q.ft, q.st, q.fr}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_LE(q.ft, q.st);
    if (q.nn == 1.0) {
      EXPECT_GE(q.map, 1.0 / static_cast<double>(inst.relevant.size()));
    }
  }
}

TEST(MetricsPropertyTest, PromotingRelevantItemNeverHurts) {
  Rng rng(13);
  for (int t = 0; t < 300; ++t) {
    const auto inst = testing_util::random_ranking_instance(rng);
    HitList h = relevance_flags(inst.ranking, inst.relevant);
    for (std::size_t i = 0; i + 1 < h.size(); ++i) {
      if (h[i] || !h[i + 1]) continue;
      HitList s = h;
      s[i] = true;
      s[i + 1] = false;
      const QueryMetrics a = evaluate_query(h), b = evaluate_query(s);
      EXPECT_GE(b.nn, a.nn);
      EXPECT_GE(b.p_at_10, a.p_at_10);
      EXPECT_GE(b.ndcg, a.ndcg);
      EXPECT_GE(b.map, a.map);
      EXPECT_GE(b.ft, a.ft);
      EXPECT_GE(b.st, a.st);
      EXPECT_LE(b.fr, a.fr);  // lower fallout is better
      break;
    }
  }
}

TEST(MetricsPropertyTest, InvariantToScoreValues) {
  const Ranking a = ranking_of("q", {"x", "y", "z"});
  Ranking b = a;
  b.items[0].score = 50;
  b.items[1].score = -3;
  b.items[2].score = -70;
  const std::set<std::string> rel = {"y"};
  EXPECT_EQ(relevance_flags(a, rel), relevance_flags(b, rel));
}

TEST(EvaluateRunTest, MacroAveragesQueries) {
  RelevanceMap rel = {{"q1", {"a"}}, {"q2", {"a"}}};
  const std::vector<Ranking> runs = {ranking_of("q1", {"a", "b"}),
                                     ranking_of("q2", {"b", "a"})};
  const MetricsReport report = evaluate_run(runs, rel);
  EXPECT_DOUBLE_EQ(report.macro.nn, 0.5);
  ASSERT_EQ(report.per_query.size(), 2u);
  EXPECT_EQ(report.per_query[0].first, "q1");
}

TEST(EvaluateRunTest, PerfectRunMatchesOracle) {
  RelevanceMap rel;
  std::vector<Ranking> runs;
  std::vector<std::string> gallery;
  for (int i = 0; i < 30; ++i) gallery.push_back("m" + std::to_string(10 + i));
  double fr = 0, p10 = 0;
  for (int q = 0; q < 5; ++q) {
    const int m = 2 + 3 * q;  // 2, 5, 8, 11, 14
    std::vector<std::string> order = gallery;
    std::rotate(order.begin(), order.begin() + q, order.end());
    std::set<std::string> relevant(order.begin(), order.begin() + m);
    const std::string id = "q" + std::to_string(q);
    rel[id] = relevant;
    runs.push_back(ranking_of(id, order));
    const auto want = oracle::metrics(order, relevant);
    fr += want.fr / 5;
    p10 += want.p10 / 5;
  }
  const MetricsReport report = evaluate_run(runs, rel);
  EXPECT_EQ(report.macro.nn, 1.0);
  EXPECT_EQ(report.macro.ndcg, 1.0);
  EXPECT_EQ(report.macro.map, 1.0);
  EXPECT_EQ(report.macro.ft, 1.0);
  EXPECT_EQ(report.macro.st, 1.0);
  EXPECT_NEAR(report.macro.p_at_10, p10, 1e-15);
  EXPECT_NEAR(report.macro.fr, fr, 1e-15);
}

TEST(EvaluateRunTest, Errors) {
  RelevanceMap rel = {{"q1", {"a"}}, {"q2", {"a"}}};
  EXPECT_THROW(evaluate_run({}, rel), InvalidArgument);
  try {
    evaluate_run({ranking_of("q1", {"a", "b"})}, rel);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("q2"), std::string::npos);
  }
}

TEST(EvaluateRunTest, SkipsQueriesWithoutRelevance) {
  RelevanceMap rel = {{"q1", {"a"}}};
  const auto report = evaluate_run(
      {ranking_of("q1", {"a", "b"}), ranking_of("q9", {"b", "a"})}, rel);
  ASSERT_EQ(report.skipped.size(), 1u);
  EXPECT_EQ(report.skipped[0], "q9");
  EXPECT_EQ(report.per_query.size(), 1u);
}

TEST(EvaluateRunTest, ReportIsDeterministic) {
  RelevanceMap rel = {{"q1", {"a", "c"}}, {"q2", {"b"}}};
  const std::vector<Ranking> runs = {ranking_of("q1", {"c", "b", "a"}),
                                     ranking_of("q2", {"a", "c", "b"})};
  const std::string a = to_report_csv(evaluate_run(runs, rel));
  EXPECT_EQ(a, to_report_csv(evaluate_run(runs, rel)));
  EXPECT_EQ(a.rfind("query_id,nn,p_at_10,ndcg,map,ft,st,fr\n", 0), 0u);
  EXPECT_NE(a.find("\nMACRO,"), std::string::npos);
}

TEST(LeaderboardTest, ColumnOrder) {
  QueryMetrics q;
  q.nn = 0.5;
  q.fr = 0.0108;
  const std::string table = to_leaderboard({{"team", q}});
  const auto nn_at = table.find("NN");
  const auto p_at = table.find("P@10");
  const auto fr_at = table.find("FR");
  EXPECT_LT(nn_at, p_at);
  EXPECT_LT(p_at, fr_at);
  EXPECT_NE(table.find("0.0108"), std::string::npos);
}

}  // namespace
}  // namespace ringret

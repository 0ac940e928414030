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

#ifndef RINGRET_METRICS_HPP_
#define RINGRET_METRICS_HPP_

#include <array>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ringret/manifest.hpp"
#include "ringret/retrieval.hpp"

namespace ringret {

// hits[i] is true when the item at rank i + 1 is relevant. All functions
// below take the full-gallery flags; m is the number of true entries.
using HitList = std::vector<bool>;

// Throws InvalidArgument if a relevant id is missing from the ranking or the
// ranking repeats an id.
HitList relevance_flags(const Ranking& ranking, const std::set<std::string>& relevant);

double nn(const HitList& hits);
double p_at_k(const HitList& hits, int k = 10);
// DCG with rel_i / log2(i + 1), divided by the ideal DCG.
double ndcg(const HitList& hits);
// (1/m) * sum of precision at each relevant rank.
double average_precision(const HitList& hits);
double first_tier(const HitList& hits);
double second_tier(const HitList& hits);
// Non-relevant items within the top `cutoff`, over all non-relevant items.
double fallout_rate(const HitList& hits, int cutoff = 10);

// (recall, precision) at every relevant hit.
std::vector<std::pair<double, double>> pr_curve(const HitList& hits);
// Interpolated precision at recall 0.0, 0.1, ..., 1.0.
std::array<double, 11> interpolated_pr(const HitList& hits);

struct QueryMetrics {
  double nn = 0, p_at_10 = 0, ndcg = 0, map = 0, ft = 0, st = 0, fr = 0;
};

struct MetricConfig {
  int p_k = 10;
  int fr_cutoff = 10;
};

QueryMetrics evaluate_query(const HitList& hits, const MetricConfig& config = {});

struct MetricsReport {
  std::vector<std::pair<std::string, QueryMetrics>> per_query;  // by query id
  QueryMetrics macro;
  std::array<double, 11> macro_pr{};
  std::vector<std::string> skipped;  // ranked queries without relevant models
};

// Every query with relevant models must have a ranking (InvalidArgument
// listing the missing ids otherwise); ranked queries without relevant models
// are skipped and listed in `skipped`.
MetricsReport evaluate_run(const std::vector<Ranking>& rankings,
                           const RelevanceMap& relevance,
                           const MetricConfig& config = {});

// `query_id,nn,p_at_10,ndcg,map,ft,st,fr` rows plus a final MACRO row.
std::string to_report_csv(const MetricsReport& report);

// Aligned text table in the column order NN, P@10, NDCG, mAP, FT, ST, FR.
std::string to_leaderboard(
    const std::vector<std::pair<std::string, QueryMetrics>>& rows);

}  // namespace ringret

#endif  // RINGRET_METRICS_HPP_

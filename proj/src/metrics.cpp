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
#include <map>

#include <fmt/format.h>

#include "ringret/errors.hpp"

namespace ringret {
namespace {

int count_relevant(const HitList& hits) {
  return static_cast<int>(std::count(hits.begin(), hits.end(), true));
}

int hits_in_top(const HitList& hits, std::size_t k) {
  const std::size_t n = std::min(k, hits.size());
  return static_cast<int>(std::count(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(n), true));
}

int require_relevant(const HitList& hits, const char* what) {
  const int m = count_relevant(hits);
  if (m == 0) throw InvalidArgument(std::string(what) + ": no relevant items");
  return m;
}

}  // namespace

HitList relevance_flags(const Ranking& ranking, const std::set<std::string>& relevant) {
  HitList hits;
  hits.reserve(ranking.items.size());
  std::set<std::string> seen;
  std::size_t found = 0;
  for (const auto& it : ranking.items) {
    if (!seen.insert(it.model_id).second) {
      throw InvalidArgument("ranking for '" + ranking.query_id + "' repeats '" +
                            it.model_id + "'");
    }
    const bool hit = relevant.count(it.model_id) > 0;
    found += hit;
    hits.push_back(hit);
  }
  if (found != relevant.size()) {
    std::string missing;
    for (const auto& id : relevant) {
      if (!seen.count(id)) missing += (missing.empty() ? "" : ", ") + id;
    }
    throw InvalidArgument("ranking for '" + ranking.query_id +
                          "' lacks relevant models: " + missing);
  }
  return hits;
}

double nn(const HitList& hits) { return !hits.empty() && hits.front() ? 1.0 : 0.0; }

double p_at_k(const HitList& hits, int k) {
  if (k < 1) throw InvalidArgument("p_at_k: k must be >= 1");
  return static_cast<double>(hits_in_top(hits, static_cast<std::size_t>(k))) / k;
}

double ndcg(const HitList& hits) {
  const int m = require_relevant(hits, "ndcg");
  double dcg = 0;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (hits[i]) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  double ideal = 0;
  for (int i = 0; i < m; ++i) ideal += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  return dcg / ideal;
}

double average_precision(const HitList& hits) {
  const int m = require_relevant(hits, "average_precision");
  double sum = 0;
  int seen = 0;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (hits[i]) {
      ++seen;
      sum += static_cast<double>(seen) / static_cast<double>(i + 1);
    }
  }
  return sum / m;
}

double first_tier(const HitList& hits) {
  const int m = require_relevant(hits, "first_tier");
  return static_cast<double>(hits_in_top(hits, static_cast<std::size_t>(m))) / m;
}

double second_tier(const HitList& hits) {
  const int m = require_relevant(hits, "second_tier");
  return static_cast<double>(hits_in_top(hits, 2 * static_cast<std::size_t>(m))) / m;
}

double fallout_rate(const HitList& hits, int cutoff) {
  if (cutoff < 1) throw InvalidArgument("fallout_rate: cutoff must be >= 1");
  const int m = count_relevant(hits);
  const int non_relevant = static_cast<int>(hits.size()) - m;
  if (non_relevant <= 0) throw InvalidArgument("fallout_rate: no non-relevant items");
  const std::size_t n = std::min(static_cast<std::size_t>(cutoff), hits.size());
  const int retrieved = static_cast<int>(n) - hits_in_top(hits, n);
  return static_cast<double>(retrieved) / non_relevant;
}

std::vector<std::pair<double, double>> pr_curve(const HitList& hits) {
  const int m = require_relevant(hits, "pr_curve");
  std::vector<std::pair<double, double>> out;
  int seen = 0;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (hits[i]) {
      ++seen;
      out.emplace_back(static_cast<double>(seen) / m,
                       static_cast<double>(seen) / static_cast<double>(i + 1));
    }
  }
  return out;
}

std::array<double, 11> interpolated_pr(const HitList& hits) {
  const auto curve = pr_curve(hits);
  std::array<double, 11> out{};
  for (int level = 0; level <= 10; ++level) {
    const double r = level / 10.0;
    double best = 0;
    for (const auto& [recall, precision] : curve) {
      if (recall >= r - 1e-12) best = std::max(best, precision);
    }
    out[static_cast<std::size_t>(level)] = best;
  }
  return out;
}

QueryMetrics evaluate_query(const HitList& hits, const MetricConfig& config) {
  QueryMetrics q;
  q.nn = nn(hits);
  q.p_at_10 = p_at_k(hits, config.p_k);
  q.ndcg = ndcg(hits);
  q.map = average_precision(hits);
  q.ft = first_tier(hits);
  q.st = second_tier(hits);
  q.fr = fallout_rate(hits, config.fr_cutoff);
  return q;
}

MetricsReport evaluate_run(const std::vector<Ranking>& rankings,
                           const RelevanceMap& relevance, const MetricConfig& config) {
  if (rankings.empty()) throw InvalidArgument("evaluate_run: no rankings");
  std::map<std::string, const Ranking*> by_id;
  for (const auto& r : rankings) {
    if (!by_id.emplace(r.query_id, &r).second) {
      throw InvalidArgument("evaluate_run: query '" + r.query_id + "' ranked twice");
    }
  }
  std::string missing;
  for (const auto& [qid, rel] : relevance) {
    if (!rel.empty() && !by_id.count(qid)) missing += (missing.empty() ? "" : ", ") + qid;
  }
  if (!missing.empty()) {
    throw InvalidArgument("evaluate_run: no ranking for queries: " + missing);
  }

  MetricsReport report;
  for (const auto& [qid, r] : by_id) {
    const auto it = relevance.find(qid);
    if (it == relevance.end() || it->second.empty()) report.skipped.push_back(qid);
  }
  for (const auto& [qid, rel] : relevance) {
    if (rel.empty()) continue;
    const HitList hits = relevance_flags(*by_id.at(qid), rel);
    report.per_query.emplace_back(qid, evaluate_query(hits, config));
    const auto pr = interpolated_pr(hits);
    for (std::size_t i = 0; i < pr.size(); ++i) report.macro_pr[i] += pr[i];
  }
  const double n = static_cast<double>(report.per_query.size());
  if (n == 0) throw InvalidArgument("evaluate_run: no query has relevant models");
  QueryMetrics& mac = report.macro;
  for (const auto& [qid, q] : report.per_query) {
    mac.nn += q.nn;
    mac.p_at_10 += q.p_at_10;
    mac.ndcg += q.ndcg;
    mac.map += q.map;
    mac.ft += q.ft;
    mac.st += q.st;
    mac.fr += q.fr;
  }
  for (double* v : {&mac.nn, &mac.p_at_10, &mac.ndcg, &mac.map, &mac.ft, &mac.st, &mac.fr}) {
    *v /= n;
  }
  for (double& v : report.macro_pr) v /= n;
  return report;
}

std::string to_report_csv(const MetricsReport& report) {
  std::string out = "query_id,nn,p_at_10,ndcg,map,ft,st,fr\n";
  const auto row = [&](const std::string& id, const QueryMetrics& q) {
    out += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", id,
                       q.nn, q.p_at_10, q.ndcg, q.map, q.ft, q.st, q.fr);
  };
  for (const auto& [id, q] : report.per_query) row(id, q);
  row("MACRO", report.macro);
  return out;
}

std::string to_leaderboard(const std::vector<std::pair<std::string, QueryMetrics>>& rows) {
  std::size_t width = 4;
  for (const auto& [name, q] : rows) width = std::max(width, name.size());
  std::string out = fmt::format("{:<{}}  {:>6}  {:>6}  {:>6}  {:>6}  {:>6}  {:>6}  {:>6}\n",
                                "Name", width, "NN", "P@10", "NDCG", "mAP", "FT", "ST", "FR");
  for (const auto& [name, q] : rows) {
    out += fmt::format(
        "{:<{}}  {:>6.3f}  {:>6.3f}  {:>6.3f}  {:>6.3f}  {:>6.3f}  {:>6.3f}  {:>6.4f}\n", name,
        width, q.nn, q.p_at_10, q.ndcg, q.map, q.ft, q.st, q.fr);
  }
  return out;
}

}  // namespace ringret

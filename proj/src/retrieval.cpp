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
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "ringret/errors.hpp"
#include "text_fields.hpp"

namespace ringret {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

ScoreStrategy parse_score_strategy(std::string_view name) {
  if (name == "single") return ScoreStrategy::kSingle;
  if (name == "sum_views") return ScoreStrategy::kSumViews;
  if (name == "topk_sum_max") return ScoreStrategy::kTopkSumMax;
  if (name == "ensemble_max") return ScoreStrategy::kEnsembleMax;
  throw InvalidArgument("unknown score strategy '" + std::string(name) + "'");
}

const char* score_strategy_name(ScoreStrategy strategy) {
  switch (strategy) {
    case ScoreStrategy::kSingle:
      return "single";
    case ScoreStrategy::kSumViews:
      return "sum_views";
    case ScoreStrategy::kTopkSumMax:
      return "topk_sum_max";
    case ScoreStrategy::kEnsembleMax:
      return "ensemble_max";
  }
  return "?";
}

double cosine_sim(const VectorXd& u, const VectorXd& v) {
  if (u.size() != v.size()) {
    throw ShapeError(fmt::format("cosine_sim: sizes {} and {} differ", u.size(), v.size()));
  }
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0 || nv == 0) return 0;
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

Ranking rank_scores(std::string query_id, const std::vector<std::string>& model_ids,
                    const VectorXd& scores) {
  if (model_ids.empty()) throw InvalidArgument("rank: empty gallery");
  if (scores.size() != static_cast<Index>(model_ids.size())) {
    throw ShapeError("rank: one score per model expected");
  }
  std::vector<std::size_t> order(model_ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double sa = scores[static_cast<Index>(a)];
    const double sb = scores[static_cast<Index>(b)];
    if (sa != sb) return sa > sb;
    return model_ids[a] < model_ids[b];
  });
  Ranking r{std::move(query_id), {}};
  r.items.reserve(order.size());
  for (std::size_t i : order) {
    r.items.push_back({model_ids[i], scores[static_cast<Index>(i)]});
  }
  // Permutation check: sorted output ids equal the sorted input ids.
  std::vector<std::string> a = model_ids, b;
  for (const auto& it : r.items) b.push_back(it.model_id);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b || std::adjacent_find(a.begin(), a.end()) != a.end()) {
    throw InvalidArgument("rank: gallery ids are not unique");
  }
  return r;
}

Ranking rank_gallery(std::string query_id, const VectorXd& query,
                     const EmbeddingMatrix& gallery) {
  if (gallery.rows() == 0) throw InvalidArgument("rank_gallery: empty gallery");
  if (query.size() != gallery.dim()) {
    throw ShapeError(fmt::format("rank_gallery: query dim {} vs gallery dim {}",
                                 query.size(), gallery.dim()));
  }
  VectorXd scores(gallery.rows());
  for (Index i = 0; i < gallery.rows(); ++i) scores[i] = cosine_sim(query, gallery.row(i));
  return rank_scores(std::move(query_id), gallery.ids(), scores);
}

double score_sum_views(const VectorXd& query, const MatrixXd& views) {
  if (views.rows() == 0) throw InvalidArgument("score_sum_views: no views");
  double sum = 0;
  for (Index i = 0; i < views.rows(); ++i) {
    sum += cosine_sim(query, views.row(i).transpose());
  }
  return sum;
}

double score_topk_sum_max(const std::vector<MatrixXd>& partitions,
                          const std::vector<MatrixXd>& groups, int k) {
  if (k < 1) throw InvalidArgument("score_topk_sum_max: k must be >= 1");
  if (partitions.empty()) throw InvalidArgument("score_topk_sum_max: no query partitions");
  if (groups.empty()) throw InvalidArgument("score_topk_sum_max: no view groups");
  for (const auto& g : groups) {
    if (g.rows() == 0) throw InvalidArgument("score_topk_sum_max: empty view group");
  }
  double total = 0;
  for (const auto& variants : partitions) {
    if (k > variants.rows()) {
      throw InvalidArgument(fmt::format(
          "score_topk_sum_max: k = {} exceeds the {} available variant scores", k,
          variants.rows()));
    }
    double object = -std::numeric_limits<double>::infinity();
    for (const auto& views : groups) {
      for (Index v = 0; v < views.rows(); ++v) {
        std::vector<double> cos;
        for (Index q = 0; q < variants.rows(); ++q) {
          cos.push_back(cosine_sim(variants.row(q).transpose(), views.row(v).transpose()));
        }
        std::partial_sort(cos.begin(), cos.begin() + k, cos.end(), std::greater<>());
        double sum = 0;
        for (int i = 0; i < k; ++i) sum += cos[static_cast<std::size_t>(i)];
        object = std::max(object, sum);
      }
    }
    total += object;
  }
  return total / static_cast<double>(partitions.size());
}

void ScoreTable::validate() const {
  if (scores.rows() != static_cast<Index>(query_ids.size()) ||
      scores.cols() != static_cast<Index>(model_ids.size())) {
    throw ShapeError("score table: labels do not match the score matrix");
  }
}

ScoreTable score_table(const EmbeddingMatrix& queries, const EmbeddingMatrix& gallery) {
  if (queries.dim() != gallery.dim()) {
    throw ShapeError(fmt::format("score_table: query dim {} vs gallery dim {}",
                                 queries.dim(), gallery.dim()));
  }
  ScoreTable t{queries.ids(), gallery.ids(), MatrixXd(queries.rows(), gallery.rows())};
  const MatrixXd g = gallery.as_double();
  for (Index i = 0; i < queries.rows(); ++i) {
    const VectorXd q = queries.row(i);
    for (Index j = 0; j < gallery.rows(); ++j) {
      t.scores(i, j) = cosine_sim(q, g.row(j).transpose());
    }
  }
  return t;
}

ScoreTable ensemble_max(const std::vector<ScoreTable>& members) {
  if (members.empty()) throw InvalidArgument("ensemble_max: no members");
  ScoreTable out = members.front();
  out.validate();
  for (std::size_t m = 1; m < members.size(); ++m) {
    const ScoreTable& t = members[m];
    t.validate();
    if (t.query_ids != out.query_ids || t.model_ids != out.model_ids) {
      throw InvalidArgument(
          fmt::format("ensemble_max: member {} covers a different gallery or query set", m));
    }
    out.scores = out.scores.cwiseMax(t.scores);
  }
  return out;
}

std::vector<Ranking> rank_table(const ScoreTable& table) {
  table.validate();
  std::vector<Ranking> out;
  for (Index i = 0; i < table.scores.rows(); ++i) {
    out.push_back(rank_scores(table.query_ids[static_cast<std::size_t>(i)],
                              table.model_ids, table.scores.row(i).transpose()));
  }
  return out;
}

std::string to_ranking_tsv(const std::vector<Ranking>& rankings) {
  std::string out;
  for (const auto& r : rankings) {
    for (const auto& it : r.items) {
      out += fmt::format("{}\t{}\t{:.9g}\n", r.query_id, it.model_id, it.score);
    }
  }
  return out;
}

std::vector<Ranking> parse_ranking_tsv(std::string_view data) {
  std::vector<Ranking> out;
  std::set<std::string> finished;
  std::set<std::string> seen_models;
  text::for_each_line(data, [&](std::string_view line, std::size_t line_no) {
    const auto f = text::split(line, '\t');
    if (f.size() != 3) throw ParseError("expected 3 tab-separated fields", line_no);
    if (f[0].empty() || f[1].empty()) throw ParseError("empty id", line_no);
    const double score = text::parse_double(f[2], line_no);
    if (out.empty() || out.back().query_id != f[0]) {
      if (!out.empty()) finished.insert(out.back().query_id);
      if (finished.count(std::string(f[0]))) {
        throw ParseError("query '" + std::string(f[0]) + "' appears in two blocks", line_no);
      }
      out.push_back({std::string(f[0]), {}});
      seen_models.clear();
    }
    Ranking& r = out.back();
    if (!r.items.empty() && score > r.items.back().score) {
      throw ParseError("scores must be non-increasing within a query", line_no);
    }
    if (!seen_models.insert(std::string(f[1])).second) {
      throw ParseError("model '" + std::string(f[1]) + "' repeated", line_no);
    }
    r.items.push_back({std::string(f[1]), score});
  });
  return out;
}

}  // namespace ringret

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

#ifndef RINGRET_RETRIEVAL_HPP_
#define RINGRET_RETRIEVAL_HPP_

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ringret/encoders.hpp"

namespace ringret {

enum class ScoreStrategy { kSingle, kSumViews, kTopkSumMax, kEnsembleMax };

ScoreStrategy parse_score_strategy(std::string_view name);
const char* score_strategy_name(ScoreStrategy strategy);

// Cosine similarity; 0 when either vector is all zeros.
double cosine_sim(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

struct RankedItem {
  std::string model_id;
  double score = 0;
};

// A full-gallery ranking: descending score, ties by model id ascending.
struct Ranking {
  std::string query_id;
  std::vector<RankedItem> items;
};

// Sorts `model_ids` by `scores` under the ranking order and checks that the
// result is a permutation of the ids.
Ranking rank_scores(std::string query_id, const std::vector<std::string>& model_ids,
                    const Eigen::VectorXd& scores);

Ranking rank_gallery(std::string query_id, const Eigen::VectorXd& query,
                     const EmbeddingMatrix& gallery);

// Sum of per-view cosines (one view per row).
double score_sum_views(const Eigen::VectorXd& query, const Eigen::MatrixXd& views);

// Each partition holds the variant embeddings of one source query (one per
// row); each group holds view embeddings (one per row). Per partition and
// view the k largest variant cosines are summed; a group scores the max over
// its views, the object the max over groups; the result is the mean over
// partitions.
double score_topk_sum_max(const std::vector<Eigen::MatrixXd>& partitions,
                          const std::vector<Eigen::MatrixXd>& groups, int k);

// Query x model score matrix with labels.
struct ScoreTable {
  std::vector<std::string> query_ids;
  std::vector<std::string> model_ids;
  Eigen::MatrixXd scores;

  void validate() const;
};

// Cosine of every query row against every gallery row.
ScoreTable score_table(const EmbeddingMatrix& queries, const EmbeddingMatrix& gallery);

// Cell-wise maximum over members with identical query and gallery ids.
ScoreTable ensemble_max(const std::vector<ScoreTable>& members);

std::vector<Ranking> rank_table(const ScoreTable& table);

// TSV `query_id<TAB>model_id<TAB>score`, grouped by query, descending score.
std::string to_ranking_tsv(const std::vector<Ranking>& rankings);
// Throws ParseError with the line number on malformed rows, unordered
// scores, repeated models within a query or a query split into two blocks.
std::vector<Ranking> parse_ranking_tsv(std::string_view text);

}  // namespace ringret

#endif  // RINGRET_RETRIEVAL_HPP_

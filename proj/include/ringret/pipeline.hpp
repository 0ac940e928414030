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

#ifndef RINGRET_PIPELINE_HPP_
#define RINGRET_PIPELINE_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "ringret/aggregator.hpp"
#include "ringret/encoders.hpp"
#include "ringret/manifest.hpp"
#include "ringret/mesh.hpp"
#include "ringret/ringview.hpp"
#include "ringret/trainer.hpp"

namespace ringret {

// Renders every ring view of `mesh` and encodes each on a grid x grid block
// mean. One row per view, ring-major.
Eigen::MatrixXd view_features(const TriangleMesh& mesh, const RingViewConfig& config,
                              int grid, int jobs = 1);

// One toy text feature row per query.
Eigen::MatrixXd text_features(const std::vector<QueryEntry>& queries, int dim);

// Per-view rows of every model in one matrix. Row ids are
// "<model_id>:r<ring>v<view>" in model then ring-major view order.
EmbeddingMatrix pack_view_features(const std::vector<std::string>& model_ids,
                                   const std::vector<Eigen::MatrixXd>& views,
                                   int views_per_ring);
// Inverse of pack_view_features for the given models. Throws
// InvalidArgument when a model is missing or its row count differs from
// `tokens`.
std::vector<Eigen::MatrixXd> unpack_view_features(
    const EmbeddingMatrix& packed, const std::vector<std::string>& model_ids,
    int tokens);

// Maps relevance ids to indices into `model_ids`. Queries without relevant
// models are omitted; `query_rows` receives the rows of `text` kept.
TrainingData make_training_data(const RelevanceMap& relevance,
                                const std::vector<std::string>& query_ids,
                                const Eigen::MatrixXd& text,
                                const std::vector<std::string>& model_ids,
                                std::vector<Eigen::MatrixXd> model_views,
                                std::vector<std::string>* kept_queries = nullptr);

// Joint-space embeddings in eval mode.
EmbeddingMatrix embed_models(const AggregatorParams& params,
                             const std::vector<std::string>& model_ids,
                             const std::vector<Eigen::MatrixXd>& views);
EmbeddingMatrix embed_texts(const AggregatorParams& params,
                            const std::vector<std::string>& query_ids,
                            const Eigen::MatrixXd& text);

}  // namespace ringret

#endif  // RINGRET_PIPELINE_HPP_

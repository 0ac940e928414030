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

#include "ringret/pipeline.hpp"

#include <map>

#include <fmt/format.h>

#include "ringret/errors.hpp"

namespace ringret {

using Eigen::Index;
using Eigen::MatrixXd;

MatrixXd view_features(const TriangleMesh& mesh, const RingViewConfig& config,
                       int grid, int jobs) {
  return encode_model_views(render_ring_views(mesh, config, jobs), grid);
}

MatrixXd text_features(const std::vector<QueryEntry>& queries, int dim) {
  MatrixXd out(static_cast<Index>(queries.size()), dim);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    out.row(static_cast<Index>(i)) = toy_text_encode(queries[i].text, dim).transpose();
  }
  return out;
}

EmbeddingMatrix pack_view_features(const std::vector<std::string>& model_ids,
                                   const std::vector<MatrixXd>& views,
                                   int views_per_ring) {
  if (model_ids.size() != views.size()) {
    throw ShapeError("pack_view_features: one view matrix per model expected");
  }
  if (views.empty()) throw InvalidArgument("pack_view_features: no models");
  if (views_per_ring < 1) throw InvalidArgument("pack_view_features: views_per_ring < 1");
  const Index dim = views.front().cols();
  Index rows = 0;
  for (const auto& v : views) {
    if (v.cols() != dim) throw ShapeError("pack_view_features: feature sizes differ");
    rows += v.rows();
  }
  MatrixXd packed(rows, dim);
  std::vector<std::string> ids;
  Index r = 0;
  for (std::size_t m = 0; m < views.size(); ++m) {
    for (Index i = 0; i < views[m].rows(); ++i, ++r) {
      packed.row(r) = views[m].row(i);
      ids.push_back(fmt::format("{}:r{}v{}", model_ids[m], i / views_per_ring,
                                i % views_per_ring));
    }
  }
  return EmbeddingMatrix(std::move(ids), packed);
}

std::vector<MatrixXd> unpack_view_features(const EmbeddingMatrix& packed,
                                           const std::vector<std::string>& model_ids,
                                           int tokens) {
  std::map<std::string, std::vector<Index>> rows;
  for (Index i = 0; i < packed.rows(); ++i) {
    const std::string& id = packed.ids()[static_cast<std::size_t>(i)];
    const auto colon = id.rfind(':');
    if (colon == std::string::npos) {
      throw FormatError(FormatError::Kind::kMalformed,
                        "view feature id '" + id + "' lacks a ':r<ring>v<view>' suffix");
    }
    rows[id.substr(0, colon)].push_back(i);
  }
  const MatrixXd values = packed.as_double();
  std::vector<MatrixXd> out;
  for (const auto& id : model_ids) {
    const auto it = rows.find(id);
    if (it == rows.end()) {
      throw InvalidArgument("no view features for model '" + id + "'");
    }
    if (static_cast<int>(it->second.size()) != tokens) {
      throw InvalidArgument(fmt::format("model '{}' has {} views, expected {}", id,
                                        it->second.size(), tokens));
    }
    MatrixXd v(tokens, values.cols());
    for (int t = 0; t < tokens; ++t) v.row(t) = values.row(it->second[static_cast<std::size_t>(t)]);
    out.push_back(std::move(v));
  }
  return out;
}

TrainingData make_training_data(const RelevanceMap& relevance,
                                const std::vector<std::string>& query_ids,
                                const MatrixXd& text,
                                const std::vector<std::string>& model_ids,
                                std::vector<MatrixXd> model_views,
                                std::vector<std::string>* kept_queries) {
  if (text.rows() != static_cast<Index>(query_ids.size())) {
    throw ShapeError("make_training_data: one text row per query expected");
  }
  std::map<std::string, int> model_index;
  for (std::size_t i = 0; i < model_ids.size(); ++i) {
    model_index.emplace(model_ids[i], static_cast<int>(i));
  }
  TrainingData data;
  data.model_views = std::move(model_views);
  std::vector<Index> rows;
  for (std::size_t q = 0; q < query_ids.size(); ++q) {
    const auto it = relevance.find(query_ids[q]);
    if (it == relevance.end() || it->second.empty()) continue;
    std::vector<int> rel;
    for (const auto& m : it->second) {
      const auto mi = model_index.find(m);
      if (mi == model_index.end()) {
        throw InvalidArgument("relevance refers to unknown model '" + m + "'");
      }
      rel.push_back(mi->second);
    }
    data.relevant.push_back(std::move(rel));
    rows.push_back(static_cast<Index>(q));
    if (kept_queries) kept_queries->push_back(query_ids[q]);
  }
  data.text.resize(static_cast<Index>(rows.size()), text.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    data.text.row(static_cast<Index>(i)) = text.row(rows[i]);
  }
  return data;
}

EmbeddingMatrix embed_models(const AggregatorParams& params,
                             const std::vector<std::string>& model_ids,
                             const std::vector<MatrixXd>& views) {
  if (model_ids.size() != views.size()) {
    throw ShapeError("embed_models: one view matrix per model expected");
  }
  MatrixXd out(static_cast<Index>(views.size()), params.config.joint_dim);
  for (std::size_t i = 0; i < views.size(); ++i) {
    out.row(static_cast<Index>(i)) = forward_views(params, views[i]).transpose();
  }
  return EmbeddingMatrix(model_ids, out);
}

EmbeddingMatrix embed_texts(const AggregatorParams& params,
                            const std::vector<std::string>& query_ids,
                            const MatrixXd& text) {
  if (text.rows() != static_cast<Index>(query_ids.size())) {
    throw ShapeError("embed_texts: one text row per query expected");
  }
  MatrixXd out(text.rows(), params.config.joint_dim);
  for (Index i = 0; i < text.rows(); ++i) {
    out.row(i) = forward_text(params, text.row(i).transpose()).transpose();
  }
  return EmbeddingMatrix(query_ids, out);
}

}  // namespace ringret

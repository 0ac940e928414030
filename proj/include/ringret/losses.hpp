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

#ifndef RINGRET_LOSSES_HPP_
#define RINGRET_LOSSES_HPP_

#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace ringret {

enum class LossVariant { kInfoNceMulti, kNtXent, kSoftClip, kTriplet };

LossVariant parse_loss_variant(std::string_view name);
const char* loss_variant_name(LossVariant variant);

struct LossConfig {
  LossVariant variant = LossVariant::kInfoNceMulti;
  double temperature = 0.07;  // tau for InfoNCE / NT-Xent
  double margin = 0.2;        // triplet margin
  bool symmetric_clip = true; // soft CLIP: average row and column CE

  void validate() const;
};

// For each batch element i, the indices of its positives (i excluded).
using PositiveSets = std::vector<std::vector<int>>;

// Loss value with gradients w.r.t. the raw input rows (before the internal
// row normalization) and w.r.t. the logit scale where one is used.
struct LossResult {
  double value = 0;
  Eigen::MatrixXd grad_a;
  Eigen::MatrixXd grad_b;
  double grad_logit_scale = 0;
};

// Rows scaled to unit L2 norm; zero rows stay zero.
struct NormalizedRows {
  Eigen::MatrixXd unit;
  Eigen::VectorXd norms;
};
NormalizedRows normalize_rows(const Eigen::MatrixXd& x);
// Pulls a gradient w.r.t. the unit rows back to the raw rows.
Eigen::MatrixXd normalize_rows_backward(const NormalizedRows& n,
                                        const Eigen::MatrixXd& grad_unit);

// Throws InvalidArgument unless every set is in range, excludes its owner and
// the relation is symmetric.
void validate_positive_sets(const PositiveSets& positives, Eigen::Index n);

// NT-Xent over stacked embeddings. For every ordered positive pair (i, j):
//   l_ij = -log exp(s_ij / tau) / sum_{k != i, k not in P_i} exp(s_ik / tau)
// with s the cosine similarity; the loss is the mean over all pairs.
// grad_a holds d loss / d z.
LossResult nt_xent(const Eigen::MatrixXd& z, const PositiveSets& positives,
                   double tau);

// InfoNCE with a shared softmax over all other batch elements. Each anchor
// with positives contributes the mean of -log softmax at its positives;
// the loss is the mean over those anchors.
LossResult info_nce_stacked(const Eigen::MatrixXd& z,
                            const PositiveSets& positives, double tau);

// Text/model form of the above: texts and models are stacked, `match(i, j)`
// marks model j as a counterpart of text i. Every other prompt and model in
// the batch serves as a negative. grad_a is w.r.t. text, grad_b w.r.t. models.
LossResult info_nce_multi(const Eigen::MatrixXd& text,
                          const Eigen::MatrixXd& models,
                          const Eigen::Array<bool, Eigen::Dynamic,
                                             Eigen::Dynamic>& match,
                          double tau);

// Soft-target CLIP loss. With cosine matrices S_T, S_I and Logits = T I^T:
//   Target = row_softmax(c (S_T + S_I) / 2)
//   loss   = 1/2 [CE(row_softmax(c Logits), Target)
//                 + CE(col_softmax(c Logits), Target^T)]
// CE averages over rows (columns for the second term). With `symmetric`
// false only the row term is used. Gradients flow through Target as well.
LossResult soft_clip_loss(const Eigen::MatrixXd& text,
                          const Eigen::MatrixXd& objects, double logit_scale,
                          bool symmetric = true);

struct TripletResult {
  double value = 0;
  Eigen::VectorXd grad_anchor;
  Eigen::VectorXd grad_positive;
  Eigen::VectorXd grad_negative;
};

// max(0, |a - p| - |a - n| + margin) on L2-normalized inputs.
TripletResult triplet_loss(const Eigen::VectorXd& anchor,
                           const Eigen::VectorXd& positive,
                           const Eigen::VectorXd& negative, double margin);

// Mean triplet loss with text row i as anchor, object row i as positive and
// object row negatives[i] as negative. Anchors with negatives[i] < 0 are
// skipped.
LossResult triplet_batch(const Eigen::MatrixXd& text,
                         const Eigen::MatrixXd& objects,
                         const std::vector<int>& negatives, double margin);

// Relevance structure of one training batch. Text row i is paired with
// object row i; `relevant(i, j)` marks object j as relevant to text i and
// objects sharing a `object_group` value are the same model.
struct BatchRelevance {
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> relevant;
  std::vector<int> object_group;
  std::vector<int> negatives;  // triplet only
};

// Dispatches on config.variant. grad_a is w.r.t. text rows, grad_b w.r.t.
// object rows.
LossResult batch_loss(const LossConfig& config, const Eigen::MatrixXd& text,
                      const Eigen::MatrixXd& objects,
                      const BatchRelevance& relevance, double logit_scale);

}  // namespace ringret

#endif  // RINGRET_LOSSES_HPP_

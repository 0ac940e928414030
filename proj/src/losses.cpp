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

#include "ringret/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ringret/errors.hpp"

namespace ringret {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Row-wise softmax with max subtraction.
MatrixXd row_softmax(const MatrixXd& x) {
  MatrixXd out(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const double m = x.row(i).maxCoeff();
    out.row(i) = (x.row(i).array() - m).exp();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

// Cosine-similarity gradient: dS (symmetric use, s_ik = u_i . u_k) -> dZ.
MatrixXd similarity_backward(const NormalizedRows& n, const MatrixXd& grad_s) {
  const MatrixXd grad_u = (grad_s + grad_s.transpose()) * n.unit;
  return normalize_rows_backward(n, grad_u);
}

}  // namespace

LossVariant parse_loss_variant(std::string_view name) {
  if (name == "info_nce_multi") return LossVariant::kInfoNceMulti;
  if (name == "nt_xent") return LossVariant::kNtXent;
  if (name == "soft_clip") return LossVariant::kSoftClip;
  if (name == "triplet") return LossVariant::kTriplet;
  throw InvalidArgument("unknown loss variant '" + std::string(name) + "'");
}

const char* loss_variant_name(LossVariant variant) {
  switch (variant) {
    case LossVariant::kInfoNceMulti:
      return "info_nce_multi";
    case LossVariant::kNtXent:
      return "nt_xent";
    case LossVariant::kSoftClip:
      return "soft_clip";
    case LossVariant::kTriplet:
      return "triplet";
  }
  return "?";
}

void LossConfig::validate() const {
  if (!(temperature > 0)) throw InvalidArgument("temperature must be > 0");
  if (!(margin >= 0)) throw InvalidArgument("margin must be >= 0");
}

NormalizedRows normalize_rows(const MatrixXd& x) {
  NormalizedRows n;
  n.norms = x.rowwise().norm();
  n.unit = MatrixXd::Zero(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    if (n.norms[i] > 0) n.unit.row(i) = x.row(i) / n.norms[i];
  }
  return n;
}

MatrixXd normalize_rows_backward(const NormalizedRows& n,
                                 const MatrixXd& grad_unit) {
  MatrixXd grad = MatrixXd::Zero(grad_unit.rows(), grad_unit.cols());
  for (Index i = 0; i < grad_unit.rows(); ++i) {
    if (!(n.norms[i] > 0)) continue;
    const double along = n.unit.row(i).dot(grad_unit.row(i));
    grad.row(i) = (grad_unit.row(i) - along * n.unit.row(i)) / n.norms[i];
  }
  return grad;
}

void validate_positive_sets(const PositiveSets& positives, Index n) {
  if (static_cast<Index>(positives.size()) != n) {
    throw InvalidArgument("positive sets: expected " + std::to_string(n) +
                          " entries");
  }
  std::vector<std::vector<bool>> rel(static_cast<std::size_t>(n),
                                     std::vector<bool>(static_cast<std::size_t>(n)));
  for (Index i = 0; i < n; ++i) {
    for (const int j : positives[static_cast<std::size_t>(i)]) {
      if (j < 0 || j >= n) throw InvalidArgument("positive index out of range");
      if (j == i) throw InvalidArgument("element listed as its own positive");
      rel[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (rel[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] !=
          rel[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) {
        throw InvalidArgument("positive sets are not symmetric");
      }
    }
  }
}

LossResult nt_xent(const MatrixXd& z, const PositiveSets& positives,
                   double tau) {
  if (!(tau > 0)) throw InvalidArgument("nt_xent: tau must be > 0");
  const Index n = z.rows();
  validate_positive_sets(positives, n);
  const NormalizedRows norm = normalize_rows(z);
  const MatrixXd s = norm.unit * norm.unit.transpose();

  double pairs = 0;
  for (const auto& p : positives) {
    if (p.empty()) {
      throw InvalidArgument("nt_xent: element without positives");
    }
    pairs += static_cast<double>(p.size());
  }

  double total = 0;
  MatrixXd grad_s = MatrixXd::Zero(n, n);
  std::vector<bool> excluded(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const auto& pos = positives[static_cast<std::size_t>(i)];
    std::fill(excluded.begin(), excluded.end(), false);
    excluded[static_cast<std::size_t>(i)] = true;
    for (const int j : pos) excluded[static_cast<std::size_t>(j)] = true;

    double max_logit = -std::numeric_limits<double>::infinity();
    for (Index k = 0; k < n; ++k) {
      if (!excluded[static_cast<std::size_t>(k)]) {
        max_logit = std::max(max_logit, s(i, k) / tau);
      }
    }
    if (!std::isfinite(max_logit)) {
      throw InvalidArgument(
          "nt_xent: element " + std::to_string(i) +
          " has an empty denominator (every other element is a positive)");
    }
    double denom = 0;
    for (Index k = 0; k < n; ++k) {
      if (!excluded[static_cast<std::size_t>(k)]) {
        denom += std::exp(s(i, k) / tau - max_logit);
      }
    }
    const double log_denom = max_logit + std::log(denom);
    const double weight = static_cast<double>(pos.size()) / pairs;
    for (Index k = 0; k < n; ++k) {
      if (!excluded[static_cast<std::size_t>(k)]) {
        grad_s(i, k) +=
            weight * std::exp(s(i, k) / tau - log_denom) / tau;
      }
    }
    for (const int j : pos) {
      total += log_denom - s(i, j) / tau;
      grad_s(i, j) -= 1.0 / (tau * pairs);
    }
  }

  LossResult r;
  r.value = total / pairs;
  r.grad_a = similarity_backward(norm, grad_s);
  return r;
}

LossResult info_nce_stacked(const MatrixXd& z, const PositiveSets& positives,
                            double tau) {
  if (!(tau > 0)) throw InvalidArgument("info_nce: tau must be > 0");
  const Index n = z.rows();
  if (n < 2) throw InvalidArgument("info_nce: need at least two elements");
  validate_positive_sets(positives, n);
  const NormalizedRows norm = normalize_rows(z);
  const MatrixXd s = norm.unit * norm.unit.transpose();

  double anchors = 0;
  for (const auto& p : positives) anchors += p.empty() ? 0 : 1;
  if (anchors == 0) throw InvalidArgument("info_nce: no anchor has positives");

  double total = 0;
  MatrixXd grad_s = MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const auto& pos = positives[static_cast<std::size_t>(i)];
    if (pos.empty()) continue;
    double max_logit = -std::numeric_limits<double>::infinity();
    for (Index k = 0; k < n; ++k) {
      if (k != i) max_logit = std::max(max_logit, s(i, k) / tau);
    }
    double denom = 0;
    for (Index k = 0; k < n; ++k) {
      if (k != i) denom += std::exp(s(i, k) / tau - max_logit);
    }
    const double log_denom = max_logit + std::log(denom);
    const double per_pos = 1.0 / static_cast<double>(pos.size());
    double anchor_loss = 0;
    for (const int j : pos) anchor_loss += log_denom - s(i, j) / tau;
    total += anchor_loss * per_pos;
    for (Index k = 0; k < n; ++k) {
      if (k != i) {
        grad_s(i, k) += std::exp(s(i, k) / tau - log_denom) / (tau * anchors);
      }
    }
    for (const int j : pos) grad_s(i, j) -= per_pos / (tau * anchors);
  }

  LossResult r;
  r.value = total / anchors;
  r.grad_a = similarity_backward(norm, grad_s);
  return r;
}

LossResult info_nce_multi(
    const MatrixXd& text, const MatrixXd& models,
    const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& match,
    double tau) {
  const Index nt = text.rows();
  const Index nm = models.rows();
  if (nt < 2) {
    throw InvalidArgument("info_nce_multi: batch needs at least 2 prompts");
  }
  if (text.cols() != models.cols()) {
    throw ShapeError("info_nce_multi: embedding dimensions differ");
  }
  if (match.rows() != nt || match.cols() != nm) {
    throw ShapeError("info_nce_multi: match matrix shape mismatch");
  }
  PositiveSets positives(static_cast<std::size_t>(nt + nm));
  for (Index i = 0; i < nt; ++i) {
    bool any = false;
    for (Index j = 0; j < nm; ++j) {
      if (match(i, j)) {
        positives[static_cast<std::size_t>(i)].push_back(static_cast<int>(nt + j));
        positives[static_cast<std::size_t>(nt + j)].push_back(static_cast<int>(i));
        any = true;
      }
    }
    if (!any) {
      throw InvalidArgument("info_nce_multi: prompt " + std::to_string(i) +
                            " has no matched model in the batch");
    }
  }
  MatrixXd z(nt + nm, text.cols());
  z << text, models;
  LossResult stacked = info_nce_stacked(z, positives, tau);
  LossResult r;
  r.value = stacked.value;
  r.grad_a = stacked.grad_a.topRows(nt);
  r.grad_b = stacked.grad_a.bottomRows(nm);
  return r;
}

LossResult soft_clip_loss(const MatrixXd& text, const MatrixXd& objects,
                          double logit_scale, bool symmetric) {
  if (text.rows() != objects.rows()) {
    throw InvalidArgument("soft_clip_loss: text and object counts differ");
  }
  if (text.cols() != objects.cols()) {
    throw ShapeError("soft_clip_loss: embedding dimensions differ");
  }
  const Index n = text.rows();
  const double c = logit_scale;
  const NormalizedRows tn = normalize_rows(text);
  const NormalizedRows in = normalize_rows(objects);
  const MatrixXd s_text = tn.unit * tn.unit.transpose();
  const MatrixXd s_obj = in.unit * in.unit.transpose();
  const MatrixXd logits = tn.unit * in.unit.transpose();
  const MatrixXd mean_self = (s_text + s_obj) / 2;
  const MatrixXd target = row_softmax(c * mean_self);
  const MatrixXd scaled = c * logits;
  const MatrixXd p_row = row_softmax(scaled);
  const MatrixXd p_col = row_softmax(scaled.transpose()).transpose();

  const double inv_n = 1.0 / static_cast<double>(n);
  const double w_row = symmetric ? 0.5 : 1.0;
  const double w_col = symmetric ? 0.5 : 0.0;

  // Row term uses target(i, :) against p_row(i, :); column term uses
  // target(j, :) against p_col(:, j).
  const MatrixXd log_row = p_row.array().log();
  const MatrixXd log_col = p_col.array().log();
  const double row_ce = -(target.array() * log_row.array()).sum() * inv_n;
  const double col_ce =
      -(target.transpose().array() * log_col.array()).sum() * inv_n;

  LossResult r;
  r.value = w_row * row_ce + w_col * col_ce;

  // d/d scaled logits.
  MatrixXd grad_scaled = w_row * inv_n * (p_row - target);
  if (w_col > 0) grad_scaled += w_col * inv_n * (p_col - target.transpose());
  // d/d target, then through the row softmax.
  MatrixXd grad_target = -w_row * inv_n * log_row;
  if (w_col > 0) grad_target -= w_col * inv_n * log_col.transpose();
  MatrixXd grad_pre = MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const double inner = target.row(i).dot(grad_target.row(i));
    grad_pre.row(i) =
        target.row(i).array() * (grad_target.row(i).array() - inner);
  }

  r.grad_logit_scale = (grad_scaled.array() * logits.array()).sum() +
                       (grad_pre.array() * mean_self.array()).sum();
  const MatrixXd grad_logits = c * grad_scaled;
  const MatrixXd grad_self = c * grad_pre / 2;  // same for S_T and S_I

  const MatrixXd grad_tu = grad_logits * in.unit +
                           (grad_self + grad_self.transpose()) * tn.unit;
  const MatrixXd grad_iu = grad_logits.transpose() * tn.unit +
                           (grad_self + grad_self.transpose()) * in.unit;
  r.grad_a = normalize_rows_backward(tn, grad_tu);
  r.grad_b = normalize_rows_backward(in, grad_iu);
  return r;
}

TripletResult triplet_loss(const VectorXd& anchor, const VectorXd& positive,
                           const VectorXd& negative, double margin) {
  if (anchor.size() != positive.size() || anchor.size() != negative.size()) {
    throw ShapeError("triplet_loss: dimension mismatch");
  }
  MatrixXd rows(3, anchor.size());
  rows.row(0) = anchor.transpose();
  rows.row(1) = positive.transpose();
  rows.row(2) = negative.transpose();
  const NormalizedRows n = normalize_rows(rows);
  const VectorXd a = n.unit.row(0).transpose();
  const VectorXd p = n.unit.row(1).transpose();
  const VectorXd q = n.unit.row(2).transpose();
  const double d_pos = (a - p).norm();
  const double d_neg = (a - q).norm();
  const double raw = d_pos - d_neg + margin;

  TripletResult r;
  r.value = std::max(0.0, raw);
  MatrixXd grad_unit = MatrixXd::Zero(3, anchor.size());
  if (raw > 0) {
    // Subgradient 0 for a coincident pair.
    if (d_pos > 0) {
      const VectorXd g = (a - p) / d_pos;
      grad_unit.row(0) += g.transpose();
      grad_unit.row(1) -= g.transpose();
    }
    if (d_neg > 0) {
      const VectorXd g = (a - q) / d_neg;
      grad_unit.row(0) -= g.transpose();
      grad_unit.row(2) += g.transpose();
    }
  }
  const MatrixXd grad = normalize_rows_backward(n, grad_unit);
  r.grad_anchor = grad.row(0).transpose();
  r.grad_positive = grad.row(1).transpose();
  r.grad_negative = grad.row(2).transpose();
  return r;
}

LossResult triplet_batch(const MatrixXd& text, const MatrixXd& objects,
                         const std::vector<int>& negatives, double margin) {
  if (text.rows() != objects.rows() ||
      static_cast<Index>(negatives.size()) != text.rows()) {
    throw ShapeError("triplet_batch: batch size mismatch");
  }
  LossResult r;
  r.grad_a = MatrixXd::Zero(text.rows(), text.cols());
  r.grad_b = MatrixXd::Zero(objects.rows(), objects.cols());
  double count = 0;
  for (Index i = 0; i < text.rows(); ++i) {
    if (negatives[static_cast<std::size_t>(i)] >= 0) count += 1;
  }
  if (count == 0) return r;
  for (Index i = 0; i < text.rows(); ++i) {
    const int neg = negatives[static_cast<std::size_t>(i)];
    if (neg < 0) continue;
    if (neg >= objects.rows()) throw InvalidArgument("triplet_batch: bad index");
    const TripletResult t =
        triplet_loss(text.row(i).transpose(), objects.row(i).transpose(),
                     objects.row(neg).transpose(), margin);
    r.value += t.value / count;
    r.grad_a.row(i) += t.grad_anchor.transpose() / count;
    r.grad_b.row(i) += t.grad_positive.transpose() / count;
    r.grad_b.row(neg) += t.grad_negative.transpose() / count;
  }
  return r;
}

LossResult batch_loss(const LossConfig& config, const MatrixXd& text,
                      const MatrixXd& objects, const BatchRelevance& relevance,
                      double logit_scale) {
  config.validate();
  const Index b = text.rows();
  if (objects.rows() != b) throw ShapeError("batch_loss: batch size mismatch");
  if (relevance.relevant.rows() != b || relevance.relevant.cols() != b) {
    throw ShapeError("batch_loss: relevance matrix shape mismatch");
  }

  switch (config.variant) {
    case LossVariant::kSoftClip:
      return soft_clip_loss(text, objects, logit_scale, config.symmetric_clip);
    case LossVariant::kTriplet:
      return triplet_batch(text, objects, relevance.negatives, config.margin);
    case LossVariant::kInfoNceMulti:
    case LossVariant::kNtXent:
      break;
  }

  // Stack [text; objects]; cross-modal positives from relevance, plus
  // duplicate draws of the same model.
  PositiveSets positives(static_cast<std::size_t>(2 * b));
  for (Index i = 0; i < b; ++i) {
    for (Index j = 0; j < b; ++j) {
      if (relevance.relevant(i, j)) {
        positives[static_cast<std::size_t>(i)].push_back(static_cast<int>(b + j));
        positives[static_cast<std::size_t>(b + j)].push_back(static_cast<int>(i));
      }
    }
  }
  if (!relevance.object_group.empty()) {
    for (Index j = 0; j < b; ++j) {
      for (Index k = 0; k < b; ++k) {
        if (j != k && relevance.object_group[static_cast<std::size_t>(j)] ==
                          relevance.object_group[static_cast<std::size_t>(k)]) {
          positives[static_cast<std::size_t>(b + j)].push_back(
              static_cast<int>(b + k));
        }
      }
    }
  }
  MatrixXd z(2 * b, text.cols());
  z << text, objects;
  LossResult stacked = config.variant == LossVariant::kNtXent
                           ? nt_xent(z, positives, config.temperature)
                           : info_nce_stacked(z, positives, config.temperature);
  LossResult r;
  r.value = stacked.value;
  r.grad_a = stacked.grad_a.topRows(b);
  r.grad_b = stacked.grad_a.bottomRows(b);
  return r;
}

}  // namespace ringret

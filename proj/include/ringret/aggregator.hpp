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

#ifndef RINGRET_AGGREGATOR_HPP_
#define RINGRET_AGGREGATOR_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ringret/random.hpp"

namespace ringret {

// flat: every ring view is a token.
// hierarchical: views are encoded within each ring, ring summaries are then
//   encoded across rings.
// mean_pool: no transformer; view features are averaged.
enum class AggregatorMode { kFlat, kHierarchical, kMeanPool };

AggregatorMode parse_aggregator_mode(std::string_view name);
const char* aggregator_mode_name(AggregatorMode mode);

struct AggregatorConfig {
  int input_dim = 256;  // per-view feature size
  int text_dim = 256;   // raw text feature size
  int model_dim = 256;
  int heads = 4;
  int layers = 2;
  int joint_dim = 128;
  int tokens = 84;  // rings * views per ring
  int rings = 7;
  double dropout = 0.1;
  AggregatorMode mode = AggregatorMode::kFlat;

  int views_per_ring() const { return tokens / rings; }
  int object_head_input() const {
    return mode == AggregatorMode::kMeanPool ? input_dim : model_dim;
  }
  void validate() const;
  bool operator==(const AggregatorConfig&) const = default;
};

// Pre-norm transformer encoder block. Weight matrices are (out x in).
struct EncoderBlock {
  Eigen::VectorXd ln1_gain, ln1_bias;
  Eigen::MatrixXd w_query, w_key, w_value, w_out;
  Eigen::VectorXd b_query, b_key, b_value, b_out;
  Eigen::VectorXd ln2_gain, ln2_bias;
  Eigen::MatrixXd w_ff1;  // 4d x d
  Eigen::VectorXd b_ff1;
  Eigen::MatrixXd w_ff2;  // d x 4d
  Eigen::VectorXd b_ff2;
};

// Two-layer projection into the joint space:
//   h = W1 x + b1;  out = h + W2 dropout(gelu(h)) + b2
struct ProjectionHead {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;
};

struct TensorRef {
  std::string name;
  double* data;
  Eigen::Index size;
};
struct ConstTensorRef {
  std::string name;
  const double* data;
  Eigen::Index size;
};

struct AggregatorParams {
  AggregatorConfig config;
  Eigen::MatrixXd input_proj;  // model_dim x input_dim
  Eigen::VectorXd input_bias;
  Eigen::MatrixXd position;    // tokens x model_dim
  std::vector<EncoderBlock> blocks;        // flat; per-ring in hierarchical
  Eigen::MatrixXd ring_position;           // rings x model_dim (hierarchical)
  std::vector<EncoderBlock> cross_blocks;  // hierarchical only
  ProjectionHead object_head;
  ProjectionHead text_head;
  Eigen::VectorXd log_logit_scale;  // size 1

  // Logit scale c = min(exp(log_logit_scale), 100).
  double logit_scale() const;

  // Every trainable tensor in declaration order.
  std::vector<TensorRef> tensors();
  std::vector<ConstTensorRef> tensors() const;

  // Same shapes, all zeros.
  AggregatorParams zeros_like() const;
  Eigen::Index parameter_count() const;
  bool all_finite() const;
};

inline constexpr double kMaxLogitScale = 100.0;

// Glorot-uniform weights, N(0, 0.02^2) position embeddings, unit layer-norm
// gains, zero biases, c = 1/0.07. Deterministic per seed.
AggregatorParams init_params(const AggregatorConfig& config, std::uint64_t seed);

// Sets both heads to h = x, out = h (needs matching input/joint sizes).
void set_identity_heads(AggregatorParams& params);

struct BlockTrace {
  Eigen::MatrixXd input;
  Eigen::MatrixXd xhat1, h1, q, k, v;
  Eigen::VectorXd inv_std1;
  std::vector<Eigen::MatrixXd> attention;  // per head, tokens x tokens
  Eigen::MatrixXd context;                 // concatenated head outputs
  Eigen::MatrixXd x2, xhat2, h2, f1, g;
  Eigen::VectorXd inv_std2;
};

struct HeadTrace {
  Eigen::VectorXd input, h, g, mask, out, output;
  double out_norm = 0;
};

struct ViewsTrace {
  Eigen::MatrixXd input;
  std::vector<BlockTrace> blocks;                   // flat
  std::vector<std::vector<BlockTrace>> ring_blocks; // hierarchical, per ring
  std::vector<BlockTrace> cross_blocks;             // hierarchical
  Eigen::VectorXd pooled;
  HeadTrace head;
};

struct TextTrace {
  HeadTrace head;
};

// Joint-space embedding of one model's view features (tokens x input_dim).
// Dropout in the head is applied only when `train` is true and draws from
// `rng`. Output is L2-normalized (zero stays zero).
ViewsTrace trace_views(const AggregatorParams& params,
                       const Eigen::MatrixXd& views, bool train, Rng* rng);
Eigen::VectorXd forward_views(const AggregatorParams& params,
                              const Eigen::MatrixXd& views, bool train = false,
                              Rng* rng = nullptr);

// Object head applied to one pooled feature (size object_head_input()), in
// eval mode. Used to score single views in mean_pool mode.
Eigen::VectorXd forward_object_head(const AggregatorParams& params,
                                    const Eigen::VectorXd& pooled);

TextTrace trace_text(const AggregatorParams& params,
                     const Eigen::VectorXd& text_feature, bool train, Rng* rng);
Eigen::VectorXd forward_text(const AggregatorParams& params,
                             const Eigen::VectorXd& text_feature,
                             bool train = false, Rng* rng = nullptr);

// Accumulate d loss / d params into `grads` given d loss / d output.
void backward_views(const AggregatorParams& params, const ViewsTrace& trace,
                    const Eigen::VectorXd& grad_output, AggregatorParams& grads);
void backward_text(const AggregatorParams& params, const TextTrace& trace,
                   const Eigen::VectorXd& grad_output, AggregatorParams& grads);

// Gradients for a whole batch: one row of `grad_objects` per object trace,
// one row of `grad_texts` per text trace, plus d loss / d c.
struct BatchTrace {
  std::vector<ViewsTrace> objects;
  std::vector<TextTrace> texts;
};
AggregatorParams backward(const AggregatorParams& params,
                          const BatchTrace& batch,
                          const Eigen::MatrixXd& grad_objects,
                          const Eigen::MatrixXd& grad_texts,
                          double grad_logit_scale);

// Dropout mask for `n` units: 0 with probability `rate`, else 1/(1-rate).
Eigen::VectorXd dropout_mask(Eigen::Index n, double rate, Rng& rng);

}  // namespace ringret

#endif  // RINGRET_AGGREGATOR_HPP_

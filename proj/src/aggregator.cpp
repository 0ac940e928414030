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

#include "ringret/aggregator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ringret/errors.hpp"

namespace ringret {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kLayerNormEps = 1e-5;

// Visits every tensor of `p` (const or not) in declaration order.
template <typename Block, typename F>
void visit_block(const std::string& prefix, Block& b, F&& f) {
  f(prefix + ".ln1_gain", b.ln1_gain);
  f(prefix + ".ln1_bias", b.ln1_bias);
  f(prefix + ".w_query", b.w_query);
  f(prefix + ".b_query", b.b_query);
  f(prefix + ".w_key", b.w_key);
  f(prefix + ".b_key", b.b_key);
  f(prefix + ".w_value", b.w_value);
  f(prefix + ".b_value", b.b_value);
  f(prefix + ".w_out", b.w_out);
  f(prefix + ".b_out", b.b_out);
  f(prefix + ".ln2_gain", b.ln2_gain);
  f(prefix + ".ln2_bias", b.ln2_bias);
  f(prefix + ".w_ff1", b.w_ff1);
  f(prefix + ".b_ff1", b.b_ff1);
  f(prefix + ".w_ff2", b.w_ff2);
  f(prefix + ".b_ff2", b.b_ff2);
}

template <typename Head, typename F>
void visit_head(const std::string& prefix, Head& h, F&& f) {
  f(prefix + ".w1", h.w1);
  f(prefix + ".b1", h.b1);
  f(prefix + ".w2", h.w2);
  f(prefix + ".b2", h.b2);
}

template <typename Params, typename F>
void visit_params(Params& p, F&& f) {
  f(std::string("input_proj"), p.input_proj);
  f(std::string("input_bias"), p.input_bias);
  f(std::string("position"), p.position);
  for (std::size_t l = 0; l < p.blocks.size(); ++l) {
    visit_block("blocks." + std::to_string(l), p.blocks[l], f);
  }
  f(std::string("ring_position"), p.ring_position);
  for (std::size_t l = 0; l < p.cross_blocks.size(); ++l) {
    visit_block("cross_blocks." + std::to_string(l), p.cross_blocks[l], f);
  }
  visit_head("object_head", p.object_head, f);
  visit_head("text_head", p.text_head, f);
  f(std::string("log_logit_scale"), p.log_logit_scale);
}

MatrixXd glorot(Index out, Index in, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
  MatrixXd w(out, in);
  for (Index j = 0; j < w.cols(); ++j) {
    for (Index i = 0; i < w.rows(); ++i) w(i, j) = uniform(rng, -limit, limit);
  }
  return w;
}

MatrixXd normal_matrix(Index rows, Index cols, double stddev, Rng& rng) {
  MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = stddev * standard_normal(rng);
  }
  return m;
}

EncoderBlock init_block(Index d, Rng& rng) {
  EncoderBlock b;
  b.ln1_gain = VectorXd::Ones(d);
  b.ln1_bias = VectorXd::Zero(d);
  b.w_query = glorot(d, d, rng);
  b.b_query = VectorXd::Zero(d);
  b.w_key = glorot(d, d, rng);
  b.b_key = VectorXd::Zero(d);
  b.w_value = glorot(d, d, rng);
  b.b_value = VectorXd::Zero(d);
  b.w_out = glorot(d, d, rng);
  b.b_out = VectorXd::Zero(d);
  b.ln2_gain = VectorXd::Ones(d);
  b.ln2_bias = VectorXd::Zero(d);
  b.w_ff1 = glorot(4 * d, d, rng);
  b.b_ff1 = VectorXd::Zero(4 * d);
  b.w_ff2 = glorot(d, 4 * d, rng);
  b.b_ff2 = VectorXd::Zero(d);
  return b;
}

ProjectionHead init_head(Index in, Index out, Rng& rng) {
  ProjectionHead h;
  h.w1 = glorot(out, in, rng);
  h.b1 = VectorXd::Zero(out);
  h.w2 = glorot(out, out, rng);
  h.b2 = VectorXd::Zero(out);
  return h;
}

double gelu(double x) {
  return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2));
}

double gelu_grad(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi);
  return cdf + x * pdf;
}

// Adds `bias` to every row.
MatrixXd affine(const MatrixXd& x, const MatrixXd& w, const VectorXd& b) {
  MatrixXd y = x * w.transpose();
  y.rowwise() += b.transpose();
  return y;
}

MatrixXd layer_norm(const MatrixXd& x, const VectorXd& gain,
                    const VectorXd& bias, MatrixXd& xhat, VectorXd& inv_std) {
  const Index n = x.rows();
  const double width = static_cast<double>(x.cols());
  xhat.resize(n, x.cols());
  inv_std.resize(n);
  for (Index r = 0; r < n; ++r) {
    const double mean = x.row(r).sum() / width;
    const auto centered = (x.row(r).array() - mean).matrix();
    const double var = centered.squaredNorm() / width;
    inv_std[r] = 1.0 / std::sqrt(var + kLayerNormEps);
    xhat.row(r) = centered * inv_std[r];
  }
  MatrixXd y = xhat.array().rowwise() * gain.transpose().array();
  y.rowwise() += bias.transpose();
  return y;
}

MatrixXd layer_norm_backward(const MatrixXd& grad_y, const MatrixXd& xhat,
                             const VectorXd& inv_std, const VectorXd& gain,
                             VectorXd& grad_gain, VectorXd& grad_bias) {
  grad_gain += (grad_y.array() * xhat.array()).colwise().sum().transpose().matrix();
  grad_bias += grad_y.colwise().sum().transpose();
  const MatrixXd grad_xhat = grad_y.array().rowwise() * gain.transpose().array();
  const double width = static_cast<double>(xhat.cols());
  MatrixXd grad_x(grad_y.rows(), grad_y.cols());
  for (Index r = 0; r < grad_y.rows(); ++r) {
    const double mean_g = grad_xhat.row(r).sum() / width;
    const double mean_gx = grad_xhat.row(r).dot(xhat.row(r)) / width;
    grad_x.row(r) = inv_std[r] * (grad_xhat.row(r).array() - mean_g -
                                  xhat.row(r).array() * mean_gx)
                                     .matrix();
  }
  return grad_x;
}

MatrixXd row_softmax(const MatrixXd& s) {
  MatrixXd a(s.rows(), s.cols());
  for (Index r = 0; r < s.rows(); ++r) {
    const double m = s.row(r).maxCoeff();
    a.row(r) = (s.row(r).array() - m).exp();
    a.row(r) /= a.row(r).sum();
  }
  return a;
}

MatrixXd block_forward(const EncoderBlock& b, int heads, const MatrixXd& x,
                       BlockTrace& t) {
  const Index d = x.cols();
  const Index dh = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  t.input = x;
  t.h1 = layer_norm(x, b.ln1_gain, b.ln1_bias, t.xhat1, t.inv_std1);
  t.q = affine(t.h1, b.w_query, b.b_query);
  t.k = affine(t.h1, b.w_key, b.b_key);
  t.v = affine(t.h1, b.w_value, b.b_value);
  t.context.resize(x.rows(), d);
  t.attention.resize(static_cast<std::size_t>(heads));
  for (int h = 0; h < heads; ++h) {
    const auto qh = t.q.middleCols(h * dh, dh);
    const auto kh = t.k.middleCols(h * dh, dh);
    const auto vh = t.v.middleCols(h * dh, dh);
    t.attention[static_cast<std::size_t>(h)] =
        row_softmax(scale * (qh * kh.transpose()));
    t.context.middleCols(h * dh, dh) = t.attention[static_cast<std::size_t>(h)] * vh;
  }
  t.x2 = x + affine(t.context, b.w_out, b.b_out);
  t.h2 = layer_norm(t.x2, b.ln2_gain, b.ln2_bias, t.xhat2, t.inv_std2);
  t.f1 = affine(t.h2, b.w_ff1, b.b_ff1);
  t.g = t.f1.unaryExpr([](double v) { return gelu(v); });
  return t.x2 + affine(t.g, b.w_ff2, b.b_ff2);
}

MatrixXd block_backward(const EncoderBlock& b, int heads, const BlockTrace& t,
                        const MatrixXd& grad_y, EncoderBlock& g) {
  const Index d = t.input.cols();
  const Index dh = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  // Feed-forward branch.
  g.w_ff2 += grad_y.transpose() * t.g;
  g.b_ff2 += grad_y.colwise().sum().transpose();
  const MatrixXd grad_g = grad_y * b.w_ff2;
  const MatrixXd grad_f1 =
      grad_g.array() * t.f1.unaryExpr([](double v) { return gelu_grad(v); }).array();
  g.w_ff1 += grad_f1.transpose() * t.h2;
  g.b_ff1 += grad_f1.colwise().sum().transpose();
  const MatrixXd grad_h2 = grad_f1 * b.w_ff1;
  MatrixXd grad_x2 = grad_y + layer_norm_backward(grad_h2, t.xhat2, t.inv_std2,
                                                  b.ln2_gain, g.ln2_gain,
                                                  g.ln2_bias);

  // Attention branch.
  g.w_out += grad_x2.transpose() * t.context;
  g.b_out += grad_x2.colwise().sum().transpose();
  const MatrixXd grad_context = grad_x2 * b.w_out;
  MatrixXd grad_q(t.q.rows(), d), grad_k(t.k.rows(), d), grad_v(t.v.rows(), d);
  for (int h = 0; h < heads; ++h) {
    const MatrixXd& a = t.attention[static_cast<std::size_t>(h)];
    const auto qh = t.q.middleCols(h * dh, dh);
    const auto kh = t.k.middleCols(h * dh, dh);
    const auto vh = t.v.middleCols(h * dh, dh);
    const auto grad_ctx_h = grad_context.middleCols(h * dh, dh);
    const MatrixXd grad_a = grad_ctx_h * vh.transpose();
    grad_v.middleCols(h * dh, dh) = a.transpose() * grad_ctx_h;
    MatrixXd grad_s(a.rows(), a.cols());
    for (Index r = 0; r < a.rows(); ++r) {
      const double inner = a.row(r).dot(grad_a.row(r));
      grad_s.row(r) = a.row(r).array() * (grad_a.row(r).array() - inner);
    }
    grad_s *= scale;
    grad_q.middleCols(h * dh, dh) = grad_s * kh;
    grad_k.middleCols(h * dh, dh) = grad_s.transpose() * qh;
  }
  g.w_query += grad_q.transpose() * t.h1;
  g.b_query += grad_q.colwise().sum().transpose();
  g.w_key += grad_k.transpose() * t.h1;
  g.b_key += grad_k.colwise().sum().transpose();
  g.w_value += grad_v.transpose() * t.h1;
  g.b_value += grad_v.colwise().sum().transpose();
  const MatrixXd grad_h1 =
      grad_q * b.w_query + grad_k * b.w_key + grad_v * b.w_value;
  return grad_x2 + layer_norm_backward(grad_h1, t.xhat1, t.inv_std1, b.ln1_gain,
                                       g.ln1_gain, g.ln1_bias);
}

MatrixXd run_blocks(const std::vector<EncoderBlock>& blocks, int heads,
                    MatrixXd x, std::vector<BlockTrace>& traces) {
  traces.resize(blocks.size());
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    x = block_forward(blocks[l], heads, x, traces[l]);
  }
  return x;
}

MatrixXd run_blocks_backward(const std::vector<EncoderBlock>& blocks, int heads,
                             const std::vector<BlockTrace>& traces,
                             MatrixXd grad, std::vector<EncoderBlock>& grads) {
  for (std::size_t l = blocks.size(); l-- > 0;) {
    grad = block_backward(blocks[l], heads, traces[l], grad, grads[l]);
  }
  return grad;
}

HeadTrace head_forward(const ProjectionHead& head, const VectorXd& x,
                       double rate, bool train, Rng* rng) {
  if (x.size() != head.w1.cols()) {
    throw ShapeError("projection head expects input of size " +
                     std::to_string(head.w1.cols()) + ", got " +
                     std::to_string(x.size()));
  }
  HeadTrace t;
  t.input = x;
  t.h = head.w1 * x + head.b1;
  t.g = t.h.unaryExpr([](double v) { return gelu(v); });
  if (train && rate > 0) {
    if (rng == nullptr) throw InvalidArgument("train mode needs an rng");
    t.mask = dropout_mask(t.h.size(), rate, *rng);
  } else {
    t.mask = VectorXd::Ones(t.h.size());
  }
  t.out = t.h + head.w2 * t.g.cwiseProduct(t.mask) + head.b2;
  t.out_norm = t.out.norm();
  t.output = t.out_norm > 0 ? VectorXd(t.out / t.out_norm)
                            : VectorXd(VectorXd::Zero(t.out.size()));
  return t;
}

// Returns d loss / d head input.
VectorXd head_backward(const ProjectionHead& head, const HeadTrace& t,
                       const VectorXd& grad_output, ProjectionHead& g) {
  VectorXd grad_out = VectorXd::Zero(t.out.size());
  if (t.out_norm > 0) {
    grad_out = (grad_output - t.output * t.output.dot(grad_output)) / t.out_norm;
  }
  g.b2 += grad_out;
  g.w2 += grad_out * t.g.cwiseProduct(t.mask).transpose();
  const VectorXd grad_g = (head.w2.transpose() * grad_out).cwiseProduct(t.mask);
  const VectorXd grad_h =
      grad_out +
      grad_g.cwiseProduct(t.h.unaryExpr([](double v) { return gelu_grad(v); }));
  g.b1 += grad_h;
  g.w1 += grad_h * t.input.transpose();
  return head.w1.transpose() * grad_h;
}

}  // namespace

AggregatorMode parse_aggregator_mode(std::string_view name) {
  if (name == "flat") return AggregatorMode::kFlat;
  if (name == "hierarchical") return AggregatorMode::kHierarchical;
  if (name == "mean_pool") return AggregatorMode::kMeanPool;
  throw InvalidArgument("unknown aggregator mode '" + std::string(name) + "'");
}

const char* aggregator_mode_name(AggregatorMode mode) {
  switch (mode) {
    case AggregatorMode::kFlat:
      return "flat";
    case AggregatorMode::kHierarchical:
      return "hierarchical";
    case AggregatorMode::kMeanPool:
      return "mean_pool";
  }
  return "?";
}

void AggregatorConfig::validate() const {
  if (input_dim < 1 || text_dim < 1) {
    throw InvalidArgument("aggregator: feature sizes must be >= 1");
  }
  if (model_dim < 1 || heads < 1 || model_dim % heads != 0) {
    throw InvalidArgument("aggregator: model_dim must be a positive multiple of heads");
  }
  if (layers < 0) throw InvalidArgument("aggregator: layers must be >= 0");
  if (joint_dim < 1) throw InvalidArgument("aggregator: joint_dim must be >= 1");
  if (tokens < 1) throw InvalidArgument("aggregator: tokens must be >= 1");
  if (rings < 1 || tokens % rings != 0) {
    throw InvalidArgument("aggregator: tokens must be a multiple of rings");
  }
  if (!(dropout >= 0 && dropout < 1)) {
    throw InvalidArgument("aggregator: dropout must be in [0, 1)");
  }
}

double AggregatorParams::logit_scale() const {
  return std::min(std::exp(log_logit_scale[0]), kMaxLogitScale);
}

std::vector<TensorRef> AggregatorParams::tensors() {
  std::vector<TensorRef> out;
  visit_params(*this, [&](const std::string& name, auto& t) {
    out.push_back({name, t.data(), t.size()});
  });
  return out;
}

std::vector<ConstTensorRef> AggregatorParams::tensors() const {
  std::vector<ConstTensorRef> out;
  visit_params(*this, [&](const std::string& name, const auto& t) {
    out.push_back({name, t.data(), t.size()});
  });
  return out;
}

AggregatorParams AggregatorParams::zeros_like() const {
  AggregatorParams z = *this;
  visit_params(z, [](const std::string&, auto& t) { t.setZero(); });
  return z;
}

Eigen::Index AggregatorParams::parameter_count() const {
  Index n = 0;
  for (const auto& t : tensors()) n += t.size;
  return n;
}

bool AggregatorParams::all_finite() const {
  bool ok = true;
  visit_params(*this, [&](const std::string&, const auto& t) {
    ok = ok && t.allFinite();
  });
  return ok;
}

AggregatorParams init_params(const AggregatorConfig& config,
                             std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  AggregatorParams p;
  p.config = config;
  const Index d = config.model_dim;
  if (config.mode != AggregatorMode::kMeanPool) {
    p.input_proj = glorot(d, config.input_dim, rng);
    p.input_bias = VectorXd::Zero(d);
    p.position = normal_matrix(config.tokens, d, 0.02, rng);
    for (int l = 0; l < config.layers; ++l) p.blocks.push_back(init_block(d, rng));
  } else {
    p.input_proj.resize(0, 0);
    p.input_bias.resize(0);
    p.position.resize(0, 0);
  }
  if (config.mode == AggregatorMode::kHierarchical) {
    p.ring_position = normal_matrix(config.rings, d, 0.02, rng);
    for (int l = 0; l < config.layers; ++l) {
      p.cross_blocks.push_back(init_block(d, rng));
    }
  } else {
    p.ring_position.resize(0, 0);
  }
  p.object_head = init_head(config.object_head_input(), config.joint_dim, rng);
  p.text_head = init_head(config.text_dim, config.joint_dim, rng);
  p.log_logit_scale = VectorXd::Constant(1, std::log(1.0 / 0.07));
  return p;
}

void set_identity_heads(AggregatorParams& params) {
  for (ProjectionHead* h : {&params.object_head, &params.text_head}) {
    if (h->w1.rows() != h->w1.cols()) {
      throw ShapeError("set_identity_heads: head is not square");
    }
    h->w1.setIdentity();
    h->b1.setZero();
    h->w2.setZero();
    h->b2.setZero();
  }
}

Eigen::VectorXd dropout_mask(Eigen::Index n, double rate, Rng& rng) {
  VectorXd mask(n);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (Index i = 0; i < n; ++i) {
    mask[i] = uniform01(rng) < rate ? 0.0 : keep_scale;
  }
  return mask;
}

ViewsTrace trace_views(const AggregatorParams& params, const MatrixXd& views,
                       bool train, Rng* rng) {
  const AggregatorConfig& c = params.config;
  if (views.rows() != c.tokens || views.cols() != c.input_dim) {
    throw ShapeError("forward_views: expected " + std::to_string(c.tokens) +
                     "x" + std::to_string(c.input_dim) + " view features, got " +
                     std::to_string(views.rows()) + "x" +
                     std::to_string(views.cols()));
  }
  ViewsTrace t;
  t.input = views;
  switch (c.mode) {
    case AggregatorMode::kMeanPool:
      t.pooled = views.colwise().mean().transpose();
      break;
    case AggregatorMode::kFlat: {
      const MatrixXd embedded =
          affine(views, params.input_proj, params.input_bias) + params.position;
      const MatrixXd out = run_blocks(params.blocks, c.heads, embedded, t.blocks);
      t.pooled = out.colwise().mean().transpose();
      break;
    }
    case AggregatorMode::kHierarchical: {
      const MatrixXd embedded =
          affine(views, params.input_proj, params.input_bias) + params.position;
      const int per_ring = c.views_per_ring();
      MatrixXd rings(c.rings, c.model_dim);
      t.ring_blocks.resize(static_cast<std::size_t>(c.rings));
      for (int r = 0; r < c.rings; ++r) {
        const MatrixXd out =
            run_blocks(params.blocks, c.heads,
                       embedded.middleRows(r * per_ring, per_ring),
                       t.ring_blocks[static_cast<std::size_t>(r)]);
        rings.row(r) = out.colwise().mean();
      }
      const MatrixXd out = run_blocks(params.cross_blocks, c.heads,
                                      rings + params.ring_position,
                                      t.cross_blocks);
      t.pooled = out.colwise().mean().transpose();
      break;
    }
  }
  t.head = head_forward(params.object_head, t.pooled, c.dropout, train, rng);
  return t;
}

VectorXd forward_views(const AggregatorParams& params, const MatrixXd& views,
                       bool train, Rng* rng) {
  return trace_views(params, views, train, rng).head.output;
}

VectorXd forward_object_head(const AggregatorParams& params,
                             const VectorXd& pooled) {
  return head_forward(params.object_head, pooled, 0, false, nullptr).output;
}

TextTrace trace_text(const AggregatorParams& params,
                     const VectorXd& text_feature, bool train, Rng* rng) {
  TextTrace t;
  t.head = head_forward(params.text_head, text_feature, params.config.dropout,
                        train, rng);
  return t;
}

VectorXd forward_text(const AggregatorParams& params,
                      const VectorXd& text_feature, bool train, Rng* rng) {
  return trace_text(params, text_feature, train, rng).head.output;
}

void backward_views(const AggregatorParams& params, const ViewsTrace& t,
                    const VectorXd& grad_output, AggregatorParams& grads) {
  const AggregatorConfig& c = params.config;
  const VectorXd grad_pooled =
      head_backward(params.object_head, t.head, grad_output, grads.object_head);
  if (c.mode == AggregatorMode::kMeanPool) return;

  MatrixXd grad_embedded;
  if (c.mode == AggregatorMode::kFlat) {
    const MatrixXd grad_out =
        (grad_pooled / static_cast<double>(c.tokens)).transpose().replicate(c.tokens, 1);
    grad_embedded = run_blocks_backward(params.blocks, c.heads, t.blocks,
                                        grad_out, grads.blocks);
  } else {
    const MatrixXd grad_cross_out =
        (grad_pooled / static_cast<double>(c.rings)).transpose().replicate(c.rings, 1);
    const MatrixXd grad_rings = run_blocks_backward(
        params.cross_blocks, c.heads, t.cross_blocks, grad_cross_out,
        grads.cross_blocks);
    grads.ring_position += grad_rings;
    const int per_ring = c.views_per_ring();
    grad_embedded.resize(c.tokens, c.model_dim);
    for (int r = 0; r < c.rings; ++r) {
      const MatrixXd grad_out = (grad_rings.row(r) / static_cast<double>(per_ring))
                                    .replicate(per_ring, 1);
      grad_embedded.middleRows(r * per_ring, per_ring) = run_blocks_backward(
          params.blocks, c.heads, t.ring_blocks[static_cast<std::size_t>(r)],
          grad_out, grads.blocks);
    }
  }
  grads.position += grad_embedded;
  grads.input_proj += grad_embedded.transpose() * t.input;
  grads.input_bias += grad_embedded.colwise().sum().transpose();
}

void backward_text(const AggregatorParams& params, const TextTrace& t,
                   const VectorXd& grad_output, AggregatorParams& grads) {
  head_backward(params.text_head, t.head, grad_output, grads.text_head);
}

AggregatorParams backward(const AggregatorParams& params,
                          const BatchTrace& batch, const MatrixXd& grad_objects,
                          const MatrixXd& grad_texts, double grad_logit_scale) {
  if (grad_objects.rows() != static_cast<Index>(batch.objects.size()) ||
      grad_texts.rows() != static_cast<Index>(batch.texts.size())) {
    throw ShapeError("backward: gradient rows do not match the batch");
  }
  AggregatorParams grads = params.zeros_like();
  for (std::size_t i = 0; i < batch.objects.size(); ++i) {
    backward_views(params, batch.objects[i],
                   grad_objects.row(static_cast<Index>(i)).transpose(), grads);
  }
  for (std::size_t i = 0; i < batch.texts.size(); ++i) {
    backward_text(params, batch.texts[i],
                  grad_texts.row(static_cast<Index>(i)).transpose(), grads);
  }
  if (std::exp(params.log_logit_scale[0]) < kMaxLogitScale) {
    grads.log_logit_scale[0] += grad_logit_scale * params.logit_scale();
  }
  return grads;
}

}  // namespace ringret

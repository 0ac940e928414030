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

#include "ringret/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "ringret/checkpoint.hpp"
#include "ringret/errors.hpp"
#include "ringret/manifest.hpp"
#include "ringret/random.hpp"

namespace ringret {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;

// Stream ids for derive_rng.
constexpr std::uint64_t kFoldSplitStream = 0;
constexpr std::uint64_t kInitStream = 1000;
constexpr std::uint64_t kTrainStream = 2000;

void check_data(const TrainingData& data, const AggregatorConfig& model) {
  const auto n_models = static_cast<int>(data.model_views.size());
  if (n_models == 0) throw InvalidArgument("train: no models");
  if (data.text.rows() != static_cast<Index>(data.relevant.size())) {
    throw ShapeError("train: text rows and relevance lists differ in count");
  }
  if (data.text.cols() != model.text_dim) {
    throw ShapeError(fmt::format("train: text features have {} columns, config "
                                 "expects {}",
                                 data.text.cols(), model.text_dim));
  }
  for (std::size_t q = 0; q < data.relevant.size(); ++q) {
    if (data.relevant[q].empty()) {
      throw InvalidArgument(fmt::format("train: query {} has no relevant model", q));
    }
    for (int m : data.relevant[q]) {
      if (m < 0 || m >= n_models) {
        throw InvalidArgument(fmt::format("train: query {} refers to model {}", q, m));
      }
    }
  }
}

struct BatchOutput {
  double loss = 0;
  bool skipped = false;
};

// Builds the batch relevance for text rows paired with `models`.
BatchRelevance make_relevance(const TrainingData& data,
                              const std::vector<int>& queries,
                              const std::vector<int>& models, Rng* rng) {
  const auto b = static_cast<Index>(queries.size());
  BatchRelevance rel;
  rel.relevant.resize(b, b);
  for (Index i = 0; i < b; ++i) {
    const auto& r = data.relevant[static_cast<std::size_t>(queries[static_cast<std::size_t>(i)])];
    for (Index j = 0; j < b; ++j) {
      rel.relevant(i, j) =
          std::find(r.begin(), r.end(), models[static_cast<std::size_t>(j)]) != r.end();
    }
  }
  rel.object_group = models;
  rel.negatives.assign(static_cast<std::size_t>(b), -1);
  for (Index i = 0; i < b; ++i) {
    std::vector<int> candidates;
    for (Index j = 0; j < b; ++j) {
      if (!rel.relevant(i, j)) candidates.push_back(static_cast<int>(j));
    }
    if (candidates.empty()) continue;
    const std::size_t pick =
        rng ? uniform_index(*rng, candidates.size()) : 0;
    rel.negatives[static_cast<std::size_t>(i)] = candidates[pick];
  }
  return rel;
}

// Forward + loss (+ backward and update when `state` is set).
BatchOutput run_batch(AggregatorParams& params, const TrainingData& data,
                      const std::vector<int>& queries,
                      const std::vector<int>& models, const LossConfig& loss,
                      const TrainConfig& config, OptimState* state, double lr,
                      Rng* rng) {
  const bool train = state != nullptr;
  const auto b = static_cast<Index>(queries.size());
  const Index p = params.config.joint_dim;
  BatchTrace trace;
  MatrixXd text(b, p), objects(b, p);
  for (Index i = 0; i < b; ++i) {
    trace.texts.push_back(trace_text(
        params, data.text.row(queries[static_cast<std::size_t>(i)]).transpose(),
        train, rng));
    text.row(i) = trace.texts.back().head.output.transpose();
  }
  for (Index i = 0; i < b; ++i) {
    trace.objects.push_back(trace_views(
        params, data.model_views[static_cast<std::size_t>(models[static_cast<std::size_t>(i)])],
        train, rng));
    objects.row(i) = trace.objects.back().head.output.transpose();
  }
  const BatchRelevance rel = make_relevance(data, queries, models, rng);
  LossResult result;
  try {
    result = batch_loss(loss, text, objects, rel, params.logit_scale());
  } catch (const InvalidArgument&) {
    // Every other element is a positive of some anchor; no contrast to learn.
    if (loss.variant != LossVariant::kNtXent) throw;
    return {0, true};
  }
  if (!std::isfinite(result.value)) {
    throw NumericError("train: loss is not finite");
  }
  if (train) {
    const AggregatorParams grads = backward(params, trace, result.grad_b,
                                            result.grad_a, result.grad_logit_scale);
    adamw_step(params, grads, *state, config, lr);
  }
  return {result.value, false};
}

}  // namespace

void TrainConfig::validate() const {
  if (batch_size < 2) throw InvalidArgument("batch_size must be >= 2");
  if (epochs < 0) throw InvalidArgument("epochs must be >= 0");
  if (!(lr >= 0)) throw InvalidArgument("lr must be >= 0");
  if (!(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1)) {
    throw InvalidArgument("betas must be in [0, 1)");
  }
  if (!(eps > 0)) throw InvalidArgument("eps must be > 0");
  if (!(weight_decay >= 0)) throw InvalidArgument("weight_decay must be >= 0");
  if (!(gamma > 0 && gamma <= 1)) throw InvalidArgument("gamma must be in (0, 1]");
  for (std::size_t i = 1; i < milestones.size(); ++i) {
    if (milestones[i] <= milestones[i - 1]) {
      throw InvalidArgument("milestones must be strictly increasing");
    }
  }
  if (patience < 0) throw InvalidArgument("patience must be >= 0");
  if (k_folds < 1) throw InvalidArgument("k_folds must be >= 1");
  if (max_folds < 0) throw InvalidArgument("max_folds must be >= 0");
}

OptimState OptimState::zeros_like(const AggregatorParams& params) {
  return {params.zeros_like(), params.zeros_like(), 0};
}

double lr_at_epoch(const TrainConfig& config, int epoch) {
  if (epoch < 0) throw InvalidArgument("lr_at_epoch: epoch must be >= 0");
  double lr = config.lr;
  for (int m : config.milestones) {
    if (m <= epoch) lr *= config.gamma;
  }
  return lr;
}

void adamw_step(AggregatorParams& params, const AggregatorParams& grads,
                OptimState& state, const TrainConfig& config, double lr) {
  auto p = params.tensors();
  const auto g = grads.tensors();
  auto m = state.m.tensors();
  auto v = state.v.tensors();
  if (g.size() != p.size() || m.size() != p.size() || v.size() != p.size()) {
    throw ShapeError("adamw_step: tensor lists differ");
  }
  for (std::size_t t = 0; t < p.size(); ++t) {
    if (g[t].size != p[t].size || m[t].size != p[t].size ||
        v[t].size != p[t].size) {
      throw ShapeError("adamw_step: shape mismatch in " + p[t].name);
    }
    for (Index i = 0; i < g[t].size; ++i) {
      if (!std::isfinite(g[t].data[i])) {
        throw NumericError("adamw_step: non-finite gradient in " + g[t].name);
      }
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t k = 0; k < p.size(); ++k) {
    for (Index i = 0; i < p[k].size; ++i) {
      const double gi = g[k].data[i];
      double& mi = m[k].data[i];
      double& vi = v[k].data[i];
      mi = config.beta1 * mi + (1 - config.beta1) * gi;
      vi = config.beta2 * vi + (1 - config.beta2) * gi * gi;
      const double m_hat = mi / c1;
      const double v_hat = vi / c2;
      double& theta = p[k].data[i];
      theta -= lr * (m_hat / (std::sqrt(v_hat) + config.eps) +
                     config.weight_decay * theta);
    }
  }
}

std::vector<std::vector<int>> kfold_split(int n, int k, std::uint64_t seed) {
  if (k < 1) throw InvalidArgument("kfold_split: k must be >= 1");
  if (n < k) {
    throw InvalidArgument(fmt::format("kfold_split: {} items cannot fill {} folds", n, k));
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng = derive_rng(seed, kFoldSplitStream);
  shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<int>> folds(static_cast<std::size_t>(k));
  for (int i = 0; i < n; ++i) {
    folds[static_cast<std::size_t>(i % k)].push_back(order[static_cast<std::size_t>(i)]);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

TrainResult train(const TrainingData& data, const AggregatorConfig& model,
                  const LossConfig& loss, const TrainConfig& config,
                  const std::filesystem::path& out_dir) {
  config.validate();
  loss.validate();
  model.validate();
  check_data(data, model);
  const int n_queries = static_cast<int>(data.relevant.size());

  std::vector<std::vector<int>> folds;
  if (config.k_folds == 1) {
    folds.emplace_back();  // no validation queries
  } else {
    folds = kfold_split(n_queries, config.k_folds, config.seed);
  }
  const int n_run = config.max_folds == 0
                        ? static_cast<int>(folds.size())
                        : std::min<int>(config.max_folds, static_cast<int>(folds.size()));
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  TrainResult result;
  for (int fold = 0; fold < n_run; ++fold) {
    const std::vector<int>& val = folds[static_cast<std::size_t>(fold)];
    std::vector<int> train_queries;
    for (int q = 0; q < n_queries; ++q) {
      if (!std::binary_search(val.begin(), val.end(), q)) train_queries.push_back(q);
    }
    std::vector<int> val_models;
    for (int q : val) val_models.push_back(data.relevant[static_cast<std::size_t>(q)].front());

    Rng init_rng = derive_rng(config.seed, kInitStream + static_cast<std::uint64_t>(fold));
    AggregatorParams params = init_params(model, init_rng());
    OptimState state = OptimState::zeros_like(params);
    Rng rng = derive_rng(config.seed, kTrainStream + static_cast<std::uint64_t>(fold));
    const std::filesystem::path ckpt =
        out_dir.empty() ? std::filesystem::path()
                        : out_dir / fmt::format("fold{}_best.aggp", fold);

    FoldResult fr;
    fr.best = params;
    fr.best_val_loss = val.empty() ? std::numeric_limits<double>::quiet_NaN()
                                   : std::numeric_limits<double>::infinity();
    int stale = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      const double lr = lr_at_epoch(config, epoch);
      std::vector<int> order = train_queries;
      shuffle(order.begin(), order.end(), rng);
      double loss_sum = 0;
      int counted = 0;
      for (std::size_t start = 0; start < order.size();
           start += static_cast<std::size_t>(config.batch_size)) {
        const std::size_t end =
            std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
        if (end - start < 2) continue;
        std::vector<int> queries(order.begin() + static_cast<std::ptrdiff_t>(start),
                                 order.begin() + static_cast<std::ptrdiff_t>(end));
        std::vector<int> models;
        for (int q : queries) {
          const auto& r = data.relevant[static_cast<std::size_t>(q)];
          models.push_back(r[uniform_index(rng, r.size())]);
        }
        const BatchOutput out = run_batch(params, data, queries, models, loss,
                                          config, &state, lr, &rng);
        if (out.skipped) {
          ++fr.skipped_batches;
          continue;
        }
        loss_sum += out.loss * static_cast<double>(queries.size());
        counted += static_cast<int>(queries.size());
      }
      const double train_loss =
          counted > 0 ? loss_sum / counted : std::numeric_limits<double>::quiet_NaN();
      fr.epochs_run = epoch + 1;
      if (val.empty()) {
        result.log.push_back(
            {fold, epoch, train_loss, std::numeric_limits<double>::quiet_NaN(), lr});
        continue;
      }
      const BatchOutput v =
          run_batch(params, data, val, val_models, loss, config, nullptr, lr, nullptr);
      const double val_loss =
          v.skipped ? std::numeric_limits<double>::quiet_NaN() : v.loss;
      result.log.push_back({fold, epoch, train_loss, val_loss, lr});
      if (val_loss < fr.best_val_loss) {
        fr.best_val_loss = val_loss;
        fr.best_epoch = epoch;
        fr.best = params;
        stale = 0;
        if (!ckpt.empty()) save_checkpoint(params, ckpt);
      } else if (config.patience > 0 && ++stale >= config.patience) {
        break;
      }
    }
    if (val.empty() || fr.best_epoch < 0) {
      // No validation signal: keep the final weights.
      fr.best = params;
      fr.best_epoch = fr.epochs_run - 1;
      if (!ckpt.empty()) save_checkpoint(params, ckpt);
    }
    result.folds.push_back(std::move(fr));
  }
  if (!out_dir.empty()) {
    write_text_file(out_dir / "loss_log.csv", to_loss_log_csv(result.log));
  }
  return result;
}

std::string to_loss_log_csv(const std::vector<LossLogRow>& rows) {
  std::string out = "fold,epoch,train_loss,val_loss,lr\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{:.9g},{:.9g},{:.9g}\n", r.fold, r.epoch, r.train_loss,
                       r.val_loss, r.lr);
  }
  return out;
}

}  // namespace ringret

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

#ifndef RINGRET_TRAINER_HPP_
#define RINGRET_TRAINER_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ringret/aggregator.hpp"
#include "ringret/losses.hpp"

namespace ringret {

struct TrainConfig {
  int batch_size = 16;
  int epochs = 100;
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double eps = 1e-6;
  double weight_decay = 0.01;
  std::vector<int> milestones = {50, 75};
  double gamma = 0.1;
  int patience = 10;  // 0 disables early stopping
  // 1 trains a single model on every query without validation.
  int k_folds = 5;
  // Number of folds actually trained (0 = all). 1 with k_folds = 5 gives a
  // plain 80/20 split.
  int max_folds = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Adam moments mirror the parameter shapes.
struct OptimState {
  AggregatorParams m;
  AggregatorParams v;
  std::int64_t step = 0;

  static OptimState zeros_like(const AggregatorParams& params);
};

// lr * gamma^(number of milestones <= epoch).
double lr_at_epoch(const TrainConfig& config, int epoch);

// One decoupled-weight-decay Adam update. Throws NumericError naming the
// first tensor holding a non-finite gradient; nothing is modified then.
void adamw_step(AggregatorParams& params, const AggregatorParams& grads,
                OptimState& state, const TrainConfig& config, double lr);

// k disjoint folds covering 0..n-1 after a seeded shuffle. Fold sizes
// differ by at most one; each fold is sorted.
std::vector<std::vector<int>> kfold_split(int n, int k, std::uint64_t seed);

// Features consumed by the training loop.
struct TrainingData {
  std::vector<Eigen::MatrixXd> model_views;  // tokens x input_dim per model
  Eigen::MatrixXd text;                      // one row per query
  std::vector<std::vector<int>> relevant;    // query -> model indices
};

// One row per (fold, epoch) executed.
struct LossLogRow {
  int fold = 0;
  int epoch = 0;
  double train_loss = 0;
  double val_loss = 0;  // NaN when the fold has no validation queries
  double lr = 0;
};

struct FoldResult {
  AggregatorParams best;
  double best_val_loss = 0;  // NaN when the fold has no validation queries
  int best_epoch = -1;
  int epochs_run = 0;
  int skipped_batches = 0;  // batches with no valid contrastive denominator
};

struct TrainResult {
  std::vector<FoldResult> folds;
  std::vector<LossLogRow> log;
};

// Per fold: shuffled batches of training queries, each paired with a
// uniformly drawn relevant model; forward, loss, backward, AdamW. Validation
// pairs each held-out query with its first relevant model in eval mode. When
// `out_dir` is non-empty, fold<k>_best.aggp is rewritten on every validation
// improvement (after the last epoch for folds without validation) and
// loss_log.csv is written at the end.
TrainResult train(const TrainingData& data, const AggregatorConfig& model,
                  const LossConfig& loss, const TrainConfig& config,
                  const std::filesystem::path& out_dir = {});

// CSV `fold,epoch,split,loss,lr`.
std::string to_loss_log_csv(const std::vector<LossLogRow>& rows);

}  // namespace ringret

#endif  // RINGRET_TRAINER_HPP_

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

#include "ringret/presets.hpp"

#include <fmt/format.h>

#include "ringret/errors.hpp"

namespace ringret {
namespace {

std::vector<Preset> make_presets() {
  std::vector<Preset> out;

  Preset nero;
  nero.name = "nero";
  nero.summary = "ring-view transformer, multi-pair InfoNCE, fixed 100 epochs";
  nero.train.patience = 0;
  nero.train.k_folds = 1;
  nero.loss.variant = LossVariant::kInfoNceMulti;
  nero.mode = AggregatorMode::kFlat;
  out.push_back(nero);

  Preset tiktorch;
  tiktorch.name = "tiktorch";
  tiktorch.summary = "per-ring then cross-ring encoder, NT-Xent, 5-fold max ensemble";
  tiktorch.train.patience = 0;
  tiktorch.train.k_folds = 5;
  tiktorch.loss.variant = LossVariant::kNtXent;
  tiktorch.mode = AggregatorMode::kHierarchical;
  tiktorch.scoring = ScoreStrategy::kEnsembleMax;
  out.push_back(tiktorch);

  Preset etinifni;
  etinifni.name = "etinifni";
  etinifni.summary = "soft-target CLIP loss, 80/20 split with early stopping";
  etinifni.train.batch_size = 48;
  etinifni.train.lr = 1e-6;
  etinifni.train.patience = 10;
  etinifni.train.k_folds = 5;
  etinifni.train.max_folds = 1;
  etinifni.loss.variant = LossVariant::kSoftClip;
  etinifni.mode = AggregatorMode::kMeanPool;
  etinifni.scoring = ScoreStrategy::kSumViews;
  out.push_back(etinifni);

  Preset polars;
  polars.name = "polars";
  polars.summary = "projection heads over pooled features, triplet margin loss";
  polars.train.lr = 1e-3;
  polars.train.milestones = {120, 250, 350, 500};
  polars.train.patience = 0;
  polars.train.k_folds = 1;
  polars.loss.variant = LossVariant::kTriplet;
  polars.mode = AggregatorMode::kMeanPool;
  out.push_back(polars);

  Preset thp;
  thp.name = "thp";
  thp.summary = "no training; top-6 variant sum per view, max over views";
  thp.train.epochs = 0;
  thp.train.patience = 0;
  thp.train.k_folds = 1;
  thp.mode = AggregatorMode::kMeanPool;
  thp.scoring = ScoreStrategy::kTopkSumMax;
  thp.topk = 6;
  out.push_back(thp);
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s.empty() ? "-" : s;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = make_presets();
  return table;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw InvalidArgument("unknown preset '" + std::string(name) + "'");
}

std::string presets_table() {
  std::string out = fmt::format("{:<9} {:<15} {:<13} {:>5} {:>6} {:>8} {:<15} {:>8} {:>5} {}\n",
                                "preset", "loss", "mode", "batch", "epochs", "lr",
                                "milestones", "patience", "folds", "scoring");
  for (const auto& p : presets()) {
    const std::string folds =
        p.train.max_folds > 0 ? fmt::format("{}/{}", p.train.max_folds, p.train.k_folds)
                              : std::to_string(p.train.k_folds);
    out += fmt::format("{:<9} {:<15} {:<13} {:>5} {:>6} {:>8.0e} {:<15} {:>8} {:>5} {}\n",
                       p.name, loss_variant_name(p.loss.variant),
                       aggregator_mode_name(p.mode), p.train.batch_size, p.train.epochs,
                       p.train.lr, join(p.train.milestones), p.train.patience, folds,
                       score_strategy_name(p.scoring));
  }
  return out;
}

}  // namespace ringret

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
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ringret/checkpoint.hpp"
#include "ringret/errors.hpp"
#include "ringret/pipeline.hpp"
#include "ringret/presets.hpp"
#include "ringret/synth.hpp"

namespace ringret {
namespace {

using testing_util::random_matrix;

TEST(LrScheduleTest, StepsAtMilestones) {
  TrainConfig c;
  EXPECT_DOUBLE_EQ(lr_at_epoch(c, 0), 1e-4);
  EXPECT_DOUBLE_EQ(lr_at_epoch(c, 49), 1e-4);
  EXPECT_NEAR(lr_at_epoch(c, 50), 1e-5, 1e-20);
  EXPECT_NEAR(lr_at_epoch(c, 75), 1e-6, 1e-21);
  const TrainConfig& polars = find_preset("polars").train;
  EXPECT_NEAR(lr_at_epoch(polars, 400), 1e-3 * 0.1 * 0.1 * 0.1, 1e-18);
  EXPECT_NEAR(lr_at_epoch(polars, 119), 1e-3, 1e-18);
  for (const auto& p : presets()) {
    for (int e = 1; e < 600; ++e) {
      ASSERT_LE(lr_at_epoch(p.train, e), lr_at_epoch(p.train, e - 1)) << p.name;
    }
  }
  EXPECT_THROW(lr_at_epoch(c, -1), InvalidArgument);
}

AggregatorConfig tiny_config() {
  AggregatorConfig c;
  c.input_dim = 6;
  c.text_dim = 5;
  c.model_dim = 8;
  c.heads = 2;
  c.layers = 1;
  c.joint_dim = 8;
  c.tokens = 4;
  c.rings = 2;
  return c;
}

TEST(AdamWTest, ZeroGradientWithoutDecayIsNoOp) {
  AggregatorParams p = init_params(tiny_config(), 3);
  const AggregatorParams before = p;
  OptimState s = OptimState::zeros_like(p);
  TrainConfig c;
  c.weight_decay = 0;
  adamw_step(p, p.zeros_like(), s, c, 1e-2);
  EXPECT_EQ(s.step, 1);
  const auto a = p.tensors();
  const auto b = before.tensors();
  for (std::size_t t = 0; t < a.size(); ++t) {
    for (Eigen::Index i = 0; i < a[t].size; ++i) ASSERT_EQ(a[t].data[i], b[t].data[i]);
  }
}

TEST(AdamWTest, FirstStepIsBiasCorrected) {
  AggregatorParams p = init_params(tiny_config(), 3);
  AggregatorParams g = p.zeros_like();
  for (auto& t : p.tensors()) std::fill(t.data, t.data + t.size, 0.0);
  for (auto& t : g.tensors()) std::fill(t.data, t.data + t.size, 1.0);
  OptimState s = OptimState::zeros_like(p);
  TrainConfig c;
  const double lr = 1e-3;
  adamw_step(p, g, s, c, lr);
  // m_hat = v_hat = 1 after bias correction.
  const double want = -lr / (1 + c.eps);
  for (const auto& t : p.tensors()) {
    for (Eigen::Index i = 0; i < t.size; ++i) ASSERT_NEAR(t.data[i], want, 1e-18) << t.name;
  }
}

TEST(AdamWTest, DecayAloneShrinks) {
  AggregatorParams p = init_params(tiny_config(), 4);
  double before = 0;
  for (const auto& t : p.tensors()) before += Eigen::Map<const Eigen::VectorXd>(t.data, t.size).squaredNorm();
  OptimState s = OptimState::zeros_like(p);
  TrainConfig c;
  c.weight_decay = 0.5;
  adamw_step(p, p.zeros_like(), s, c, 0.1);
  double after = 0;
  for (const auto& t : p.tensors()) after += Eigen::Map<const Eigen::VectorXd>(t.data, t.size).squaredNorm();
  EXPECT_NEAR(after, before * 0.95 * 0.95, 1e-12 * before);
}

TEST(AdamWTest, NonFiniteGradientNamesTensor) {
  AggregatorParams p = init_params(tiny_config(), 4);
  AggregatorParams g = p.zeros_like();
  g.text_head.b2[1] = std::nan("");
  OptimState s = OptimState::zeros_like(p);
  try {
    adamw_step(p, g, s, TrainConfig{}, 1e-3);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("text_head.b2"), std::string::npos) << e.what();
  }
  EXPECT_EQ(s.step, 0);
}

TEST(AdamWTest, Deterministic) {
  Rng rng(8);
  AggregatorParams a = init_params(tiny_config(), 5), b = a;
  AggregatorParams g = a.zeros_like();
  for (auto& t : g.tensors()) {
    for (Eigen::Index i = 0; i < t.size; ++i) t.data[i] = standard_normal(rng);
  }
  OptimState sa = OptimState::zeros_like(a), sb = OptimState::zeros_like(b);
  for (int k = 0; k < 3; ++k) {
    adamw_step(a, g, sa, TrainConfig{}, 1e-3);
    adamw_step(b, g, sb, TrainConfig{}, 1e-3);
  }
  EXPECT_EQ(encode_checkpoint(a), encode_checkpoint(b));
}

TEST(KFoldTest, PartitionsAllItems) {
  const auto folds = kfold_split(10, 5, 3);
  ASSERT_EQ(folds.size(), 5u);
  std::multiset<int> all;
  for (const auto& f : folds) {
    EXPECT_EQ(f.size(), 2u);
    all.insert(f.begin(), f.end());
  }
  EXPECT_EQ(all, std::multiset<int>({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
  EXPECT_EQ(kfold_split(10, 5, 3), folds);
  const auto uneven = kfold_split(11, 3, 1);
  EXPECT_EQ(uneven[0].size() + uneven[1].size() + uneven[2].size(), 11u);
  EXPECT_THROW(kfold_split(3, 5, 0), InvalidArgument);
  EXPECT_THROW(kfold_split(3, 0, 0), InvalidArgument);
}

// Eight queries, each matching one of eight random view stacks.
TrainingData tiny_data(std::uint64_t seed, int n = 8) {
  Rng rng(seed);
  TrainingData d;
  const AggregatorConfig c = tiny_config();
  for (int m = 0; m < n; ++m) d.model_views.push_back(random_matrix(rng, c.tokens, c.input_dim));
  d.text = random_matrix(rng, n, c.text_dim);
  for (int q = 0; q < n; ++q) d.relevant.push_back({q});
  return d;
}

TrainConfig tiny_train(std::uint64_t seed) {
  TrainConfig t;
  t.batch_size = 8;
  t.epochs = 10;
  t.lr = 3e-3;
  t.k_folds = 1;
  t.patience = 0;
  t.seed = seed;
  return t;
}

LossConfig info_nce() {
  LossConfig l;
  l.variant = LossVariant::kInfoNceMulti;
  return l;
}

// Separable synthetic data at a small render size. One full batch per epoch
// keeps the epoch loss free of batch-composition noise.
TEST(TrainTest, LossDecreasesEarlyOnSyntheticData) {
  const int grid = 8, text_dim = 64;
  int decreasing = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SynthSpec spec;
    spec.queries = 20;
    spec.seed = seed;
    const SyntheticDataset ds = generate_synthetic_dataset(spec);
    RingViewConfig rv;
    rv.image_size = 32;
    rv.supersample = 1;
    std::vector<Eigen::MatrixXd> views;
    for (const auto& m : ds.meshes) views.push_back(view_features(m, rv, grid));
    const TrainingData data = make_training_data(
        ds.manifest.relevance_map(), ds.manifest.query_ids(),
        text_features(ds.manifest.queries, text_dim), ds.manifest.model_ids(), views);
    const Preset& nero = find_preset("nero");
    TrainConfig t = nero.train;
    t.epochs = 10;
    t.lr = 3e-3;
    t.batch_size = 20;
    t.seed = seed;
    AggregatorConfig ac;
    ac.input_dim = grid * grid;
    ac.text_dim = text_dim;
    ac.model_dim = 32;
    ac.joint_dim = 32;
    const TrainResult r = train(data, ac, nero.loss, t);
    ASSERT_EQ(r.log.size(), 10u);
    bool ok = true;
    for (std::size_t e = 1; e < r.log.size(); ++e) ok = ok && r.log[e].train_loss < r.log[e - 1].train_loss;
    decreasing += ok;
  }
  EXPECT_GE(decreasing, 9);
}

TEST(TrainTest, PatienceStopsEarly) {
  TrainConfig t = tiny_train(1);
  t.lr = 0;
  t.k_folds = 4;
  t.max_folds = 1;
  t.patience = 1;
  t.batch_size = 3;
  const TrainResult r = train(tiny_data(5), tiny_config(), info_nce(), t);
  ASSERT_EQ(r.folds.size(), 1u);
  EXPECT_EQ(r.folds[0].epochs_run, 2);
  EXPECT_EQ(r.folds[0].best_epoch, 0);
}

TEST(TrainTest, LogRowsAndBestValidation) {
  TrainConfig t = tiny_train(2);
  t.k_folds = 4;
  t.epochs = 6;
  t.batch_size = 3;
  const TrainResult r = train(tiny_data(6), tiny_config(), info_nce(), t);
  ASSERT_EQ(r.folds.size(), 4u);
  std::set<std::pair<int, int>> keys;
  for (const auto& row : r.log) {
    EXPECT_TRUE(keys.insert({row.fold, row.epoch}).second);
    EXPECT_TRUE(std::isfinite(row.train_loss));
    EXPECT_TRUE(std::isfinite(row.val_loss));
  }
  EXPECT_EQ(keys.size(), 4u * 6u);
  for (int f = 0; f < 4; ++f) {
    double best = INFINITY, at_best = NAN;
    for (const auto& row : r.log) {
      if (row.fold != f) continue;
      if (row.val_loss < best) best = row.val_loss;
      if (row.epoch == r.folds[static_cast<std::size_t>(f)].best_epoch) at_best = row.val_loss;
    }
    EXPECT_EQ(r.folds[static_cast<std::size_t>(f)].best_val_loss, best);
    EXPECT_EQ(at_best, best);
  }
  const std::string csv = to_loss_log_csv(r.log);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "fold,epoch,train_loss,val_loss,lr");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 24);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(TrainTest, SameSeedSameBytes) {
  const auto root = std::filesystem::temp_directory_path() / "ringret_train_test";
  std::filesystem::remove_all(root);
  TrainConfig t = tiny_train(9);
  t.k_folds = 2;
  t.epochs = 3;
  const TrainResult a = train(tiny_data(9), tiny_config(), info_nce(), t, root / "a");
  const TrainResult b = train(tiny_data(9), tiny_config(), info_nce(), t, root / "b");
  for (const char* f : {"fold0_best.aggp", "fold1_best.aggp", "loss_log.csv"}) {
    const std::string x = slurp(root / "a" / f);
    EXPECT_FALSE(x.empty()) << f;
    EXPECT_EQ(x, slurp(root / "b" / f)) << f;
  }
  EXPECT_EQ(encode_checkpoint(load_checkpoint(root / "a" / "fold1_best.aggp")),
            encode_checkpoint(a.folds[1].best));
  t.seed = 10;
  const TrainResult c = train(tiny_data(9), tiny_config(), info_nce(), t);
  EXPECT_NE(encode_checkpoint(c.folds[0].best), encode_checkpoint(a.folds[0].best));
  std::filesystem::remove_all(root);
}

TEST(TrainTest, EveryLossTrains) {
  for (auto v : {LossVariant::kNtXent, LossVariant::kSoftClip, LossVariant::kTriplet}) {
    LossConfig l;
    l.variant = v;
    TrainConfig t = tiny_train(3);
    t.epochs = 3;
    const TrainResult r = train(tiny_data(3), tiny_config(), l, t);
    EXPECT_TRUE(r.folds[0].best.all_finite()) << loss_variant_name(v);
    ASSERT_EQ(r.log.size(), 3u);
    for (const auto& row : r.log) EXPECT_TRUE(std::isfinite(row.train_loss)) << loss_variant_name(v);
  }
}

TEST(TrainTest, RejectsBadInputs) {
  TrainingData d = tiny_data(1);
  d.relevant[2].clear();
  EXPECT_THROW(train(d, tiny_config(), info_nce(), tiny_train(0)), InvalidArgument);
  d = tiny_data(1);
  d.relevant[2] = {42};
  EXPECT_THROW(train(d, tiny_config(), info_nce(), tiny_train(0)), InvalidArgument);
  d = tiny_data(1);
  d.text = Eigen::MatrixXd::Zero(8, 4);
  EXPECT_THROW(train(d, tiny_config(), info_nce(), tiny_train(0)), ShapeError);
  TrainConfig t = tiny_train(0);
  t.batch_size = 1;
  EXPECT_THROW(train(tiny_data(1), tiny_config(), info_nce(), t), InvalidArgument);
  t = tiny_train(0);
  t.milestones = {5, 5};
  EXPECT_THROW(t.validate(), InvalidArgument);
}

TEST(PresetsTest, Table) {
  ASSERT_EQ(presets().size(), 5u);
  EXPECT_EQ(find_preset("nero").loss.variant, LossVariant::kInfoNceMulti);
  EXPECT_EQ(find_preset("tiktorch").scoring, ScoreStrategy::kEnsembleMax);
  EXPECT_EQ(find_preset("tiktorch").mode, AggregatorMode::kHierarchical);
  EXPECT_EQ(find_preset("etinifni").train.max_folds, 1);
  EXPECT_EQ(find_preset("etinifni").train.batch_size, 48);
  EXPECT_EQ(find_preset("polars").loss.variant, LossVariant::kTriplet);
  EXPECT_EQ(find_preset("thp").topk, 6);
  EXPECT_EQ(find_preset("thp").train.epochs, 0);
  for (const auto& p : presets()) {
    EXPECT_NO_THROW(p.train.validate()) << p.name;
    EXPECT_NE(presets_table().find(p.name), std::string::npos);
  }
  EXPECT_THROW(find_preset("nope"), InvalidArgument);
}

TEST(PipelineTest, PackUnpackRoundTrip) {
  Rng rng(2);
  const std::vector<std::string> ids = {"b", "a"};
  std::vector<Eigen::MatrixXd> views = {random_matrix(rng, 4, 3), random_matrix(rng, 4, 3)};
  const EmbeddingMatrix packed = pack_view_features(ids, views, 2);
  EXPECT_EQ(packed.rows(), 8);
  EXPECT_EQ(packed.ids()[3], "b:r1v1");
  const auto back = unpack_view_features(packed, {"a", "b"}, 4);
  EXPECT_TRUE(back[0].isApprox(views[1].cast<float>().cast<double>(), 0));
  EXPECT_TRUE(back[1].isApprox(views[0].cast<float>().cast<double>(), 0));
  EXPECT_THROW(unpack_view_features(packed, {"c"}, 4), InvalidArgument);
  EXPECT_THROW(unpack_view_features(packed, {"a"}, 3), InvalidArgument);
  const EmbeddingMatrix bare({"x"}, Eigen::MatrixXd(Eigen::MatrixXd::Ones(1, 3)));
  try {
    unpack_view_features(bare, {"x"}, 1);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.kind(), FormatError::Kind::kMalformed);
  }
}

}  // namespace
}  // namespace ringret

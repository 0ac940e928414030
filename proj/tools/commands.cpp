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

#include "commands.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "ringret/augment.hpp"
#include "ringret/checkpoint.hpp"
#include "ringret/encoders.hpp"
#include "ringret/errors.hpp"
#include "ringret/manifest.hpp"
#include "ringret/metrics.hpp"
#include "ringret/pgm.hpp"
#include "ringret/pipeline.hpp"
#include "ringret/presets.hpp"
#include "ringret/retrieval.hpp"
#include "ringret/ringview.hpp"
#include "ringret/synth.hpp"
#include "ringret/trainer.hpp"

namespace ringret::cli {
namespace {

namespace fs = std::filesystem;
using Eigen::Index;
using Eigen::MatrixXd;

constexpr const char* kViewsFile = "views.emb1";
constexpr const char* kTextsFile = "texts.emb1";

struct Common {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string config;  // consumed before parsing; listed for --help
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Seed for every stochastic step")->capture_default_str();
  sub->add_option("--jobs", c.jobs, "Worker threads")->capture_default_str()->check(
      CLI::PositiveNumber);
  sub->add_option("--config", c.config,
                  "key=value file merged under the command-line flags");
}

void prepare_out(const fs::path& out) { fs::create_directories(out); }

// Writes `text` to out/name and prints the path on stdout.
void emit(const fs::path& out, const std::string& name, std::string_view text) {
  const fs::path p = out / name;
  write_text_file(p, text);
  fmt::print("{}\n", p.string());
}

DatasetManifest load_manifest(const fs::path& path) {
  DatasetManifest m = read_manifest(path);
  m.validate();
  return m;
}

fs::path mesh_path(const fs::path& manifest, const ModelEntry& model) {
  const fs::path p(model.mesh_path);
  return p.is_absolute() ? p : manifest.parent_path() / p;
}

RingViewConfig load_ringview(const std::string& path) {
  if (path.empty()) return RingViewConfig{};
  try {
    RingViewConfig c = parse_ringview_config(read_text_file(path));
    c.validate();
    return c;
  } catch (const ParseError& e) {
    throw e.in_file(path);
  }
}

RelevanceMap load_relevance(const std::string& relevance_file, const DatasetManifest* manifest) {
  if (!relevance_file.empty()) {
    try {
      return to_relevance_map(parse_relevance_file(read_text_file(relevance_file)));
    } catch (const ParseError& e) {
      throw e.in_file(relevance_file);
    }
  }
  if (manifest == nullptr) throw InvalidArgument("need --manifest or --relevance");
  return manifest->relevance_map();
}

struct Features {
  std::vector<MatrixXd> views;  // per manifest model
  MatrixXd text;                // per manifest query
  int views_per_ring = 0;
};

// Views per ring recovered from the "<id>:r<ring>v<view>" row ids.
int views_per_ring_of(const EmbeddingMatrix& packed) {
  int best = 0;
  for (const auto& id : packed.ids()) {
    const auto v = id.rfind('v');
    if (v == std::string::npos) continue;
    best = std::max(best, std::stoi(id.substr(v + 1)) + 1);
  }
  return best;
}

Features load_features(const fs::path& dir, const DatasetManifest& manifest) {
  const EmbeddingMatrix views = import_embeddings(dir / kViewsFile);
  const EmbeddingMatrix texts = import_embeddings(dir / kTextsFile);
  const auto model_ids = manifest.model_ids();
  if (model_ids.empty()) throw InvalidArgument("manifest lists no models");
  const std::string prefix = model_ids.front() + ":";
  int tokens = 0;
  for (const auto& id : views.ids()) tokens += id.rfind(prefix, 0) == 0;
  Features f;
  f.views = unpack_view_features(views, model_ids, tokens);
  f.views_per_ring = views_per_ring_of(views);
  f.text.resize(static_cast<Index>(manifest.queries.size()), texts.dim());
  for (std::size_t q = 0; q < manifest.queries.size(); ++q) {
    const Index row = texts.find(manifest.queries[q].id);
    if (row < 0) {
      throw InvalidArgument("no text feature for query '" + manifest.queries[q].id + "'");
    }
    f.text.row(static_cast<Index>(q)) = texts.row(row).transpose();
  }
  return f;
}

// ---------------------------------------------------------------- synth

void add_synth(CLI::App& app, std::vector<Command>& out) {
  struct Opts {
    Common common;
    SynthSpec spec;
    bool single = false;
    std::string dir;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("synth", "Generate the planted synthetic dataset");
  add_common(sub, o->common);
  sub->add_option("--families", o->spec.families)->capture_default_str();
  sub->add_option("--per-family", o->spec.per_family)->capture_default_str();
  sub->add_option("--queries", o->spec.queries)->capture_default_str();
  sub->add_flag("--single-relevance", o->single,
                "Relate each query to one version instead of the whole family");
  sub->add_option("--out", o->dir, "Output directory")->required();
  out.push_back({sub, [o] {
    o->spec.seed = o->common.seed;
    o->spec.family_relevance = !o->single;
    const SyntheticDataset data = generate_synthetic_dataset(o->spec);
    write_synthetic_dataset(data, o->dir);
    spdlog::info("synth: {} models, {} queries, {} relevance pairs",
                 data.manifest.models.size(), data.manifest.queries.size(),
                 data.manifest.relevance.size());
    fmt::print("{}\n", (fs::path(o->dir) / "manifest.tsv").string());
  }});
}

// ---------------------------------------------------------------- render

void add_render(CLI::App& app, std::vector<Command>& out) {
  struct Opts {
    Common common;
    std::string manifest, ringview, dir;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("render", "Render ring-view silhouettes as PGM files");
  add_common(sub, o->common);
  sub->add_option("--manifest", o->manifest)->required();
  sub->add_option("--ringview", o->ringview, "Ring-view config (key=value)");
  sub->add_option("--out", o->dir)->required();
  out.push_back({sub, [o] {
    const DatasetManifest m = load_manifest(o->manifest);
    const RingViewConfig rv = load_ringview(o->ringview);
    prepare_out(o->dir);
    std::size_t written = 0;
    for (const auto& model : m.models) {
      const TriangleMesh mesh = read_obj(mesh_path(o->manifest, model));
      const auto images = render_ring_views(mesh, rv, o->common.jobs);
      for (std::size_t i = 0; i < images.size(); ++i) {
        const int ring = static_cast<int>(i) / rv.views_per_ring;
        const int view = static_cast<int>(i) % rv.views_per_ring;
        write_pgm(images[i], fs::path(o->dir) / ring_view_filename(model.id, ring, view));
        ++written;
      }
    }
    write_text_file(fs::path(o->dir) / "ringview.cfg", to_config_text(rv));
    spdlog::info("render: {} images for {} models", written, m.models.size());
    fmt::print("{}\n", o->dir);
  }});
}

// ---------------------------------------------------------------- encode

void add_encode(CLI::App& app, std::vector<Command>& out) {
  struct Opts {
    Common common;
    std::string manifest, images, ringview, dir;
    int grid = 16;
    int text_dim = 256;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("encode", "Toy image and text features as EMB1 files");
  add_common(sub, o->common);
  sub->add_option("--manifest", o->manifest)->required();
  sub->add_option("--images", o->images,
                  "Directory written by render; views are rendered in memory otherwise");
  sub->add_option("--ringview", o->ringview, "Ring-view config (key=value)");
  sub->add_option("--grid", o->grid, "Image feature grid g (g*g features)")->capture_default_str();
  sub->add_option("--text-dim", o->text_dim, "Hashed text feature size")->capture_default_str();
  sub->add_option("--out", o->dir)->required();
  out.push_back({sub, [o] {
    const DatasetManifest m = load_manifest(o->manifest);
    RingViewConfig rv = load_ringview(o->ringview);
    if (!o->images.empty() && o->ringview.empty() &&
        fs::exists(fs::path(o->images) / "ringview.cfg")) {
      rv = load_ringview((fs::path(o->images) / "ringview.cfg").string());
    }
    std::vector<MatrixXd> views;
    for (const auto& model : m.models) {
      if (o->images.empty()) {
        views.push_back(view_features(read_obj(mesh_path(o->manifest, model)), rv, o->grid,
                                      o->common.jobs));
        continue;
      }
      std::vector<SilhouetteImage> images;
      for (int r = 0; r < rv.rings(); ++r) {
        for (int v = 0; v < rv.views_per_ring; ++v) {
          const fs::path p = fs::path(o->images) / ring_view_filename(model.id, r, v);
          try {
            images.push_back(read_pgm(p));
          } catch (const FormatError& e) {
            throw FormatError(e.kind(), p.string() + ": " + e.what());
          }
        }
      }
      views.push_back(encode_model_views(images, o->grid));
    }
    prepare_out(o->dir);
    const fs::path vp = fs::path(o->dir) / kViewsFile;
    export_embeddings(pack_view_features(m.model_ids(), views, rv.views_per_ring), vp);
    const fs::path tp = fs::path(o->dir) / kTextsFile;
    export_embeddings(EmbeddingMatrix(m.query_ids(), text_features(m.queries, o->text_dim)), tp);
    spdlog::info("encode: {} models x {} views, {} queries", m.models.size(),
                 rv.total_views(), m.queries.size());
    fmt::print("{}\n{}\n", vp.string(), tp.string());
  }});
}

// ---------------------------------------------------------------- train

void add_train(CLI::App& app, std::vector<Command>& out) {
  struct Opts {
    Common common;
    std::string manifest, features, relevance, dir;
    std::string preset = "nero";
    std::optional<int> epochs, batch_size, patience, k_folds, max_folds, joint_dim;
    std::optional<double> lr, temperature, margin, weight_decay;
    std::optional<std::string> loss, mode;
    int model_dim = 256, heads = 4, layers = 2;
    double dropout = 0.1;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("train", "Train the aggregator and projection heads");
  add_common(sub, o->common);
  sub->add_option("--manifest", o->manifest)->required();
  sub->add_option("--features", o->features, "Directory written by encode")->required();
  sub->add_option("--relevance", o->relevance, "Relevance file overriding the manifest");
  sub->add_option("--preset", o->preset, "nero | tiktorch | etinifni | polars | thp")
      ->check(CLI::IsMember({"nero", "tiktorch", "etinifni", "polars", "thp"}))
      ->capture_default_str();
  sub->add_option("--epochs", o->epochs);
  sub->add_option("--batch-size", o->batch_size);
  sub->add_option("--lr", o->lr);
  sub->add_option("--weight-decay", o->weight_decay);
  sub->add_option("--patience", o->patience, "0 disables early stopping");
  sub->add_option("--k-folds", o->k_folds);
  sub->add_option("--max-folds", o->max_folds, "Folds actually trained (0 = all)");
  sub->add_option("--loss", o->loss, "info_nce_multi | nt_xent | soft_clip | triplet")
      ->check(CLI::IsMember({"info_nce_multi", "nt_xent", "soft_clip", "triplet"}));
  sub->add_option("--temperature", o->temperature);
  sub->add_option("--margin", o->margin);
  sub->add_option("--mode", o->mode, "flat | hierarchical | mean_pool")
      ->check(CLI::IsMember({"flat", "hierarchical", "mean_pool"}));
  sub->add_option("--model-dim", o->model_dim)->capture_default_str();
  sub->add_option("--heads", o->heads)->capture_default_str();
  sub->add_option("--layers", o->layers)->capture_default_str();
  sub->add_option("--joint-dim", o->joint_dim);
  sub->add_option("--dropout", o->dropout)->capture_default_str();
  sub->add_option("--out", o->dir)->required();
  out.push_back({sub, [o] {
    const Preset& preset = find_preset(o->preset);
    TrainConfig tc = preset.train;
    tc.seed = o->common.seed;
    if (o->epochs) tc.epochs = *o->epochs;
    if (o->batch_size) tc.batch_size = *o->batch_size;
    if (o->lr) tc.lr = *o->lr;
    if (o->weight_decay) tc.weight_decay = *o->weight_decay;
    if (o->patience) tc.patience = *o->patience;
    if (o->k_folds) tc.k_folds = *o->k_folds;
    if (o->max_folds) tc.max_folds = *o->max_folds;
    LossConfig lc = preset.loss;
    if (o->loss) lc.variant = parse_loss_variant(*o->loss);
    if (o->temperature) lc.temperature = *o->temperature;
    if (o->margin) lc.margin = *o->margin;

    const DatasetManifest m = load_manifest(o->manifest);
    Features f = load_features(o->features, m);
    AggregatorConfig ac;
    ac.mode = o->mode ? parse_aggregator_mode(*o->mode) : preset.mode;
    ac.input_dim = static_cast<int>(f.views.front().cols());
    ac.text_dim = static_cast<int>(f.text.cols());
    ac.tokens = static_cast<int>(f.views.front().rows());
    ac.rings = f.views_per_ring > 0 ? ac.tokens / f.views_per_ring : 1;
    ac.model_dim = o->model_dim;
    ac.heads = o->heads;
    ac.layers = o->layers;
    ac.joint_dim = o->joint_dim ? *o->joint_dim : preset.joint_dim;
    ac.dropout = o->dropout;

    const RelevanceMap rel = load_relevance(o->relevance, &m);
    const TrainingData data =
        make_training_data(rel, m.query_ids(), f.text, m.model_ids(), std::move(f.views));
    prepare_out(o->dir);
    spdlog::info("train: preset {}, {} queries, {} models, loss {}, mode {}", preset.name,
                 data.relevant.size(), data.model_views.size(), loss_variant_name(lc.variant),
                 aggregator_mode_name(ac.mode));
    const TrainResult result = train(data, ac, lc, tc, o->dir);
    for (std::size_t k = 0; k < result.folds.size(); ++k) {
      const auto& fr = result.folds[k];
      spdlog::info("fold {}: {} epochs, best epoch {}, best val loss {:.6g}, {} skipped batches",
                   k, fr.epochs_run, fr.best_epoch, fr.best_val_loss, fr.skipped_batches);
      fmt::print("{}\n", (fs::path(o->dir) / fmt::format("fold{}_best.aggp", k)).string());
    }
    fmt::print("{}\n", (fs::path(o->dir) / "loss_log.csv").string());
  }});
}

// ---------------------------------------------------------------- retrieve

// Query variant texts grouped by partition: query -> partition -> texts.
using Variants = std::map<std::string, std::map<long long, std::vector<std::string>>>;

Variants load_variants(const std::string& path) {
  Variants v;
  const std::string text = read_text_file(path);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw ParseError("expected query_id<TAB>partition<TAB>text", line_no, path);
    }
    long long part = 0;
    try {
      part = std::stoll(line.substr(t1 + 1, t2 - t1 - 1));
    } catch (const std::exception&) {
      throw ParseError("bad partition index", line_no, path);
    }
    v[line.substr(0, t1)][part].push_back(line.substr(t2 + 1));
  }
  return v;
}

void add_retrieve(CLI::App& app, std::vector<Command>& out) {
  struct Opts {
    Common common;
    std::string manifest, features, variants, dir;
    std::vector<std::string> checkpoints;
    std::string strategy = "single";
    int topk = 6;
    int text_dim = 0;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("retrieve", "Rank the gallery for every query");
  add_common(sub, o->common);
  sub->add_option("--manifest", o->manifest)->required();
  sub->add_option("--features", o->features, "Directory written by encode")->required();
  sub->add_option("--checkpoint", o->checkpoints, "AGGP file; repeat for ensemble_max")
      ->required();
  sub->add_option("--strategy", o->strategy,
                  "single | sum_views | topk_sum_max | ensemble_max")
      ->check(CLI::IsMember({"single", "sum_views", "topk_sum_max", "ensemble_max"}))
      ->capture_default_str();
  sub->add_option("--topk", o->topk, "k for topk_sum_max")->capture_default_str();
  sub->add_option("--variants", o->variants,
                  "topk_sum_max query variants: query_id<TAB>partition<TAB>text");
  sub->add_option("--out", o->dir)->required();
  out.push_back({sub, [o] {
    const ScoreStrategy strategy = parse_score_strategy(o->strategy);
    if (o->checkpoints.size() > 1 && strategy != ScoreStrategy::kEnsembleMax) {
      throw InvalidArgument("several checkpoints need --strategy ensemble_max");
    }
    const DatasetManifest m = load_manifest(o->manifest);
    const Features f = load_features(o->features, m);
    const auto model_ids = m.model_ids();
    const auto query_ids = m.query_ids();

    std::vector<ScoreTable> tables;
    for (const auto& path : o->checkpoints) {
      const AggregatorParams params = load_checkpoint(path);
      if (strategy == ScoreStrategy::kSingle || strategy == ScoreStrategy::kEnsembleMax) {
        tables.push_back(score_table(embed_texts(params, query_ids, f.text),
                                     embed_models(params, model_ids, f.views)));
        continue;
      }
      if (params.config.mode != AggregatorMode::kMeanPool) {
        throw InvalidArgument(std::string(score_strategy_name(strategy)) +
                              " scores single views and needs a mean_pool checkpoint");
      }
      // Per-view joint embeddings through the object head.
      std::vector<MatrixXd> view_emb;
      for (const auto& v : f.views) {
        MatrixXd e(v.rows(), params.config.joint_dim);
        for (Index i = 0; i < v.rows(); ++i) {
          e.row(i) = forward_object_head(params, v.row(i).transpose()).transpose();
        }
        view_emb.push_back(std::move(e));
      }
      ScoreTable t{query_ids, model_ids,
                   MatrixXd(static_cast<Index>(query_ids.size()),
                            static_cast<Index>(model_ids.size()))};
      if (strategy == ScoreStrategy::kSumViews) {
        for (std::size_t q = 0; q < query_ids.size(); ++q) {
          const auto te = forward_text(params, f.text.row(static_cast<Index>(q)).transpose());
          for (std::size_t j = 0; j < model_ids.size(); ++j) {
            t.scores(static_cast<Index>(q), static_cast<Index>(j)) =
                score_sum_views(te, view_emb[j]);
          }
        }
      } else {
        const Variants variants = o->variants.empty() ? Variants{} : load_variants(o->variants);
        const int vpr = f.views_per_ring > 0 ? f.views_per_ring : static_cast<int>(f.views.front().rows());
        for (std::size_t q = 0; q < query_ids.size(); ++q) {
          std::vector<MatrixXd> partitions;
          const auto it = variants.find(query_ids[q]);
          if (it == variants.end()) {
            partitions.push_back(
                forward_text(params, f.text.row(static_cast<Index>(q)).transpose()).transpose());
          } else {
            for (const auto& [part, texts] : it->second) {
              MatrixXd p(static_cast<Index>(texts.size()), params.config.joint_dim);
              for (std::size_t i = 0; i < texts.size(); ++i) {
                p.row(static_cast<Index>(i)) =
                    forward_text(params, toy_text_encode(texts[i], static_cast<int>(f.text.cols())))
                        .transpose();
              }
              partitions.push_back(std::move(p));
            }
          }
          for (std::size_t j = 0; j < model_ids.size(); ++j) {
            std::vector<MatrixXd> groups;
            for (Index r = 0; r < view_emb[j].rows(); r += vpr) {
              groups.push_back(view_emb[j].middleRows(r, std::min<Index>(vpr, view_emb[j].rows() - r)));
            }
            t.scores(static_cast<Index>(q), static_cast<Index>(j)) =
                score_topk_sum_max(partitions, groups, o->topk);
          }
        }
      }
      tables.push_back(std::move(t));
    }
    const ScoreTable table = tables.size() == 1 ? tables.front() : ensemble_max(tables);
    prepare_out(o->dir);
    spdlog::info("retrieve: {} queries against {} models ({})", query_ids.size(),
                 model_ids.size(), score_strategy_name(strategy));
    emit(o->dir, "rankings.tsv", to_ranking_tsv(rank_table(table)));
  }});
}

// ---------------------------------------------------------------- evaluate

void add_evaluate(CLI::App& app, std::vector<Command>& out) {
  struct Opts {
    Common common;
    std::string rankings, manifest, relevance, dir;
    std::string name = "run";
    int fr_cutoff = 10;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("evaluate", "NN, P@10, NDCG, mAP, FT, ST and FR of a run");
  add_common(sub, o->common);
  sub->add_option("--rankings", o->rankings, "Ranking TSV")->required();
  sub->add_option("--manifest", o->manifest, "Relevance source");
  sub->add_option("--relevance", o->relevance, "Relevance file (overrides the manifest)");
  sub->add_option("--fr-cutoff", o->fr_cutoff,
                  "Fallout cutoff; 10 reproduces the published FR column")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub->add_option("--name", o->name, "Row label in leaderboard.txt")->capture_default_str();
  sub->add_option("--out", o->dir)->required();
  out.push_back({sub, [o] {
    std::optional<DatasetManifest> m;
    if (!o->manifest.empty()) m = load_manifest(o->manifest);
    const RelevanceMap rel = load_relevance(o->relevance, m ? &*m : nullptr);
    std::vector<Ranking> rankings;
    try {
      rankings = parse_ranking_tsv(read_text_file(o->rankings));
    } catch (const ParseError& e) {
      throw e.in_file(o->rankings);
    }
    MetricConfig mc;
    mc.fr_cutoff = o->fr_cutoff;
    const MetricsReport report = evaluate_run(rankings, rel, mc);
    for (const auto& q : report.skipped) {
      spdlog::warn("evaluate: query {} has no relevant models; skipped", q);
    }
    prepare_out(o->dir);
    emit(o->dir, "report.csv", to_report_csv(report));
    std::string pr = "recall,precision\n";
    for (std::size_t i = 0; i < report.macro_pr.size(); ++i) {
      pr += fmt::format("{:.1f},{:.6f}\n", static_cast<double>(i) / 10.0, report.macro_pr[i]);
    }
    emit(o->dir, "pr_curve.csv", pr);
    emit(o->dir, "leaderboard.txt", to_leaderboard({{o->name, report.macro}}));
    spdlog::info("evaluate: {} queries, macro NN {:.4f} mAP {:.4f}", report.per_query.size(),
                 report.macro.nn, report.macro.map);
  }});
}

// ---------------------------------------------------------------- cluster

void add_cluster(CLI::App& app, std::vector<Command>& out) {
  struct Opts {
    Common common;
    std::string manifest, dir;
    std::string preset = "desk";
    std::optional<int> k;
    int points = 2048;
    int restarts = 1;
    int max_iters = 100;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("cluster", "KMeans over point-cloud grid statistics");
  add_common(sub, o->common);
  sub->add_option("--manifest", o->manifest)->required();
  sub->add_option("--preset", o->preset, "desk (k = 20) | full (k = 150)")
      ->check(CLI::IsMember({"desk", "full"}))
      ->capture_default_str();
  sub->add_option("--k", o->k, "Cluster count (overrides the preset)");
  sub->add_option("--points", o->points, "Surface samples per model")->capture_default_str();
  sub->add_option("--restarts", o->restarts)->capture_default_str();
  sub->add_option("--max-iters", o->max_iters)->capture_default_str();
  sub->add_option("--out", o->dir)->required();
  out.push_back({sub, [o] {
    int k = 0;
    if (o->preset == "desk") {
      k = 20;
    } else if (o->preset == "full") {
      k = 150;
    } else {
      throw InvalidArgument("unknown cluster preset '" + o->preset + "'");
    }
    if (o->k) k = *o->k;
    const DatasetManifest m = load_manifest(o->manifest);
    const GridStatsConfig gc;
    MatrixXd features(static_cast<Index>(m.models.size()), gc.dim());
    for (std::size_t i = 0; i < m.models.size(); ++i) {
      const TriangleMesh mesh = read_obj(mesh_path(o->manifest, m.models[i]));
      const PointCloud cloud = sample_point_cloud(
          mesh, static_cast<std::size_t>(o->points), o->common.seed + i);
      features.row(static_cast<Index>(i)) = grid_stats_features(cloud, gc).transpose();
    }
    const ClusterModel model =
        kmeans(zscore(features), k, o->common.seed, {o->max_iters, o->restarts});
    prepare_out(o->dir);
    emit(o->dir, "clusters.tsv", to_cluster_tsv(m.model_ids(), model.assignment));
    std::string trace = "iteration,inertia\n";
    for (std::size_t i = 0; i < model.inertia_trace.size(); ++i) {
      trace += fmt::format("{},{:.9g}\n", i, model.inertia_trace[i]);
    }
    emit(o->dir, "inertia_trace.csv", trace);
    spdlog::info("cluster: k = {}, inertia {:.6g} after {} iterations", k, model.inertia,
                 model.iterations);
  }});
}

// ---------------------------------------------------------------- augment

void add_augment(CLI::App& app, std::vector<Command>& out) {
  struct Opts {
    Common common;
    std::string manifest, relevance, clusters, dir;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("augment", "Propagate queries across shape clusters");
  add_common(sub, o->common);
  sub->add_option("--manifest", o->manifest, "Relevance source");
  sub->add_option("--relevance", o->relevance, "Relevance file (overrides the manifest)");
  sub->add_option("--clusters", o->clusters, "Cluster TSV written by cluster")->required();
  sub->add_option("--out", o->dir)->required();
  out.push_back({sub, [o] {
    std::vector<RelevancePair> pairs;
    if (!o->relevance.empty()) {
      try {
        pairs = parse_relevance_file(read_text_file(o->relevance));
      } catch (const ParseError& e) {
        throw e.in_file(o->relevance);
      }
    } else if (!o->manifest.empty()) {
      pairs = load_manifest(o->manifest).relevance;
    } else {
      throw InvalidArgument("need --manifest or --relevance");
    }
    ClusterAssignment clusters;
    try {
      clusters = parse_cluster_tsv(read_text_file(o->clusters));
    } catch (const ParseError& e) {
      throw e.in_file(o->clusters);
    }
    const auto augmented = propagate_queries(clusters, pairs);
    prepare_out(o->dir);
    emit(o->dir, "relevance.tsv", to_relevance_text(augmented));
    spdlog::info("augment: {} pairs -> {} pairs", pairs.size(), augmented.size());
  }});
}

// ---------------------------------------------------------------- info

constexpr const char* kFormats = R"(EMB1 embeddings (.emb1)
  bytes 0-3   "EMB1"
  u32 LE      N rows
  u32 LE      D columns
  N*D f32 LE  row-major values
  sidecar <path>.ids: N newline-terminated ids in row order
  view features use ids "<model_id>:r<ring>v<view>"

AGGP checkpoint (.aggp)
  bytes 0-3   "AGGP"
  u32 LE      version (1)
  u32 LE x 8  input_dim text_dim model_dim heads layers joint_dim tokens rings
  f64 LE      dropout
  u32 LE      mode (0 flat, 1 hierarchical, 2 mean_pool)
  f64 LE      every parameter tensor in declaration order, column-major

PGM silhouette (.pgm)
  "P5\n<width> <height>\n255\n" then width*height bytes, row-major,
  value = round(255 * coverage)

manifest.tsv
  "#MODELS"     model_id<TAB>mesh_path (relative to the manifest)
  "#QUERIES"    query_id<TAB>text
  "#RELEVANCE"  query_id<TAB>model_id
  ids match [A-Za-z0-9_.-]+

relevance file: a "#RELEVANCE" section alone
ranking TSV: query_id<TAB>model_id<TAB>score, grouped by query, descending
report CSV: query_id,nn,p_at_10,ndcg,map,ft,st,fr then a MACRO row
loss log CSV: fold,epoch,train_loss,val_loss,lr, one row per fold and epoch;
  val_loss is nan when the fold has no validation queries
cluster TSV: model_id<TAB>cluster_index
ring-view config: key=value lines (views_per_ring, latitudes, distance_factor,
  image_size, fov_y, supersample)
run config: key=value lines naming long options of the subcommand; flags on
  the command line win; paths are relative to the config file
)";

void add_info(CLI::App& app, std::vector<Command>& out) {
  struct Opts {
    bool formats = false;
    bool presets = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("info", "Version, file formats and preset table");
  sub->add_flag("--formats", o->formats, "Byte-level format descriptions");
  sub->add_flag("--presets", o->presets, "Hyperparameter presets");
  out.push_back({sub, [o] {
    const bool all = !o->formats && !o->presets;
    if (all) fmt::print("ringret 0.1.0\n\n");
    if (all || o->formats) fmt::print("{}\n", kFormats);
    if (all || o->presets) fmt::print("{}", presets_table());
  }});
}

}  // namespace

std::vector<Command> register_commands(CLI::App& app) {
  std::vector<Command> out;
  add_synth(app, out);
  add_render(app, out);
  add_encode(app, out);
  add_train(app, out);
  add_retrieve(app, out);
  add_evaluate(app, out);
  add_cluster(app, out);
  add_augment(app, out);
  add_info(app, out);
  return out;
}

}  // namespace ringret::cli

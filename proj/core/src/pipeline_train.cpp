// Copyright 2026 The SAQAM Authors
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

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <json.hpp>
#include <numeric>

#include "saqam/loss/losses.hpp"
#include "saqam/metric/metric.hpp"
#include "saqam/model/checkpoint.hpp"
#include "saqam/pipeline/pipeline.hpp"
#include "saqam/sim/triplet.hpp"
#include "saqam/util/csv.hpp"
#include "saqam/util/manifest.hpp"
#include "saqam/util/rng.hpp"

namespace saqam::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kTrainKeys = {
    "data.manifest",        "train.epochs",        "train.batch_size",
    "train.lr",             "train.crop_frames",   "train.augment",
    "train.val_frac",       "loss.w_lq",           "loss.w_sq",
    "loss.doa",             "loss.margin_start",   "loss.margin_end",
    "model.inception_blocks", "model.inception_width", "model.tcn_channels",
    "model.tcn_dilations",  "model.input_mode",    "model.log_mag_compression",
    "model.stacks_include_logits", "model.lq_embed_dim", "model.head_hidden",
};

// Random training window of `frames` STFT frames, optionally shift-augmented.
audio::BinauralSignal train_crop(const audio::BinauralSignal& clip, int frames, bool augment,
                                 uint64_t seed) {
  audio::BinauralSignal s = clip;
  if (augment) s = sim::augment_shift(s, derive_seed(seed, "aug"));
  if (frames <= 0) return s;
  const int64_t want = static_cast<int64_t>(frames - 1) * 256 + 512;
  if (want >= s.frames()) return s;
  Rng rng(derive_seed(seed, "crop"));
  const auto offset = static_cast<int64_t>(rng.below(static_cast<uint64_t>(s.frames() - want + 1)));
  return s.slice(offset, want);
}

struct StepItem {
  bool is_triplet = false;
  int index = -1;  // into the dataset vectors
};

int circular_bin_distance(int a, int b, int n) {
  const int d = std::abs(a - b);
  return std::min(d, n - d);
}

}  // namespace

model::ModelConfig model_config_from_kv(const KvConfig& cfg) {
  model::ModelConfig c;
  c.inception_blocks = cfg.get_int("model.inception_blocks", c.inception_blocks);
  c.inception_width = cfg.get_int("model.inception_width", c.inception_width);
  c.tcn_channels = cfg.get_ints("model.tcn_channels", c.tcn_channels);
  c.tcn_dilations = cfg.get_ints("model.tcn_dilations", c.tcn_dilations);
  c.tcn_blocks = static_cast<int>(c.tcn_channels.size());
  if (c.tcn_dilations.size() != c.tcn_channels.size()) {
    c.tcn_dilations.resize(c.tcn_channels.size());
    for (size_t i = 0; i < c.tcn_dilations.size(); ++i) c.tcn_dilations[i] = 1 << i;
  }
  c.lq_embed_dim = cfg.get_int("model.lq_embed_dim", c.lq_embed_dim);
  c.head_hidden = cfg.get_int("model.head_hidden", c.head_hidden);
  c.input_mode = model::input_mode_from_string(cfg.get_string("model.input_mode", "both"));
  c.log_mag_compression = cfg.get_bool("model.log_mag_compression", c.log_mag_compression);
  c.stacks_include_logits = cfg.get_bool("model.stacks_include_logits", c.stacks_include_logits);
  c.validate();
  return c;
}

model::SaqamNet load_metric_model(const std::string& checkpoint_path) {
  model::Checkpoint ck = model::read_checkpoint(checkpoint_path);
  if (ck.model_type != "saqam_net")
    throw FormatError("checkpoint " + checkpoint_path + " is a " + ck.model_type);
  model::SaqamNet net(model::ModelConfig::from_json(ck.config_json), 0);
  model::load_params(net.params(), ck);
  return net;
}

double triplet_accuracy(const model::SaqamNet& net, const std::vector<TripletClips>& triplets) {
  if (triplets.empty()) return 0.0;
  std::vector<int> correct(triplets.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (int64_t i = 0; i < static_cast<int64_t>(triplets.size()); ++i) {
    const auto& t = triplets[static_cast<size_t>(i)];
    auto sa = metric::compute_stacks(net, t.anchor);
    auto sp = metric::compute_stacks(net, t.positive);
    auto sn = metric::compute_stacks(net, t.negative);
    const double d_ap = metric::deep_feature_distance(sa.lq, sp.lq);
    const double d_an = metric::deep_feature_distance(sa.lq, sn.lq);
    correct[static_cast<size_t>(i)] = d_ap < d_an ? 1 : 0;
  }
  return std::accumulate(correct.begin(), correct.end(), 0) /
         static_cast<double>(triplets.size());
}

double doa_accuracy_az(const model::SaqamNet& net, const std::vector<DoaItem>& items,
                       int tol_bins) {
  if (items.empty()) return 0.0;
  std::vector<int> hit(items.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (int64_t i = 0; i < static_cast<int64_t>(items.size()); ++i) {
    const auto& item = items[static_cast<size_t>(i)];
    auto pred = net.predict_doa(audio::stft(item.signal));
    hit[static_cast<size_t>(i)] =
        circular_bin_distance(pred.az_clip, item.az_bin, net.config().az_bins) <= tol_bins ? 1 : 0;
  }
  return std::accumulate(hit.begin(), hit.end(), 0) / static_cast<double>(items.size());
}

TrainOutputs run_train(const RunContext& ctx) {
  const std::string command = "train";
  TrainOutputs out;
  out.checkpoint = (fs::path(ctx.out_dir) / "model.ckpt").string();
  if (!ctx.force && run_is_complete(ctx.out_dir, command)) {
    out.skipped = true;
    return out;
  }
  ctx.config.require_known(kTrainKeys);
  if (ctx.workers > 0) omp_set_num_threads(ctx.workers);
  fs::create_directories(ctx.out_dir);

  const std::string manifest = ctx.config.get_string("data.manifest", "");
  if (manifest.empty()) throw ConfigError("data.manifest", "required for train");
  Dataset ds = load_dataset(manifest);

  const int epochs = ctx.config.get_int("train.epochs", 10);
  const int batch_size = ctx.config.get_int("train.batch_size", 64);
  const double lr = ctx.config.get_double("train.lr", 1e-4);
  const int crop_frames = ctx.config.get_int("train.crop_frames", 0);
  const bool augment = ctx.config.get_bool("train.augment", true);
  const double val_frac = ctx.config.get_double("train.val_frac", 0.15);
  loss::MtlWeights weights;
  weights.w_lq = ctx.config.get_double("loss.w_lq", 1.0);
  weights.w_sq = ctx.config.get_double("loss.w_sq", 1.0);
  const bool use_emd = ctx.config.get_string("loss.doa", "emd") == "emd";
  loss::MarginSchedule margin;
  margin.delta_start = ctx.config.get_double("loss.margin_start", 0.5);
  margin.delta_end = ctx.config.get_double("loss.margin_end", 1.5);
  margin.total_epochs = std::max(1, epochs - 1);
  if (weights.w_lq < 0 || weights.w_sq < 0) throw ConfigError("loss.w_lq", "weights must be >= 0");

  // deterministic split: the tail fraction is validation
  const auto n_train_trip = static_cast<int>(ds.triplets.size() * (1.0 - val_frac));
  const auto n_train_doa = static_cast<int>(ds.doa.size() * (1.0 - val_frac));
  std::vector<TripletClips> val_trip(ds.triplets.begin() + n_train_trip, ds.triplets.end());
  std::vector<DoaItem> val_doa(ds.doa.begin() + n_train_doa, ds.doa.end());

  const bool use_lq = weights.w_lq > 0 && n_train_trip > 0;
  const bool use_sq = weights.w_sq > 0 && n_train_doa > 0;
  if (!use_lq && !use_sq) throw DataError("nothing to train: no task has data and weight");

  model::ModelConfig mc = model_config_from_kv(ctx.config);
  model::SaqamNet net(mc, derive_seed(ctx.seed, "train-init"));
  nn::Adam opt(net.params(), lr);

  // soft labels cached per bin
  std::vector<std::vector<float>> az_labels(static_cast<size_t>(mc.az_bins));
  for (int v = 0; v < mc.az_bins; ++v)
    az_labels[static_cast<size_t>(v)] = loss::label_probs<float>(loss::soft_label(v, mc.az_bins, true));
  std::vector<std::vector<float>> el_labels(static_cast<size_t>(mc.el_bins));
  for (int v = 0; v < mc.el_bins; ++v)
    el_labels[static_cast<size_t>(v)] = loss::label_probs<float>(loss::soft_label(v, mc.el_bins, false));

  std::vector<std::vector<std::string>> log_rows = {
      {"epoch", "margin", "train_loss", "train_triplet_acc", "val_triplet_acc", "val_doa_acc"}};

  const int lq_per_batch = use_lq && use_sq ? std::max(1, batch_size / 2)
                                            : (use_lq ? batch_size : 0);
  const int sq_per_batch = use_lq && use_sq ? std::max(1, batch_size - lq_per_batch)
                                            : (use_sq ? batch_size : 0);

  for (int epoch = 0; epoch < epochs; ++epoch) {
    const double delta = loss::margin_at(margin, std::min(epoch, margin.total_epochs));
    Rng order_rng(derive_seed(ctx.seed, "epoch-order", static_cast<uint64_t>(epoch)));
    std::vector<int> trip_order(static_cast<size_t>(n_train_trip));
    std::iota(trip_order.begin(), trip_order.end(), 0);
    for (int i = n_train_trip - 1; i > 0; --i)
      std::swap(trip_order[static_cast<size_t>(i)],
                trip_order[order_rng.below(static_cast<uint64_t>(i + 1))]);
    std::vector<int> doa_order(static_cast<size_t>(n_train_doa));
    std::iota(doa_order.begin(), doa_order.end(), 0);
    for (int i = n_train_doa - 1; i > 0; --i)
      std::swap(doa_order[static_cast<size_t>(i)],
                doa_order[order_rng.below(static_cast<uint64_t>(i + 1))]);

    const int steps = use_lq ? (n_train_trip + lq_per_batch - 1) / lq_per_batch
                             : (n_train_doa + sq_per_batch - 1) / sq_per_batch;
    double epoch_loss = 0.0;
    int64_t train_correct = 0, train_total = 0;
    int doa_cursor = 0;

    for (int step = 0; step < steps; ++step) {
      std::vector<StepItem> items;
      if (use_lq)
        for (int k = 0; k < lq_per_batch; ++k) {
          const int idx = step * lq_per_batch + k;
          if (idx < n_train_trip) items.push_back({true, trip_order[static_cast<size_t>(idx)]});
        }
      if (use_sq)
        for (int k = 0; k < sq_per_batch; ++k)
          items.push_back({false, doa_order[static_cast<size_t>((doa_cursor++) % n_train_doa)]});

      const int n_lq_items = static_cast<int>(std::count_if(
          items.begin(), items.end(), [](const StepItem& s) { return s.is_triplet; }));
      const int n_sq_items = static_cast<int>(items.size()) - n_lq_items;

      std::vector<std::vector<nn::Tensor>> item_grads(items.size());
      std::vector<double> item_loss(items.size(), 0.0);
      std::vector<int> item_correct(items.size(), 0);

#pragma omp parallel for schedule(dynamic)
      for (int64_t ii = 0; ii < static_cast<int64_t>(items.size()); ++ii) {
        const StepItem& it = items[static_cast<size_t>(ii)];
        const uint64_t iseed = derive_seed(
            ctx.seed, "item",
            (static_cast<uint64_t>(epoch) << 40) ^ (static_cast<uint64_t>(step) << 20) ^
                static_cast<uint64_t>(ii));
        nn::Graph g;
        nn::Var root;
        if (it.is_triplet) {
          const TripletClips& t = ds.triplets[static_cast<size_t>(it.index)];
          auto fa = audio::stft(train_crop(t.anchor, crop_frames, augment, derive_seed(iseed, "a")));
          auto fp = audio::stft(train_crop(t.positive, crop_frames, augment, derive_seed(iseed, "p")));
          auto fn = audio::stft(train_crop(t.negative, crop_frames, augment, derive_seed(iseed, "n")));
          auto oa = net.forward(g, net.input_from_features(g, fa), true);
          auto op = net.forward(g, net.input_from_features(g, fp), true);
          auto on = net.forward(g, net.input_from_features(g, fn), true);
          auto d_ap = metric::dfd_var(oa.lq_stack, op.lq_stack);
          auto d_an = metric::dfd_var(oa.lq_stack, on.lq_stack);
          auto hinge = nn::relu(nn::add_scalar(nn::sub(d_ap, d_an), static_cast<float>(delta)));
          item_correct[static_cast<size_t>(ii)] = d_ap.val()[0] < d_an.val()[0] ? 1 : 0;
          root = nn::scale(hinge, static_cast<float>(weights.w_lq / std::max(1, n_lq_items)));
        } else {
          const DoaItem& d = ds.doa[static_cast<size_t>(it.index)];
          auto f = audio::stft(train_crop(d.signal, crop_frames, augment, derive_seed(iseed, "d")));
          auto o = net.forward(g, net.input_from_features(g, f), true);
          auto az = use_emd
                        ? nn::emd2_softmax_timeavg(o.az_logits, az_labels[static_cast<size_t>(d.az_bin)])
                        : nn::xent_softmax_timeavg(o.az_logits, az_labels[static_cast<size_t>(d.az_bin)]);
          auto el = use_emd
                        ? nn::emd2_softmax_timeavg(o.el_logits, el_labels[static_cast<size_t>(d.el_bin)])
                        : nn::xent_softmax_timeavg(o.el_logits, el_labels[static_cast<size_t>(d.el_bin)]);
          root = nn::scale(nn::add(az, el), static_cast<float>(weights.w_sq / std::max(1, n_sq_items)));
        }
        item_loss[static_cast<size_t>(ii)] = root.val()[0];
        g.backward(root);
        auto grads = net.params().zero_grads();
        g.accumulate_param_grads(grads);
        item_grads[static_cast<size_t>(ii)] = std::move(grads);
      }

      // deterministic reduction in item order
      auto total_grads = net.params().zero_grads();
      for (const auto& gset : item_grads)
        for (size_t p = 0; p < gset.size(); ++p)
          for (int64_t j = 0; j < gset[p].numel(); ++j) total_grads[p][j] += gset[p][j];
      opt.step(total_grads);

      for (size_t ii = 0; ii < items.size(); ++ii) {
        epoch_loss += item_loss[ii];
        if (items[ii].is_triplet) {
          train_correct += item_correct[ii];
          ++train_total;
        }
      }
    }

    // light validation on training-sized windows for the log
    const double train_acc = train_total > 0 ? static_cast<double>(train_correct) / train_total : 0;
    log_rows.push_back({std::to_string(epoch), fmt_num(delta), fmt_num(epoch_loss / steps),
                        fmt_num(train_acc), "", ""});
    std::printf("[train] epoch %d/%d margin %.2f loss %.4f triplet-acc %.3f\n", epoch + 1, epochs,
                delta, epoch_loss / steps, train_acc);
    std::fflush(stdout);
  }

  // final held-out evaluation on full-length clips
  out.val_triplet_accuracy = val_trip.empty() ? 0.0 : triplet_accuracy(net, val_trip);
  out.val_doa_accuracy = val_doa.empty() ? 0.0 : doa_accuracy_az(net, val_doa, 2);
  if (!log_rows.empty()) {
    log_rows.back()[4] = fmt_num(out.val_triplet_accuracy);
    log_rows.back()[5] = fmt_num(out.val_doa_accuracy);
  }
  write_csv((fs::path(ctx.out_dir) / "training_log.csv").string(), log_rows);

  json meta;
  meta["seed"] = ctx.seed;
  meta["epochs"] = epochs;
  meta["weights"] = {weights.w_lq, weights.w_sq};
  meta["val_triplet_accuracy"] = out.val_triplet_accuracy;
  meta["val_doa_accuracy"] = out.val_doa_accuracy;
  meta["dataset"] = manifest;
  model::write_checkpoint(out.checkpoint, "saqam_net", mc.to_json(), meta.dump(), net.params());

  RunManifest m;
  m.command = command;
  m.seed = ctx.seed;
  m.version = SAQAM_VERSION;
  m.config = ctx.config.entries();
  m.outputs = {out.checkpoint, (fs::path(ctx.out_dir) / "training_log.csv").string()};
  m.status = "complete";
  write_manifest(ctx.out_dir, m);
  return out;
}

}  // namespace saqam::pipeline

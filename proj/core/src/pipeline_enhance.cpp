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
#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <numeric>

#include "saqam/audio/mix.hpp"
#include "saqam/audio/wav.hpp"
#include "saqam/enhance/losses.hpp"
#include "saqam/enhance/measures.hpp"
#include "saqam/enhance/unet.hpp"
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

const std::vector<std::string> kEnhanceTrainKeys = {
    "enhance.regime",        "enhance.n_clips",       "enhance.epochs",
    "enhance.batch",         "enhance.lr",            "enhance.crop_frames",
    "enhance.lambda",        "enhance.metric_checkpoint", "enhance.init_checkpoint",
    "enhance.finetune_combined", "unet.stem_channels", "unet.enc_channels",
    "unet.mask_bound",
};
const std::vector<std::string> kEnhanceEvalKeys = {
    "enhance.eval", "enhance.n_test", "enhance.write_examples",
};

enhance::UnetConfig unet_config_from_kv(const KvConfig& cfg) {
  enhance::UnetConfig c;
  c.stem_channels = cfg.get_int("unet.stem_channels", c.stem_channels);
  c.enc_channels = cfg.get_ints("unet.enc_channels", c.enc_channels);
  c.mask_bound = cfg.get_double("unet.mask_bound", c.mask_bound);
  c.validate();
  return c;
}

nn::Tensor wave_tensor(const audio::BinauralSignal& s) {
  nn::Tensor t = nn::Tensor::uninitialized({2, static_cast<int>(s.frames())});
  for (int c = 0; c < 2; ++c)
    std::copy(s.ch[static_cast<size_t>(c)].begin(), s.ch[static_cast<size_t>(c)].end(),
              t.v.begin() + static_cast<int64_t>(c) * s.frames());
  return t;
}

// matched random crop of a noisy/clean pair
std::pair<audio::BinauralSignal, audio::BinauralSignal> crop_pair(const EnhancePair& pair,
                                                                  int frames, uint64_t seed) {
  if (frames <= 0) return {pair.noisy, pair.clean};
  const int64_t want = static_cast<int64_t>(frames - 1) * 256 + 512;
  if (want >= pair.noisy.frames()) return {pair.noisy, pair.clean};
  Rng rng(derive_seed(seed, "crop"));
  const auto off = static_cast<int64_t>(rng.below(static_cast<uint64_t>(pair.noisy.frames() - want + 1)));
  return {pair.noisy.slice(off, want), pair.clean.slice(off, want)};
}

// optional external scorer: `cmd clean.wav test.wav` printing one number
double external_score(const char* env, const audio::BinauralSignal& clean,
                      const audio::BinauralSignal& test, const std::string& scratch_dir,
                      bool* available) {
  const char* cmd = std::getenv(env);
  if (cmd == nullptr || *cmd == '\0') {
    *available = false;
    return 0.0;
  }
  *available = true;
  const std::string c = scratch_dir + "/ref.wav", t = scratch_dir + "/test.wav";
  audio::write_wav(c, clean);
  audio::write_wav(t, test);
  const std::string full = std::string(cmd) + " " + c + " " + t + " > " + scratch_dir + "/score.txt";
  if (std::system(full.c_str()) != 0) throw IoError(std::string("external scorer failed: ") + cmd);
  std::ifstream in(scratch_dir + "/score.txt");
  double v = 0.0;
  if (!(in >> v)) throw FormatError(std::string(env) + " output was not a number");
  return v;
}

}  // namespace

std::vector<EnhancePair> make_enhance_set(int n_clips, uint64_t seed) {
  std::vector<EnhancePair> set(static_cast<size_t>(n_clips));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_clips; ++i) {
    const uint64_t cs = derive_seed(seed, "enh-clip", static_cast<uint64_t>(i));
    Rng rng(cs);
    auto utt = sim::synth_utterance(sim::kClipSeconds + 0.5, derive_seed(cs, "utt"));
    sim::Brir brir = sim::synth_brir(rng.uniform(-180.0, 180.0), rng.uniform(-30.0, 30.0),
                                     rng.uniform(0.05, 0.3), derive_seed(cs, "brir"));
    audio::BinauralSignal clean = sim::binauralize(utt, brir).crop_or_pad(sim::kClipSamples);
    const float peak = clean.peak();
    if (peak > 1e-6f)
      for (auto& ch : clean.ch)
        for (float& v : ch) v *= 0.25f / peak;

    auto noise_mono = sim::synth_noise(sim::kClipSeconds + 0.5,
                                       rng.coin() ? sim::NoiseColor::kWhite : sim::NoiseColor::kPink,
                                       derive_seed(cs, "noise"));
    sim::Brir nbrir = sim::synth_brir(rng.uniform(-180.0, 180.0), rng.uniform(-30.0, 30.0), 0.2,
                                      derive_seed(cs, "nbrir"));
    audio::BinauralSignal noise = sim::binauralize(noise_mono, nbrir);
    Rng mix_rng(derive_seed(cs, "mix"));
    const double snr = rng.uniform(-5.0, 10.0);
    EnhancePair pair;
    pair.clean = clean;
    pair.noisy = audio::mix_at_snr(clean, noise, snr, mix_rng);
    set[static_cast<size_t>(i)] = std::move(pair);
  }
  return set;
}

EnhanceTrainOutputs run_enhance_train(const RunContext& ctx) {
  const std::string command = "enhance-train";
  EnhanceTrainOutputs out;
  out.checkpoint = (fs::path(ctx.out_dir) / "unet.ckpt").string();
  if (!ctx.force && run_is_complete(ctx.out_dir, command)) {
    out.skipped = true;
    return out;
  }
  ctx.config.require_known(kEnhanceTrainKeys);
  if (ctx.workers > 0) omp_set_num_threads(ctx.workers);
  fs::create_directories(ctx.out_dir);

  const std::string regime = ctx.config.get_string("enhance.regime", "logmse");
  if (regime != "logmse" && regime != "scratch" && regime != "finetune")
    throw ConfigError("enhance.regime", "expected logmse|scratch|finetune");
  const int n_clips = ctx.config.get_int("enhance.n_clips", 600);
  const int epochs = ctx.config.get_int("enhance.epochs", 3);
  const int batch = ctx.config.get_int("enhance.batch", 8);
  const double lr = ctx.config.get_double("enhance.lr", 3e-4);
  const int crop_frames = ctx.config.get_int("enhance.crop_frames", 93);
  const double lambda = ctx.config.get_double("enhance.lambda", 1.0);
  const bool combined_finetune = ctx.config.get_bool("enhance.finetune_combined", false);
  const bool needs_metric = regime != "logmse";

  std::unique_ptr<model::SaqamNet> metric_net;
  if (needs_metric) {
    const std::string mpath = ctx.config.get_string("enhance.metric_checkpoint", "");
    if (mpath.empty())
      throw ConfigError("enhance.metric_checkpoint", "required for regime " + regime);
    metric_net = std::make_unique<model::SaqamNet>(load_metric_model(mpath));
  }

  enhance::UnetConfig uc = unet_config_from_kv(ctx.config);
  enhance::CrmUnet unet(uc, derive_seed(ctx.seed, "unet"));
  if (regime == "finetune") {
    const std::string init = ctx.config.get_string("enhance.init_checkpoint", "");
    if (init.empty()) throw ConfigError("enhance.init_checkpoint", "required for finetune");
    model::Checkpoint ck = model::read_checkpoint(init);
    if (ck.model_type != "crm_unet") throw FormatError(init + " is not a crm_unet checkpoint");
    model::load_params(unet.params(), ck);
  }
  nn::Adam opt(unet.params(), lr);

  std::vector<EnhancePair> data = make_enhance_set(n_clips, derive_seed(ctx.seed, "enh-train"));
  const auto& plan = audio::canonical_plan();

  for (int epoch = 0; epoch < epochs; ++epoch) {
    Rng order_rng(derive_seed(ctx.seed, "enh-order", static_cast<uint64_t>(epoch)));
    std::vector<int> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    for (size_t i = data.size() - 1; i > 0; --i)
      std::swap(order[i], order[order_rng.below(i + 1)]);

    double epoch_loss = 0.0;
    const int steps = (static_cast<int>(data.size()) + batch - 1) / batch;
    for (int step = 0; step < steps; ++step) {
      const int b0 = step * batch;
      const int b1 = std::min<int>(static_cast<int>(data.size()), b0 + batch);
      std::vector<std::vector<nn::Tensor>> item_grads(static_cast<size_t>(b1 - b0));
      std::vector<double> item_loss(static_cast<size_t>(b1 - b0), 0.0);

#pragma omp parallel for schedule(dynamic)
      for (int ii = 0; ii < b1 - b0; ++ii) {
        const uint64_t iseed = derive_seed(
            ctx.seed, "enh-item",
            (static_cast<uint64_t>(epoch) << 40) ^ (static_cast<uint64_t>(step) << 20) ^
                static_cast<uint64_t>(ii));
        auto [noisy, clean] = crop_pair(data[static_cast<size_t>(order[static_cast<size_t>(b0 + ii)])],
                                        crop_frames, iseed);
        nn::Graph g;
        auto noisy_leaf = g.leaf(wave_tensor(noisy), false);
        auto noisy_planes = nn::stft_complex(noisy_leaf, plan);
        auto clean_leaf = g.leaf(wave_tensor(clean), false);
        auto clean_planes = nn::stft_complex(clean_leaf, plan);
        auto mask = unet.forward(g, noisy_planes, true);
        auto masked = nn::complex_mul(mask, noisy_planes);

        nn::Var root;
        if (regime == "logmse") {
          root = enhance::logmse_loss(masked, clean_planes);
        } else {
          auto enhanced = nn::istft_waveform(masked, plan, noisy.frames());
          auto ls = enhance::saqam_loss(*metric_net, enhanced, wave_tensor(clean));
          if (regime == "scratch")
            root = nn::add(enhance::logmse_loss(masked, clean_planes),
                           nn::scale(ls, static_cast<float>(lambda)));
          else
            root = combined_finetune
                       ? nn::add(enhance::logmse_loss(masked, clean_planes),
                                 nn::scale(ls, static_cast<float>(lambda)))
                       : ls;
        }
        root = nn::scale(root, 1.0f / static_cast<float>(b1 - b0));
        item_loss[static_cast<size_t>(ii)] = root.val()[0];
        g.backward(root);
        auto grads = unet.params().zero_grads();
        g.accumulate_param_grads(grads);
        item_grads[static_cast<size_t>(ii)] = std::move(grads);
      }

      auto total = unet.params().zero_grads();
      for (const auto& gset : item_grads)
        for (size_t p = 0; p < gset.size(); ++p)
          for (int64_t j = 0; j < gset[p].numel(); ++j) total[p][j] += gset[p][j];
      opt.step(total);
      epoch_loss += std::accumulate(item_loss.begin(), item_loss.end(), 0.0);
    }
    std::printf("[enhance-train %s] epoch %d/%d loss %.4f\n", regime.c_str(), epoch + 1, epochs,
                epoch_loss / steps);
    std::fflush(stdout);
  }

  json meta;
  meta["regime"] = regime;
  meta["seed"] = ctx.seed;
  meta["epochs"] = epochs;
  meta["lambda"] = lambda;
  model::write_checkpoint(out.checkpoint, "crm_unet", uc.to_json(), meta.dump(), unet.params());

  RunManifest m;
  m.command = command;
  m.seed = ctx.seed;
  m.version = SAQAM_VERSION;
  m.config = ctx.config.entries();
  m.outputs = {out.checkpoint};
  m.status = "complete";
  write_manifest(ctx.out_dir, m);
  return out;
}

EnhanceEvalOutputs run_enhance_eval(const RunContext& ctx) {
  const std::string command = "enhance-eval";
  EnhanceEvalOutputs out;
  out.table_csv = (fs::path(ctx.out_dir) / "enhancement_table.csv").string();
  if (!ctx.force && run_is_complete(ctx.out_dir, command)) {
    out.skipped = true;
    return out;
  }
  ctx.config.require_known(kEnhanceEvalKeys);
  if (ctx.workers > 0) omp_set_num_threads(ctx.workers);
  fs::create_directories(ctx.out_dir);

  const int n_test = ctx.config.get_int("enhance.n_test", 67);
  std::vector<EnhancePair> test = make_enhance_set(n_test, derive_seed(ctx.seed, "enh-test"));

  struct Row {
    std::string name;
    std::unique_ptr<enhance::CrmUnet> unet;  // null for the Noisy row
  };
  std::vector<Row> rows;
  rows.push_back({"Noisy", nullptr});
  for (const auto& spec_entry : ctx.config.get_list("enhance.eval", {})) {
    const auto colon = spec_entry.find(':');
    if (colon == std::string::npos)
      throw ConfigError("enhance.eval", "expected Name:checkpoint, got '" + spec_entry + "'");
    const std::string name = spec_entry.substr(0, colon);
    const std::string path = spec_entry.substr(colon + 1);
    model::Checkpoint ck = model::read_checkpoint(path);
    if (ck.model_type != "crm_unet") throw FormatError(path + " is not a crm_unet checkpoint");
    auto unet = std::make_unique<enhance::CrmUnet>(enhance::UnetConfig::from_json(ck.config_json),
                                                   0);
    model::load_params(unet->params(), ck);
    rows.push_back({name, std::move(unet)});
  }

  bool pesq_available = false, stoi_available = false;
  std::vector<std::vector<std::string>> table = {{"name", "l2", "mrstft", "si_sdr_db"}};
  for (auto& row : rows) {
    std::vector<enhance::Measures> ms(test.size());
    std::vector<double> pesq(test.size(), 0.0), stoi(test.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int64_t i = 0; i < static_cast<int64_t>(test.size()); ++i) {
      const auto& pair = test[static_cast<size_t>(i)];
      audio::BinauralSignal output =
          row.unet ? enhance_forward(*row.unet, pair.noisy).second : pair.noisy;
      ms[static_cast<size_t>(i)] = enhance::measures(output, pair.clean);
    }
    // external hooks run serially (they shell out)
    for (size_t i = 0; i < test.size() && i < 8; ++i) {
      const auto& pair = test[i];
      audio::BinauralSignal output =
          row.unet ? enhance_forward(*row.unet, pair.noisy).second : pair.noisy;
      bool avail = false;
      const double p = external_score("SAQAM_PESQ_CMD", pair.clean, output, ctx.out_dir, &avail);
      if (avail) {
        pesq_available = true;
        pesq[i] = p;
      }
      const double s = external_score("SAQAM_STOI_CMD", pair.clean, output, ctx.out_dir, &avail);
      if (avail) {
        stoi_available = true;
        stoi[i] = s;
      }
      if (!pesq_available && !stoi_available) break;
    }
    enhance::Measures mean;
    for (const auto& m2 : ms) {
      mean.l2 += m2.l2 / static_cast<double>(ms.size());
      mean.si_sdr_db += m2.si_sdr_db / static_cast<double>(ms.size());
      mean.mrstft += m2.mrstft / static_cast<double>(ms.size());
    }
    out.row_names.push_back(row.name);
    out.l2.push_back(mean.l2);
    out.mrstft.push_back(mean.mrstft);
    out.si_sdr_db.push_back(mean.si_sdr_db);
    table.push_back({row.name, fmt_num(mean.l2), fmt_num(mean.mrstft), fmt_num(mean.si_sdr_db)});
  }
  if (pesq_available) table[0].push_back("pesq");
  if (stoi_available) table[0].push_back("stoi");
  write_csv(out.table_csv, table);

  if (ctx.config.get_bool("enhance.write_examples", false) && !test.empty()) {
    audio::write_wav((fs::path(ctx.out_dir) / "example_noisy.wav").string(), test[0].noisy);
    audio::write_wav((fs::path(ctx.out_dir) / "example_clean.wav").string(), test[0].clean);
    for (auto& row : rows)
      if (row.unet)
        audio::write_wav((fs::path(ctx.out_dir) / ("example_" + row.name + ".wav")).string(),
                         enhance_forward(*row.unet, test[0].noisy).second);
  }

  RunManifest m;
  m.command = command;
  m.seed = ctx.seed;
  m.version = SAQAM_VERSION;
  m.config = ctx.config.entries();
  m.outputs = {out.table_csv};
  m.status = "complete";
  write_manifest(ctx.out_dir, m);
  return out;
}

}  // namespace saqam::pipeline

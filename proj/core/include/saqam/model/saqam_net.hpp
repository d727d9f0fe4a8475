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

#ifndef SAQAM_MODEL_SAQAM_NET_HPP_
#define SAQAM_MODEL_SAQAM_NET_HPP_

#include <string>
#include <utility>
#include <vector>

#include "saqam/audio/stft.hpp"
#include "saqam/loss/kernels.hpp"
#include "saqam/model/config.hpp"
#include "saqam/nn/adam.hpp"
#include "saqam/nn/ops.hpp"
#include "saqam/nn/params.hpp"
#include "saqam/nn/signal_ops.hpp"
#include "saqam/util/rng.hpp"

namespace saqam::model {

template <typename S>
using NamedStack = std::vector<std::pair<std::string, nn::VarT<S>>>;

template <typename S>
struct ForwardOutT {
  nn::VarT<S> lq_frames;     // (lq_embed_dim, T)
  nn::VarT<S> lq_embedding;  // (lq_embed_dim,)
  nn::VarT<S> az_logits;     // (az_bins, T)
  nn::VarT<S> el_logits;     // (el_bins, T)
  NamedStack<S> body_stack;  // temporal aggregation block outputs
  NamedStack<S> lq_stack;    // listening-quality head layers
  NamedStack<S> sq_stack;    // spatialization head layers
};

// Shared-body multi-task network: Inception-style feature extraction over
// (channel, frequency, time) maps, dilated-TCN temporal aggregation, and two
// task heads emitting framewise outputs. The time axis is never pooled.
template <typename S>
class SaqamNetT {
 public:
  SaqamNetT(ModelConfig cfg, uint64_t seed) : cfg_(std::move(cfg)) {
    cfg_.validate();
    plan_ = audio::StftPlanT<S>::make(cfg_.fft_size, cfg_.hop, audio::Window::kHamming);
    Rng rng(derive_seed(seed, "model-init"));
    build(rng);
  }

  const ModelConfig& config() const { return cfg_; }
  nn::ParamStoreT<S>& params() { return params_; }
  const nn::ParamStoreT<S>& params() const { return params_; }
  const audio::StftPlanT<S>& plan() const { return plan_; }
  int64_t param_count() const { return params_.total_elements(); }

  // (4, F, T) input planes from precomputed features (no waveform gradient).
  nn::VarT<S> input_from_features(nn::GraphT<S>& g, const audio::SpectroFeatures& f) const {
    f.validate();
    if (f.fft_size != cfg_.fft_size || f.hop != cfg_.hop)
      throw ContractError("features do not match model front-end");
    const int fb = f.bins(), t = f.frames();
    nn::TensorT<S> planes({4, fb, t});
    const int64_t plane = static_cast<int64_t>(fb) * t;
    for (int64_t i = 0; i < 2 * plane; ++i) {
      planes.v[static_cast<size_t>(i)] = static_cast<S>(f.mag.v[static_cast<size_t>(i)]);
      planes.v[static_cast<size_t>(2 * plane + i)] = static_cast<S>(f.phase.v[static_cast<size_t>(i)]);
    }
    if (!planes.all_finite()) throw NumericError("non-finite values in model input");
    return g.leaf(std::move(planes), false);
  }

  // Differentiable front-end from a (2, N) waveform var.
  nn::VarT<S> input_from_waveform(nn::GraphT<S>& g, nn::VarT<S> wave) const {
    auto c4 = nn::stft_complex(wave, plan_);
    auto mag = nn::mag_planes(c4);
    auto phase = nn::phase_planes(c4);
    return nn::concat_ch<S>({mag, phase});
  }

  ForwardOutT<S> forward(nn::GraphT<S>& g, nn::VarT<S> planes, bool train_params) const {
    if (planes.val().rank() != 3 || planes.val().dim(0) != 4)
      throw ContractError("forward expects (4, F, T) planes");
    if (planes.val().dim(1) != cfg_.bins()) throw ContractError("frequency extent mismatch");
    std::vector<nn::VarT<S>> pv = params_.bind(g, train_params);
    auto conv = [&](nn::VarT<S> x, const ConvIds& c, nn::Conv2dOpts o = {}) {
      return nn::conv2d(x, pv[static_cast<size_t>(c.w)], pv[static_cast<size_t>(c.b)], o);
    };

    // input conditioning: optional magnitude compression, ablation masking
    auto mag = nn::slice_ch(planes, 0, 2);
    auto phase = nn::slice_ch(planes, 2, 4);
    if (cfg_.log_mag_compression) mag = nn::log1p_op(mag);
    if (cfg_.input_mode == InputMode::kPhaseOnly) mag = nn::scale(mag, S(0));
    if (cfg_.input_mode == InputMode::kMagOnly) phase = nn::scale(phase, S(0));
    auto x = nn::concat_ch<S>({mag, phase});

    // feature extraction
    for (const auto& blk : inception_) {
      auto b1 = nn::leaky_relu(conv(x, blk.b1));
      auto b3 = nn::leaky_relu(conv(x, blk.b3));
      auto b5 = nn::leaky_relu(conv(x, blk.b5));
      auto cat = nn::concat_ch<S>({b1, b3, b5});
      auto mp = nn::maxpool2d(cat, {3, 3, 1, 1, 1, 1, false});
      x = nn::maxpool2d(mp, {2, 1, 2, 1, 0, 0, true});
    }

    // collapse the residual frequency axis into channels
    const int t = x.val().dim(2);
    x = nn::reshape(x, {x.val().dim(0) * x.val().dim(1), 1, t});

    // temporal aggregation
    ForwardOutT<S> out;
    for (size_t bi = 0; bi < tcn_.size(); ++bi) {
      const TcnIds& blk = tcn_[bi];
      nn::Conv2dOpts dil{1, 1, 1, cfg_.tcn_dilations[bi]};
      auto wnconv = [&](nn::VarT<S> in, const WnConvIds& c) {
        auto w = nn::weight_norm(pv[static_cast<size_t>(c.v)], pv[static_cast<size_t>(c.g)]);
        return nn::conv2d(in, w, pv[static_cast<size_t>(c.b)], dil);
      };
      auto h = nn::leaky_relu(wnconv(x, blk.c1));
      h = wnconv(h, blk.c2);
      auto res = blk.has_proj ? conv(x, blk.proj) : x;
      x = nn::leaky_relu(nn::add(h, res));
      out.body_stack.emplace_back("body/tcn" + std::to_string(bi + 1), x);
    }

    // listening-quality head
    auto lqh = nn::leaky_relu(conv(x, lq_hidden_));
    auto lqf = conv(lqh, lq_out_);
    out.lq_frames = nn::reshape(lqf, {cfg_.lq_embed_dim, t});
    out.lq_embedding = nn::mean_last(out.lq_frames);
    out.lq_stack.emplace_back("lq/hidden", lqh);
    out.lq_stack.emplace_back("lq/frames", lqf);

    // spatialization head
    auto sqh = nn::leaky_relu(conv(x, sq_hidden_));
    out.az_logits = nn::reshape(conv(sqh, sq_az_), {cfg_.az_bins, t});
    out.el_logits = nn::reshape(conv(sqh, sq_el_), {cfg_.el_bins, t});
    out.sq_stack.emplace_back("sq/hidden", sqh);
    if (cfg_.stacks_include_logits) {
      out.sq_stack.emplace_back("sq/az_logits", out.az_logits);
      out.sq_stack.emplace_back("sq/el_logits", out.el_logits);
    }
    return out;
  }

  struct DoaPrediction {
    std::vector<int> az_frames, el_frames;
    int az_clip = 0, el_clip = 0;
  };

  // Framewise argmax over softmaxed logits; clip-level prediction is the
  // argmax of the frame-averaged distribution. Ties break to the lowest bin.
  DoaPrediction predict_doa(const audio::SpectroFeatures& features) const {
    nn::GraphT<S> g;
    auto out = forward(g, input_from_features(g, features), false);
    DoaPrediction pred;
    pred.az_clip = decode(out.az_logits.val(), &pred.az_frames);
    pred.el_clip = decode(out.el_logits.val(), &pred.el_frames);
    return pred;
  }

 private:
  struct ConvIds {
    int w = -1, b = -1;
  };
  struct WnConvIds {
    int v = -1, g = -1, b = -1;
  };
  struct IncIds {
    ConvIds b1, b3, b5;
  };
  struct TcnIds {
    WnConvIds c1, c2;
    ConvIds proj;
    bool has_proj = false;
  };

  ConvIds add_conv(const std::string& name, int out_ch, int in_ch, int kf, int kt, Rng& rng) {
    ConvIds ids;
    ids.w = params_.add(name + "/w",
                        nn::he_normal<S>({out_ch, in_ch, kf, kt},
                                         static_cast<int64_t>(in_ch) * kf * kt, rng));
    ids.b = params_.add(name + "/b", nn::TensorT<S>::zeros({out_ch}));
    return ids;
  }

  WnConvIds add_wn_conv(const std::string& name, int out_ch, int in_ch, int kt, Rng& rng) {
    WnConvIds ids;
    nn::TensorT<S> v = nn::he_normal<S>({out_ch, in_ch, 1, kt},
                                        static_cast<int64_t>(in_ch) * kt, rng);
    nn::TensorT<S> gains({out_ch});
    const int64_t inner = v.numel() / out_ch;
    for (int o = 0; o < out_ch; ++o) {
      double ss = 0.0;
      for (int64_t i = 0; i < inner; ++i) {
        double val = v.v[static_cast<size_t>(o * inner + i)];
        ss += val * val;
      }
      gains[o] = static_cast<S>(std::sqrt(ss));  // identity reparameterization at init
    }
    ids.v = params_.add(name + "/v", std::move(v));
    ids.g = params_.add(name + "/g", std::move(gains));
    ids.b = params_.add(name + "/b", nn::TensorT<S>::zeros({out_ch}));
    return ids;
  }

  void build(Rng& rng) {
    const int w3 = cfg_.inception_width / 3;
    const int w1 = cfg_.inception_width - 2 * w3;
    int in_ch = cfg_.input_channels;
    for (int b = 0; b < cfg_.inception_blocks; ++b) {
      const std::string base = "inc" + std::to_string(b + 1);
      IncIds blk;
      blk.b1 = add_conv(base + "/b1x1", w1, in_ch, 1, 1, rng);
      blk.b3 = add_conv(base + "/b3x3", w3, in_ch, 3, 3, rng);
      blk.b5 = add_conv(base + "/b5x5", w3, in_ch, 5, 5, rng);
      inception_.push_back(blk);
      in_ch = cfg_.inception_width;
    }
    int ch = cfg_.inception_width * cfg_.freq_after_body();
    for (int b = 0; b < cfg_.tcn_blocks; ++b) {
      const std::string base = "tcn" + std::to_string(b + 1);
      const int out_ch = cfg_.tcn_channels[static_cast<size_t>(b)];
      TcnIds blk;
      blk.c1 = add_wn_conv(base + "/conv1", out_ch, ch, cfg_.tcn_kernel, rng);
      blk.c2 = add_wn_conv(base + "/conv2", out_ch, out_ch, cfg_.tcn_kernel, rng);
      blk.has_proj = ch != out_ch;
      if (blk.has_proj) blk.proj = add_conv(base + "/proj", out_ch, ch, 1, 1, rng);
      tcn_.push_back(blk);
      ch = out_ch;
    }
    lq_hidden_ = add_conv("lq/hidden", cfg_.head_hidden, ch, 1, 1, rng);
    lq_out_ = add_conv("lq/out", cfg_.lq_embed_dim, cfg_.head_hidden, 1, 1, rng);
    sq_hidden_ = add_conv("sq/hidden", cfg_.head_hidden, ch, 1, 1, rng);
    sq_az_ = add_conv("sq/az", cfg_.az_bins, cfg_.head_hidden, 1, 1, rng);
    sq_el_ = add_conv("sq/el", cfg_.el_bins, cfg_.head_hidden, 1, 1, rng);
  }

  static int decode(const nn::TensorT<S>& logits, std::vector<int>* frames) {
    const int c = logits.dim(0), t = logits.dim(1);
    std::vector<S> col(static_cast<size_t>(c)), prob(static_cast<size_t>(c));
    std::vector<double> mean_prob(static_cast<size_t>(c), 0.0);
    frames->resize(static_cast<size_t>(t));
    for (int ti = 0; ti < t; ++ti) {
      for (int ci = 0; ci < c; ++ci) col[static_cast<size_t>(ci)] = logits.v[static_cast<size_t>(ci) * t + ti];
      loss::softmax(col.data(), c, prob.data());
      int best = 0;
      for (int ci = 1; ci < c; ++ci)
        if (prob[static_cast<size_t>(ci)] > prob[static_cast<size_t>(best)]) best = ci;
      (*frames)[static_cast<size_t>(ti)] = best;
      for (int ci = 0; ci < c; ++ci) mean_prob[static_cast<size_t>(ci)] += prob[static_cast<size_t>(ci)];
    }
    int best = 0;
    for (int ci = 1; ci < c; ++ci)
      if (mean_prob[static_cast<size_t>(ci)] > mean_prob[static_cast<size_t>(best)]) best = ci;
    return best;
  }

  ModelConfig cfg_;
  audio::StftPlanT<S> plan_;
  nn::ParamStoreT<S> params_;
  std::vector<IncIds> inception_;
  std::vector<TcnIds> tcn_;
  ConvIds lq_hidden_, lq_out_, sq_hidden_, sq_az_, sq_el_;
};

using SaqamNet = SaqamNetT<float>;

}  // namespace saqam::model

#endif  // SAQAM_MODEL_SAQAM_NET_HPP_

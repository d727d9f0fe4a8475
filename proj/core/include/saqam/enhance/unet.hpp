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

#ifndef SAQAM_ENHANCE_UNET_HPP_
#define SAQAM_ENHANCE_UNET_HPP_

#include <string>
#include <vector>

#include "saqam/audio/signal.hpp"
#include "saqam/audio/stft.hpp"
#include "saqam/nn/ops.hpp"
#include "saqam/nn/params.hpp"
#include "saqam/nn/signal_ops.hpp"
#include "saqam/util/rng.hpp"

namespace saqam::enhance {

// Complex ratio mask for both channels: planes [re_L, im_L, re_R, im_R],
// each component bounded by tanh scaled to [-mask_bound, mask_bound].
struct ComplexRatioMask {
  nn::Tensor planes;  // (4, F, T)
};

struct UnetConfig {
  int stem_channels = 16;
  std::vector<int> enc_channels = {24, 32, 48, 64};  // 4 downsampling levels
  double mask_bound = 2.0;
  int fft_size = 512;
  int hop = 256;

  int bins() const { return fft_size / 2 + 1; }
  void validate() const;
  std::string to_json() const;
  static UnetConfig from_json(const std::string& text);
};

// Encoder/decoder over (channel, frequency, time) maps with stride-2
// frequency downsampling, nearest-neighbor upsampling, and skip
// concatenation. Time resolution is preserved throughout.
template <typename S>
class CrmUnetT {
 public:
  CrmUnetT(UnetConfig cfg, uint64_t seed) : cfg_(std::move(cfg)) {
    cfg_.validate();
    plan_ = audio::StftPlanT<S>::make(cfg_.fft_size, cfg_.hop, audio::Window::kHamming);
    Rng rng(derive_seed(seed, "unet-init"));
    const int n_levels = static_cast<int>(cfg_.enc_channels.size());
    stem_ = add_conv("stem", cfg_.stem_channels, 4, rng);
    int ch = cfg_.stem_channels;
    for (int i = 0; i < n_levels; ++i) {
      enc_.push_back(add_conv("enc" + std::to_string(i + 1), cfg_.enc_channels[static_cast<size_t>(i)], ch, rng));
      ch = cfg_.enc_channels[static_cast<size_t>(i)];
    }
    bottleneck_ = add_conv("bottleneck", ch, ch, rng);
    for (int i = n_levels - 1; i >= 0; --i) {
      const int skip_ch = i > 0 ? cfg_.enc_channels[static_cast<size_t>(i - 1)] : cfg_.stem_channels;
      const int out_ch = skip_ch;
      dec_.push_back(add_conv("dec" + std::to_string(i + 1), out_ch, ch + skip_ch, rng));
      ch = out_ch;
    }
    head_ = add_conv("head", 4, ch, rng);
  }

  const UnetConfig& config() const { return cfg_; }
  nn::ParamStoreT<S>& params() { return params_; }
  const nn::ParamStoreT<S>& params() const { return params_; }
  const audio::StftPlanT<S>& plan() const { return plan_; }
  int64_t param_count() const { return params_.total_elements(); }

  // (4, F, T) complex input planes -> (4, F, T) bounded mask planes.
  nn::VarT<S> forward(nn::GraphT<S>& g, nn::VarT<S> c4, bool train_params) const {
    if (c4.val().rank() != 3 || c4.val().dim(0) != 4 || c4.val().dim(1) != cfg_.bins())
      throw ContractError("unet forward expects (4, F, T) complex planes");
    std::vector<nn::VarT<S>> pv = params_.bind(g, train_params);
    auto conv = [&](nn::VarT<S> x, const ConvIds& c, nn::Conv2dOpts o = {}) {
      return nn::leaky_relu(
          nn::conv2d(x, pv[static_cast<size_t>(c.w)], pv[static_cast<size_t>(c.b)], o));
    };
    std::vector<nn::VarT<S>> skips;
    auto x = conv(c4, stem_);
    skips.push_back(x);
    for (const auto& ids : enc_) {
      x = conv(x, ids, {2, 1, 1, 1});
      skips.push_back(x);
    }
    x = conv(x, bottleneck_);
    for (size_t d = 0; d < dec_.size(); ++d) {
      const auto& skip = skips[skips.size() - 2 - d];
      auto up = nn::upsample_freq2(x);
      up = nn::crop_freq(up, skip.val().dim(1));
      x = conv(nn::concat_ch<S>({up, skip}), dec_[d]);
    }
    auto raw = nn::conv2d(x, pv[static_cast<size_t>(head_.w)], pv[static_cast<size_t>(head_.b)]);
    return nn::scale(nn::tanh_op(raw), static_cast<S>(cfg_.mask_bound));
  }

 private:
  struct ConvIds {
    int w = -1, b = -1;
  };

  ConvIds add_conv(const std::string& name, int out_ch, int in_ch, Rng& rng) {
    ConvIds ids;
    ids.w = params_.add(name + "/w",
                        nn::he_normal<S>({out_ch, in_ch, 3, 3}, static_cast<int64_t>(in_ch) * 9, rng));
    ids.b = params_.add(name + "/b", nn::TensorT<S>::zeros({out_ch}));
    return ids;
  }

  UnetConfig cfg_;
  audio::StftPlanT<S> plan_;
  nn::ParamStoreT<S> params_;
  ConvIds stem_, bottleneck_, head_;
  std::vector<ConvIds> enc_, dec_;
};

using CrmUnet = CrmUnetT<float>;

// Apply a mask to a noisy signal: complex multiplication in the STFT domain
// followed by weighted overlap-add back to the waveform.
audio::BinauralSignal apply_mask(const ComplexRatioMask& mask, const audio::BinauralSignal& noisy);

// Run the network on a noisy input and synthesize the enhanced waveform.
// Output length equals input length.
std::pair<ComplexRatioMask, audio::BinauralSignal> enhance_forward(
    const CrmUnet& unet, const audio::BinauralSignal& noisy);

// Ideal complex ratio mask clean/noisy (magnitude clamped to the config
// bound); the oracle upper bound for mask-based enhancement.
ComplexRatioMask ideal_mask(const audio::BinauralSignal& noisy, const audio::BinauralSignal& clean,
                            double bound = 2.0);

}  // namespace saqam::enhance

#endif  // SAQAM_ENHANCE_UNET_HPP_

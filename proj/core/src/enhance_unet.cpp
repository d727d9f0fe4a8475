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

#include "saqam/enhance/unet.hpp"

#include <json.hpp>

namespace saqam::enhance {

using nlohmann::json;

void UnetConfig::validate() const {
  if (stem_channels < 1) throw ConfigError("unet.stem_channels", "must be >= 1");
  if (enc_channels.empty()) throw ConfigError("unet.enc_channels", "needs at least one level");
  for (int c : enc_channels)
    if (c < 1) throw ConfigError("unet.enc_channels", "entries must be >= 1");
  if (mask_bound <= 0) throw ConfigError("unet.mask_bound", "must be > 0");
  if (fft_size < 16 || (fft_size & (fft_size - 1)) != 0)
    throw ConfigError("unet.fft_size", "must be a power of two >= 16");
  if (hop < 1 || hop > fft_size) throw ConfigError("unet.hop", "must be in [1, fft_size]");
  int f = bins();
  for (size_t i = 0; i < enc_channels.size(); ++i) f = (f + 1) / 2;
  if (f < 2) throw ConfigError("unet.enc_channels", "too many levels for the spectrum");
}

std::string UnetConfig::to_json() const {
  json j;
  j["stem_channels"] = stem_channels;
  j["enc_channels"] = enc_channels;
  j["mask_bound"] = mask_bound;
  j["fft_size"] = fft_size;
  j["hop"] = hop;
  return j.dump();
}

UnetConfig UnetConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  UnetConfig c;
  c.stem_channels = j.at("stem_channels").get<int>();
  c.enc_channels = j.at("enc_channels").get<std::vector<int>>();
  c.mask_bound = j.at("mask_bound").get<double>();
  c.fft_size = j.at("fft_size").get<int>();
  c.hop = j.at("hop").get<int>();
  c.validate();
  return c;
}

namespace {

nn::Tensor complex_planes(const audio::BinauralSignal& x) {
  auto feats = audio::stft(x);
  const int f = feats.bins(), t = feats.frames();
  nn::Tensor out = nn::Tensor::uninitialized({4, f, t});
  const int64_t plane = static_cast<int64_t>(f) * t;
  for (int c = 0; c < 2; ++c)
    for (int64_t i = 0; i < plane; ++i) {
      const float m = feats.mag.v[static_cast<size_t>(c * plane + i)];
      const float p = feats.phase.v[static_cast<size_t>(c * plane + i)];
      out.v[static_cast<size_t>((2 * c) * plane + i)] = m * std::cos(p);
      out.v[static_cast<size_t>((2 * c + 1) * plane + i)] = m * std::sin(p);
    }
  return out;
}

}  // namespace

audio::BinauralSignal apply_mask(const ComplexRatioMask& mask, const audio::BinauralSignal& noisy) {
  nn::Graph g;
  auto noisy_leaf = g.leaf(nn::Tensor({2, static_cast<int>(noisy.frames())}), false);
  for (int c = 0; c < 2; ++c)
    std::copy(noisy.ch[static_cast<size_t>(c)].begin(), noisy.ch[static_cast<size_t>(c)].end(),
              g.value(noisy_leaf.id).v.begin() + static_cast<int64_t>(c) * noisy.frames());
  auto spec = nn::stft_complex(noisy_leaf, audio::canonical_plan());
  if (!mask.planes.same_shape(spec.val())) throw ContractError("mask/spectrogram shape mismatch");
  auto mask_leaf = g.leaf(mask.planes, false);
  auto masked = nn::complex_mul(mask_leaf, spec);
  auto wave = nn::istft_waveform(masked, audio::canonical_plan(), noisy.frames());
  audio::BinauralSignal out(noisy.frames(), noisy.sample_rate);
  const auto& wv = wave.val();
  for (int c = 0; c < 2; ++c)
    std::copy_n(wv.v.begin() + static_cast<int64_t>(c) * noisy.frames(), noisy.frames(),
                out.ch[static_cast<size_t>(c)].begin());
  return out;
}

std::pair<ComplexRatioMask, audio::BinauralSignal> enhance_forward(
    const CrmUnet& unet, const audio::BinauralSignal& noisy) {
  if (noisy.frames() < audio::kSampleRate) throw DataError("enhance input must be >= 1 s");
  noisy.validate();
  nn::Graph g;
  auto planes = g.leaf(complex_planes(noisy), false);
  if (!g.value(planes.id).all_finite()) throw NumericError("non-finite spectrogram");
  auto mask_var = unet.forward(g, planes, false);
  ComplexRatioMask mask{mask_var.val()};
  return {mask, apply_mask(mask, noisy)};
}

ComplexRatioMask ideal_mask(const audio::BinauralSignal& noisy, const audio::BinauralSignal& clean,
                            double bound) {
  nn::Tensor ns = complex_planes(noisy);
  nn::Tensor cs = complex_planes(clean);
  if (!ns.same_shape(cs)) throw ContractError("ideal_mask: shape mismatch");
  ComplexRatioMask mask;
  mask.planes = nn::Tensor(ns.shape);
  const int64_t plane = ns.numel() / 4;
  for (int c = 0; c < 2; ++c)
    for (int64_t i = 0; i < plane; ++i) {
      const double nr = ns.v[static_cast<size_t>((2 * c) * plane + i)];
      const double ni = ns.v[static_cast<size_t>((2 * c + 1) * plane + i)];
      const double cr = cs.v[static_cast<size_t>((2 * c) * plane + i)];
      const double ci = cs.v[static_cast<size_t>((2 * c + 1) * plane + i)];
      const double den = nr * nr + ni * ni + 1e-12;
      double mr = (cr * nr + ci * ni) / den;
      double mi = (ci * nr - cr * ni) / den;
      const double mag = std::sqrt(mr * mr + mi * mi);
      if (mag > bound) {
        mr *= bound / mag;
        mi *= bound / mag;
      }
      mask.planes.v[static_cast<size_t>((2 * c) * plane + i)] = static_cast<float>(mr);
      mask.planes.v[static_cast<size_t>((2 * c + 1) * plane + i)] = static_cast<float>(mi);
    }
  return mask;
}

}  // namespace saqam::enhance

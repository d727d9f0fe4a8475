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

#include "saqam/sim/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "saqam/audio/mix.hpp"
#include "saqam/audio/resample.hpp"
#include "saqam/audio/stft.hpp"
#include "saqam/sim/brir.hpp"
#include "saqam/util/errors.hpp"
#include "saqam/util/rng.hpp"

namespace saqam::sim {

namespace {

double princarg(double phi) {
  return phi - 2.0 * M_PI * std::round(phi / (2.0 * M_PI));
}

void check_level(Perturbation kind, double level) {
  const LevelRange r = level_range(kind);
  const bool open_low = kind == Perturbation::kClip;
  const bool open_high = kind == Perturbation::kResample;
  const bool ok = (open_low ? level > r.lo : level >= r.lo) &&
                  (open_high ? level < r.hi : level <= r.hi);
  if (!ok || !std::isfinite(level))
    throw DomainError("level " + std::to_string(level) + " outside range of " + to_string(kind));
}

audio::BinauralSignal crop_pad_like(audio::BinauralSignal s, const audio::BinauralSignal& ref) {
  if (s.frames() == ref.frames()) return s;
  return s.crop_or_pad(ref.frames());
}

audio::BinauralSignal apply_additive(const audio::BinauralSignal& x, double snr_db, uint64_t seed) {
  Rng gen(derive_seed(seed, "perturb-noise"));
  std::vector<float> mono(static_cast<size_t>(x.frames()));
  for (auto& v : mono) v = static_cast<float>(gen.normal());
  Rng mix_rng(derive_seed(seed, "perturb-mix"));
  return audio::mix_at_snr(x, audio::BinauralSignal::from_mono(std::move(mono)), snr_db, mix_rng);
}

audio::BinauralSignal apply_binaural_noise(const audio::BinauralSignal& x, double snr_db,
                                           uint64_t seed) {
  Rng gen(derive_seed(seed, "perturb-binnoise"));
  const double az = gen.uniform(-180.0, 180.0);
  const double el = gen.uniform(-40.0, 40.0);
  Brir brir = synth_brir(az, el, 0.2, derive_seed(seed, "perturb-binnoise-brir"));
  const auto n = static_cast<size_t>(x.frames());
  std::vector<float> nl(n), nr(n);
  for (auto& v : nl) v = static_cast<float>(gen.normal());
  for (auto& v : nr) v = static_cast<float>(gen.normal());
  audio::BinauralSignal noise;
  noise.ch[0] = convolve(nl, brir.left_ir, x.frames());
  noise.ch[1] = convolve(nr, brir.right_ir, x.frames());
  Rng mix_rng(derive_seed(seed, "perturb-mix"));
  return audio::mix_at_snr(x, noise, snr_db, mix_rng);
}

audio::BinauralSignal apply_clip(const audio::BinauralSignal& x, double threshold) {
  audio::BinauralSignal out = x;
  const float t = static_cast<float>(threshold);
  for (auto& c : out.ch)
    for (float& v : c) v = std::clamp(v, -t, t);
  return out;
}

audio::BinauralSignal apply_freq_mask(const audio::BinauralSignal& x, int width, uint64_t seed) {
  auto feats = audio::stft(x);
  const int f = feats.bins(), t = feats.frames();
  const int start = freq_mask_start(width, f, seed);
  for (int c = 0; c < 2; ++c)
    for (int k = start; k < start + width; ++k)
      for (int fr = 0; fr < t; ++fr)
        feats.mag.v[static_cast<size_t>((static_cast<int64_t>(c) * f + k) * t + fr)] = 0.0f;
  return audio::istft(feats, x.frames());
}

audio::BinauralSignal apply_resample(const audio::BinauralSignal& x, double factor) {
  const int inter = static_cast<int>(std::lround(factor * audio::kSampleRate));
  audio::BinauralSignal out;
  out.sample_rate = audio::kSampleRate;
  for (int c = 0; c < 2; ++c) {
    auto down = audio::resample(x.ch[static_cast<size_t>(c)], audio::kSampleRate, inter);
    out.ch[static_cast<size_t>(c)] = audio::resample(down, inter, audio::kSampleRate);
  }
  return crop_pad_like(std::move(out), x);
}

audio::BinauralSignal apply_pitch_shift(const audio::BinauralSignal& x, double semitones) {
  const double beta = std::pow(2.0, semitones / 12.0);
  if (std::abs(beta - 1.0) < 1e-9) return x;
  audio::BinauralSignal out;
  out.sample_rate = audio::kSampleRate;
  for (int c = 0; c < 2; ++c) {
    auto stretched = stretch_channel(x.ch[static_cast<size_t>(c)], beta);
    out.ch[static_cast<size_t>(c)] = audio::resample(
        stretched, audio::kSampleRate, static_cast<int>(std::lround(audio::kSampleRate / beta)));
  }
  auto n = std::min(out.ch[0].size(), out.ch[1].size());
  out.ch[0].resize(n);
  out.ch[1].resize(n);
  return crop_pad_like(std::move(out), x);
}

}  // namespace

Perturbation perturbation_from_string(const std::string& name) {
  if (name == "additive_noise") return Perturbation::kAdditiveNoise;
  if (name == "clip") return Perturbation::kClip;
  if (name == "freq_mask") return Perturbation::kFreqMask;
  if (name == "resample") return Perturbation::kResample;
  if (name == "pitch_shift") return Perturbation::kPitchShift;
  if (name == "binaural_noise") return Perturbation::kBinauralNoise;
  throw DomainError("unknown perturbation '" + name + "'");
}

std::string to_string(Perturbation kind) {
  switch (kind) {
    case Perturbation::kAdditiveNoise: return "additive_noise";
    case Perturbation::kClip: return "clip";
    case Perturbation::kFreqMask: return "freq_mask";
    case Perturbation::kResample: return "resample";
    case Perturbation::kPitchShift: return "pitch_shift";
    case Perturbation::kBinauralNoise: return "binaural_noise";
  }
  throw DomainError("unknown perturbation kind");
}

LevelRange level_range(Perturbation kind) {
  switch (kind) {
    case Perturbation::kAdditiveNoise:
    case Perturbation::kBinauralNoise: return {-20.0, 30.0};
    case Perturbation::kClip: return {0.0, 1.0};
    case Perturbation::kFreqMask: return {1.0, 64.0};
    case Perturbation::kResample: return {0.5, 1.0};
    case Perturbation::kPitchShift: return {-4.0, 4.0};
  }
  throw DomainError("unknown perturbation kind");
}

audio::BinauralSignal perturb(const audio::BinauralSignal& signal, Perturbation kind,
                              double level, uint64_t seed) {
  signal.validate();
  check_level(kind, level);
  switch (kind) {
    case Perturbation::kAdditiveNoise: return apply_additive(signal, level, seed);
    case Perturbation::kClip: return apply_clip(signal, level);
    case Perturbation::kFreqMask:
      return apply_freq_mask(signal, static_cast<int>(std::lround(level)), seed);
    case Perturbation::kResample: return apply_resample(signal, level);
    case Perturbation::kPitchShift: return apply_pitch_shift(signal, level);
    case Perturbation::kBinauralNoise: return apply_binaural_noise(signal, level, seed);
  }
  throw DomainError("unknown perturbation kind");
}

int freq_mask_start(int width, int bins, uint64_t seed) {
  Rng gen(derive_seed(seed, "perturb-mask"));
  const int lo = 4, hi = bins - 4 - width;
  if (hi < lo) throw DomainError("freq_mask width too large for the spectrum");
  return lo + static_cast<int>(gen.below(static_cast<uint64_t>(hi - lo + 1)));
}

std::vector<float> stretch_channel(const std::vector<float>& x, double beta) {
  const auto& plan = audio::canonical_plan();
  const int ha = plan.hop;
  const int hs = std::max(64, static_cast<int>(std::lround(beta * ha)));
  audio::BinauralSignal mono = audio::BinauralSignal::from_mono(x);
  auto feats = audio::stft(mono, plan);
  const int f = feats.bins(), t = feats.frames();

  // per-bin phase propagation at the new hop
  audio::SpectroFeatures out = feats;
  out.hop = hs;
  for (int c = 0; c < 2; ++c) {
    for (int k = 0; k < f; ++k) {
      const double omega = 2.0 * M_PI * k * ha / plan.fft_size;
      double prev_in = feats.phase.v[static_cast<size_t>((static_cast<int64_t>(c) * f + k) * t)];
      double acc = prev_in;
      for (int fr = 1; fr < t; ++fr) {
        const auto idx = static_cast<size_t>((static_cast<int64_t>(c) * f + k) * t + fr);
        const double cur = feats.phase.v[idx];
        const double inst = omega + princarg(cur - prev_in - omega);
        prev_in = cur;
        acc += inst * hs / ha;
        out.phase.v[idx] = static_cast<float>(princarg(acc));
      }
    }
  }
  static thread_local std::unique_ptr<audio::StftPlan> synth_plan;
  if (!synth_plan || synth_plan->hop != hs)
    synth_plan = std::make_unique<audio::StftPlan>(audio::StftPlan::make(plan.fft_size, hs));
  const int64_t out_len = static_cast<int64_t>(t - 1) * hs + plan.fft_size;
  return audio::istft(out, out_len, *synth_plan).ch[0];
}

}  // namespace saqam::sim

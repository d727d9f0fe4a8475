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

#ifndef SAQAM_SIM_PERTURB_HPP_
#define SAQAM_SIM_PERTURB_HPP_

#include <cstdint>
#include <string>

#include "saqam/audio/signal.hpp"

namespace saqam::sim {

// Perturbation bank. Level semantics per kind:
//   additive_noise  SNR in dB, [-20, 30]; diotic white noise
//   clip            amplitude threshold in (0, 1]
//   freq_mask       masked-band width in STFT bins, [1, 64]
//   resample        intermediate rate factor in [0.5, 1.0)
//   pitch_shift     semitones in [-4, 4]
//   binaural_noise  SNR in dB, [-20, 30]; decorrelated pair binauralized
//                   from a random direction
enum class Perturbation {
  kAdditiveNoise,
  kClip,
  kFreqMask,
  kResample,
  kPitchShift,
  kBinauralNoise,
};

Perturbation perturbation_from_string(const std::string& name);
std::string to_string(Perturbation kind);

struct LevelRange {
  double lo = 0.0;
  double hi = 0.0;
};

LevelRange level_range(Perturbation kind);

// Apply one perturbation at the given level. Deterministic given the seed;
// the same seed reuses the same noise waveform / mask band / direction, so a
// triplet can share the perturbation identity across its three clips.
audio::BinauralSignal perturb(const audio::BinauralSignal& signal, Perturbation kind,
                              double level, uint64_t seed);

// Phase-vocoder time stretch (output duration ~ beta * input duration).
std::vector<float> stretch_channel(const std::vector<float>& x, double beta);

// First masked bin chosen by freq_mask for this seed (part of the
// deterministic contract; the band is [start, start + width)).
int freq_mask_start(int width, int bins, uint64_t seed);

}  // namespace saqam::sim

#endif  // SAQAM_SIM_PERTURB_HPP_

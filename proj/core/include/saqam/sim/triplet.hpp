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

#ifndef SAQAM_SIM_TRIPLET_HPP_
#define SAQAM_SIM_TRIPLET_HPP_

#include <array>
#include <cstdint>

#include "saqam/audio/signal.hpp"
#include "saqam/sim/brir.hpp"
#include "saqam/sim/perturb.hpp"
#include "saqam/sim/speech.hpp"

namespace saqam::sim {

inline constexpr double kClipSeconds = 3.0;
inline constexpr int64_t kClipSamples = 48000;

// How directions and rooms are sampled during simulation.
struct SpatialSampling {
  double el_min_deg = -45.0;
  double el_max_deg = 45.0;
  double rt60_min_s = 0.08;
  double rt60_max_s = 0.5;
};

// Anchor/positive/negative clips of three distinct utterances carrying the
// same perturbation at three levels, with the positive strictly closer to
// the anchor in level than the negative.
struct Triplet {
  audio::BinauralSignal anchor, positive, negative;
  Perturbation kind = Perturbation::kAdditiveNoise;
  double level_anchor = 0.0, level_positive = 0.0, level_negative = 0.0;
  std::array<int, 3> utterance_ids = {0, 0, 0};

  void validate() const;
};

// Sample a triplet: three distinct utterances, each binauralized through an
// independently sampled synthetic BRIR, perturbed with one shared seed (same
// noise waveform) at three uniformly drawn levels. Level draws that tie are
// redrawn up to 100 times. All clips are 3-second excerpts.
Triplet make_triplet(const CleanPool& pool, Perturbation kind, uint64_t seed,
                     const SpatialSampling& spatial = {});

// Shift augmentation: prepend or append 0.25 s of silence (coin flip on the
// seed) and re-crop to 3 s from the silence-side edge.
audio::BinauralSignal augment_shift(const audio::BinauralSignal& signal, uint64_t seed);

// Single-source clip with its DOA label, for the localization task.
struct DoaClip {
  audio::BinauralSignal signal;
  SourceLabel label;
  double azimuth_deg = 0.0, elevation_deg = 0.0;
  int utterance_id = 0;
};

// `noise_snr_db` of kNoNoiseSnr (infinity) disables the noise augmentation.
DoaClip make_doa_clip(const CleanPool& pool, double azimuth_deg, double elevation_deg,
                      double rt60_s, double noise_snr_db, uint64_t seed);

}  // namespace saqam::sim

#endif  // SAQAM_SIM_TRIPLET_HPP_

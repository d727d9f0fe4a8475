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

#ifndef SAQAM_ENHANCE_MEASURES_HPP_
#define SAQAM_ENHANCE_MEASURES_HPP_

#include "saqam/audio/signal.hpp"

namespace saqam::enhance {

inline constexpr double kSiSdrCapDb = 60.0;

struct Measures {
  double l2 = 0.0;        // mean squared waveform error
  double si_sdr_db = 0.0; // scale-invariant SDR, capped at +60 dB
  double mrstft = 0.0;    // multi-resolution STFT (spectral convergence + log-mag L1)
};

// Each measure is evaluated per channel and then averaged. MRSTFT uses
// resolutions (512,128), (1024,256), (2048,512) with Hann windows.
Measures measures(const audio::BinauralSignal& enhanced, const audio::BinauralSignal& clean);

double si_sdr_db(const std::vector<float>& estimate, const std::vector<float>& reference);

}  // namespace saqam::enhance

#endif  // SAQAM_ENHANCE_MEASURES_HPP_

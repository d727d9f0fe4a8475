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

#ifndef SAQAM_AUDIO_MIX_HPP_
#define SAQAM_AUDIO_MIX_HPP_

#include <limits>

#include "saqam/audio/signal.hpp"
#include "saqam/util/rng.hpp"

namespace saqam::audio {

// Sentinel meaning "no noise at all".
inline constexpr double kNoNoiseSnr = std::numeric_limits<double>::infinity();

// Add `noise` to `signal` so that 10*log10(P_signal / P_noise_scaled) equals
// `snr_db`, powers measured over both channels jointly. The noise is cropped
// at a random offset when longer than the signal. Output is clipped to
// [-1, 1]; the number of clipped samples is reported via `clipped` when
// given. Passing kNoNoiseSnr returns the signal unchanged.
BinauralSignal mix_at_snr(const BinauralSignal& signal, const BinauralSignal& noise,
                          double snr_db, Rng& rng, int64_t* clipped = nullptr);

}  // namespace saqam::audio

#endif  // SAQAM_AUDIO_MIX_HPP_

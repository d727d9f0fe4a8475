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

#include "saqam/audio/mix.hpp"

#include <algorithm>
#include <cmath>

namespace saqam::audio {

BinauralSignal mix_at_snr(const BinauralSignal& signal, const BinauralSignal& noise,
                          double snr_db, Rng& rng, int64_t* clipped) {
  if (clipped != nullptr) *clipped = 0;
  if (std::isinf(snr_db) && snr_db > 0) return signal;

  const int64_t n = signal.frames();
  if (noise.frames() < n) throw DataError("noise shorter than signal");
  const double p_signal = signal.power();
  if (p_signal <= 0.0) throw DataError("degenerate input: zero-power signal");

  const int64_t slack = noise.frames() - n;
  const int64_t offset = slack > 0 ? static_cast<int64_t>(rng.below(static_cast<uint64_t>(slack + 1))) : 0;
  BinauralSignal cropped = noise.slice(offset, n);
  const double p_noise = cropped.power();
  if (p_noise <= 0.0) throw DataError("degenerate input: zero-power noise");

  const double gain = std::sqrt(p_signal / (p_noise * std::pow(10.0, snr_db / 10.0)));
  BinauralSignal out(n, signal.sample_rate);
  int64_t clip_count = 0;
  for (int c = 0; c < 2; ++c)
    for (int64_t i = 0; i < n; ++i) {
      float v = signal.ch[static_cast<size_t>(c)][static_cast<size_t>(i)] +
                static_cast<float>(gain) * cropped.ch[static_cast<size_t>(c)][static_cast<size_t>(i)];
      if (v > 1.0f) {
        v = 1.0f;
        ++clip_count;
      } else if (v < -1.0f) {
        v = -1.0f;
        ++clip_count;
      }
      out.ch[static_cast<size_t>(c)][static_cast<size_t>(i)] = v;
    }
  if (clipped != nullptr) *clipped = clip_count;
  return out;
}

}  // namespace saqam::audio

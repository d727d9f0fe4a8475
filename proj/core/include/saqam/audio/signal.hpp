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

#ifndef SAQAM_AUDIO_SIGNAL_HPP_
#define SAQAM_AUDIO_SIGNAL_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "saqam/util/errors.hpp"

namespace saqam::audio {

inline constexpr int kSampleRate = 16000;

// Two-channel waveform; the universal audio currency of the project.
// Channel 0 is left, channel 1 is right. Samples are nominally in [-1, 1].
struct BinauralSignal {
  std::array<std::vector<float>, 2> ch;
  int sample_rate = kSampleRate;

  BinauralSignal() = default;
  explicit BinauralSignal(int64_t frames, int rate = kSampleRate) : sample_rate(rate) {
    ch[0].assign(static_cast<size_t>(frames), 0.0f);
    ch[1].assign(static_cast<size_t>(frames), 0.0f);
  }
  static BinauralSignal from_mono(std::vector<float> mono, int rate = kSampleRate) {
    BinauralSignal s;
    s.sample_rate = rate;
    s.ch[0] = mono;
    s.ch[1] = std::move(mono);
    return s;
  }

  int64_t frames() const { return static_cast<int64_t>(ch[0].size()); }

  void validate() const {
    if (sample_rate <= 0) throw DomainError("sample_rate must be positive");
    if (ch[0].size() != ch[1].size()) throw ContractError("channel length mismatch");
    for (const auto& c : ch)
      for (float v : c)
        if (!std::isfinite(v)) throw NumericError("non-finite sample");
  }

  // Mean squared amplitude over both channels jointly.
  double power() const {
    double acc = 0.0;
    for (const auto& c : ch)
      for (float v : c) acc += static_cast<double>(v) * v;
    int64_t n = 2 * frames();
    return n > 0 ? acc / static_cast<double>(n) : 0.0;
  }

  float peak() const {
    float p = 0.0f;
    for (const auto& c : ch)
      for (float v : c) p = std::max(p, std::abs(v));
    return p;
  }

  BinauralSignal slice(int64_t begin, int64_t count) const {
    BinauralSignal out(count, sample_rate);
    for (int c = 0; c < 2; ++c)
      for (int64_t i = 0; i < count; ++i) {
        int64_t j = begin + i;
        out.ch[c][static_cast<size_t>(i)] =
            (j >= 0 && j < frames()) ? ch[c][static_cast<size_t>(j)] : 0.0f;
      }
    return out;
  }

  // Crop to `target` frames from the front, zero-padding at the end if short.
  BinauralSignal crop_or_pad(int64_t target) const { return slice(0, target); }
};

}  // namespace saqam::audio

#endif  // SAQAM_AUDIO_SIGNAL_HPP_

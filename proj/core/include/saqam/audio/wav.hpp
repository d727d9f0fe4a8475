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

#ifndef SAQAM_AUDIO_WAV_HPP_
#define SAQAM_AUDIO_WAV_HPP_

#include <string>

#include "saqam/audio/signal.hpp"

namespace saqam::audio {

// Read a PCM WAV file (16-bit int or 32-bit float, 1 or 2 channels).
// Mono input is duplicated to both channels; anything not at 16 kHz is
// resampled. Samples are normalized to [-1, 1].
BinauralSignal read_wav(const std::string& path);

// Write 16-bit PCM at the signal's sample rate. Values are clamped to [-1, 1].
void write_wav(const std::string& path, const BinauralSignal& signal);

}  // namespace saqam::audio

#endif  // SAQAM_AUDIO_WAV_HPP_

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

#ifndef SAQAM_AUDIO_RESAMPLE_HPP_
#define SAQAM_AUDIO_RESAMPLE_HPP_

#include <vector>

#include "saqam/audio/signal.hpp"

namespace saqam::audio {

// Kaiser-windowed sinc resampling between arbitrary integer rates.
std::vector<float> resample(const std::vector<float>& x, int from_rate, int to_rate);

BinauralSignal resample(const BinauralSignal& signal, int to_rate);

}  // namespace saqam::audio

#endif  // SAQAM_AUDIO_RESAMPLE_HPP_

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

#ifndef SAQAM_SIM_SPEECH_HPP_
#define SAQAM_SIM_SPEECH_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace saqam::sim {

// Pool of mono clean utterances at 16 kHz.
struct CleanPool {
  std::vector<std::vector<float>> utterances;

  size_t size() const { return utterances.size(); }
};

// Formant-filtered pulse-train "speech": voiced/unvoiced/pause segments with
// drifting pitch and per-utterance formant layout. Not intelligible, but has
// speech-like spectro-temporal structure, which is all the simulation needs.
std::vector<float> synth_utterance(double seconds, uint64_t seed);

CleanPool synth_pool(int count, double seconds, uint64_t seed);

// Load every non-recursive *.wav in a directory as a mono utterance
// (channel average), sorted by filename for reproducibility.
CleanPool load_pool_dir(const std::string& dir);

enum class NoiseColor { kWhite, kPink };

std::vector<float> synth_noise(double seconds, NoiseColor color, uint64_t seed);

}  // namespace saqam::sim

#endif  // SAQAM_SIM_SPEECH_HPP_

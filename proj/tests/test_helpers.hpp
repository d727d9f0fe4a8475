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

#ifndef SAQAM_TESTS_TEST_HELPERS_HPP_
#define SAQAM_TESTS_TEST_HELPERS_HPP_

#include <filesystem>
#include <string>

#include "saqam/audio/signal.hpp"
#include "saqam/model/config.hpp"
#include "saqam/util/rng.hpp"

namespace saqam::test {

inline audio::BinauralSignal random_signal(int64_t frames, uint64_t seed, float amp = 0.3f) {
  audio::BinauralSignal s(frames);
  Rng rng(seed);
  for (auto& c : s.ch)
    for (auto& v : c) v = amp * static_cast<float>(rng.normal());
  return s;
}

inline std::vector<float> sine(int64_t frames, double freq_hz, double rate = 16000.0,
                               float amp = 1.0f) {
  std::vector<float> x(static_cast<size_t>(frames));
  for (int64_t i = 0; i < frames; ++i)
    x[static_cast<size_t>(i)] =
        amp * static_cast<float>(std::sin(2.0 * M_PI * freq_hz * i / rate));
  return x;
}

// Model small enough for unit tests but with the full architecture shape.
inline model::ModelConfig tiny_config() {
  model::ModelConfig c;
  c.inception_blocks = 2;
  c.inception_width = 9;
  c.tcn_blocks = 2;
  c.tcn_channels = {8, 12};
  c.tcn_dilations = {1, 2};
  c.lq_embed_dim = 6;
  c.head_hidden = 10;
  return c;
}

inline std::string temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("saqam_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

}  // namespace saqam::test

#endif  // SAQAM_TESTS_TEST_HELPERS_HPP_

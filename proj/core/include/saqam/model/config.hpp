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

#ifndef SAQAM_MODEL_CONFIG_HPP_
#define SAQAM_MODEL_CONFIG_HPP_

#include <string>
#include <vector>

#include "saqam/util/errors.hpp"

namespace saqam::model {

// Which spectrogram planes the network consumes. The unused planes are
// zeroed rather than dropped so one architecture serves all three modes.
enum class InputMode { kBoth, kMagOnly, kPhaseOnly };

InputMode input_mode_from_string(const std::string& s);
std::string to_string(InputMode mode);

struct ModelConfig {
  // feature extraction: parallel 1x1/3x3/5x5 branches, 3x3 max-pool,
  // then a 1x2 max-pool that halves the frequency axis per block
  int inception_blocks = 6;
  int inception_width = 64;  // total output channels, split across branches

  // temporal aggregation: residual blocks of 2 weight-normalized dilated convs
  int tcn_blocks = 4;
  std::vector<int> tcn_channels = {32, 64, 64, 128};
  std::vector<int> tcn_dilations = {1, 2, 4, 8};
  int tcn_kernel = 3;  // 1x3

  // heads
  int lq_embed_dim = 64;
  int head_hidden = 128;
  int az_bins = 50;
  int el_bins = 25;

  // input handling
  int input_channels = 4;  // mag-L, mag-R, phase-L, phase-R
  InputMode input_mode = InputMode::kBoth;
  bool log_mag_compression = true;

  // whether D2's activation stack includes the logits layers
  bool stacks_include_logits = true;

  // front-end geometry
  int fft_size = 512;
  int hop = 256;

  void validate() const;

  int bins() const { return fft_size / 2 + 1; }
  // frequency extent after the per-block halving pools
  int freq_after_body() const;
  // time receptive field of the temporal stack, in frames
  int receptive_field_frames() const;

  std::string to_json() const;
  static ModelConfig from_json(const std::string& text);
};

}  // namespace saqam::model

#endif  // SAQAM_MODEL_CONFIG_HPP_

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

#include "saqam/model/config.hpp"

#include <json.hpp>

namespace saqam::model {

using nlohmann::json;

InputMode input_mode_from_string(const std::string& s) {
  if (s == "both") return InputMode::kBoth;
  if (s == "mag_only") return InputMode::kMagOnly;
  if (s == "phase_only") return InputMode::kPhaseOnly;
  throw ConfigError("model.input_mode", "expected both|mag_only|phase_only, got '" + s + "'");
}

std::string to_string(InputMode mode) {
  switch (mode) {
    case InputMode::kBoth: return "both";
    case InputMode::kMagOnly: return "mag_only";
    case InputMode::kPhaseOnly: return "phase_only";
  }
  return "both";
}

void ModelConfig::validate() const {
  if (inception_blocks < 1) throw ConfigError("model.inception_blocks", "must be >= 1");
  if (inception_width < 3) throw ConfigError("model.inception_width", "must be >= 3");
  if (tcn_blocks < 1) throw ConfigError("model.tcn_blocks", "must be >= 1");
  if (static_cast<int>(tcn_channels.size()) != tcn_blocks)
    throw ConfigError("model.tcn_channels", "needs one entry per tcn block");
  if (static_cast<int>(tcn_dilations.size()) != tcn_blocks)
    throw ConfigError("model.tcn_dilations", "needs one entry per tcn block");
  for (int c : tcn_channels)
    if (c < 1) throw ConfigError("model.tcn_channels", "entries must be >= 1");
  for (int d : tcn_dilations)
    if (d < 1) throw ConfigError("model.tcn_dilations", "entries must be >= 1");
  if (tcn_kernel < 1 || tcn_kernel % 2 == 0)
    throw ConfigError("model.tcn_kernel", "must be odd and >= 1");
  if (lq_embed_dim < 1) throw ConfigError("model.lq_embed_dim", "must be >= 1");
  if (head_hidden < 1) throw ConfigError("model.head_hidden", "must be >= 1");
  if (az_bins < 5) throw ConfigError("model.az_bins", "must be >= 5");
  if (el_bins < 5) throw ConfigError("model.el_bins", "must be >= 5");
  if (input_channels != 4) throw ConfigError("model.input_channels", "must be 4");
  if (fft_size < 16 || (fft_size & (fft_size - 1)) != 0)
    throw ConfigError("model.fft_size", "must be a power of two >= 16");
  if (hop < 1 || hop > fft_size) throw ConfigError("model.hop", "must be in [1, fft_size]");
  if (freq_after_body() < 1) throw ConfigError("model.inception_blocks", "pools away all bins");
}

int ModelConfig::freq_after_body() const {
  int f = bins();
  for (int b = 0; b < inception_blocks; ++b) f = (f + 1) / 2;
  return f;
}

int ModelConfig::receptive_field_frames() const {
  int rf = 1;
  for (int d : tcn_dilations) rf += 2 * (tcn_kernel - 1) * d;
  return rf;
}

std::string ModelConfig::to_json() const {
  json j;
  j["inception_blocks"] = inception_blocks;
  j["inception_width"] = inception_width;
  j["tcn_blocks"] = tcn_blocks;
  j["tcn_channels"] = tcn_channels;
  j["tcn_dilations"] = tcn_dilations;
  j["tcn_kernel"] = tcn_kernel;
  j["lq_embed_dim"] = lq_embed_dim;
  j["head_hidden"] = head_hidden;
  j["az_bins"] = az_bins;
  j["el_bins"] = el_bins;
  j["input_channels"] = input_channels;
  j["input_mode"] = to_string(input_mode);
  j["log_mag_compression"] = log_mag_compression;
  j["stacks_include_logits"] = stacks_include_logits;
  j["fft_size"] = fft_size;
  j["hop"] = hop;
  return j.dump();
}

ModelConfig ModelConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  ModelConfig c;
  c.inception_blocks = j.at("inception_blocks").get<int>();
  c.inception_width = j.at("inception_width").get<int>();
  c.tcn_blocks = j.at("tcn_blocks").get<int>();
  c.tcn_channels = j.at("tcn_channels").get<std::vector<int>>();
  c.tcn_dilations = j.at("tcn_dilations").get<std::vector<int>>();
  c.tcn_kernel = j.at("tcn_kernel").get<int>();
  c.lq_embed_dim = j.at("lq_embed_dim").get<int>();
  c.head_hidden = j.at("head_hidden").get<int>();
  c.az_bins = j.at("az_bins").get<int>();
  c.el_bins = j.at("el_bins").get<int>();
  c.input_channels = j.at("input_channels").get<int>();
  c.input_mode = input_mode_from_string(j.at("input_mode").get<std::string>());
  c.log_mag_compression = j.at("log_mag_compression").get<bool>();
  c.stacks_include_logits = j.at("stacks_include_logits").get<bool>();
  c.fft_size = j.at("fft_size").get<int>();
  c.hop = j.at("hop").get<int>();
  c.validate();
  return c;
}

}  // namespace saqam::model

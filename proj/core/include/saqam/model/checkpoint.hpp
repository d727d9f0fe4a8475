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

#ifndef SAQAM_MODEL_CHECKPOINT_HPP_
#define SAQAM_MODEL_CHECKPOINT_HPP_

#include <map>
#include <string>

#include "saqam/nn/params.hpp"
#include "saqam/nn/tensor.hpp"

namespace saqam::model {

// Single-file serialized parameter set. Layout (little endian):
//   "SAQM" | u32 version | u64 header_len | header JSON | f32 blob
// The header carries model_type, the model's config JSON, free-form
// metadata, and the tensor index (name, shape, element offset).
inline constexpr uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  std::string model_type;
  std::string config_json;
  std::string metadata_json;
  std::map<std::string, nn::Tensor> tensors;
};

void write_checkpoint(const std::string& path, const std::string& model_type,
                      const std::string& config_json, const std::string& metadata_json,
                      const nn::ParamStoreT<float>& params);

Checkpoint read_checkpoint(const std::string& path);

// Fill an existing parameter store by name; shapes must match exactly.
void load_params(nn::ParamStoreT<float>& dst, const Checkpoint& ck);

}  // namespace saqam::model

#endif  // SAQAM_MODEL_CHECKPOINT_HPP_

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

#include "saqam/model/checkpoint.hpp"

#include <fstream>
#include <json.hpp>

#include "saqam/util/errors.hpp"

namespace saqam::model {

using nlohmann::json;

void write_checkpoint(const std::string& path, const std::string& model_type,
                      const std::string& config_json, const std::string& metadata_json,
                      const nn::ParamStoreT<float>& params) {
  json header;
  header["model_type"] = model_type;
  header["config"] = json::parse(config_json);
  header["metadata"] = metadata_json.empty() ? json::object() : json::parse(metadata_json);
  json index = json::array();
  int64_t offset = 0;
  for (const auto& p : params.items()) {
    index.push_back({{"name", p.name}, {"shape", p.value.shape}, {"offset", offset}});
    offset += p.value.numel();
  }
  header["tensors"] = index;
  const std::string htext = header.dump();

  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write checkpoint " + path);
  os.write("SAQM", 4);
  uint32_t version = kCheckpointVersion;
  os.write(reinterpret_cast<const char*>(&version), 4);
  uint64_t hlen = htext.size();
  os.write(reinterpret_cast<const char*>(&hlen), 8);
  os.write(htext.data(), static_cast<std::streamsize>(htext.size()));
  for (const auto& p : params.items())
    os.write(reinterpret_cast<const char*>(p.value.data()),
             static_cast<std::streamsize>(p.value.numel() * 4));
  if (!os) throw IoError("short write to checkpoint " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "SAQM") throw FormatError("not a checkpoint: " + path);
  uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), 4);
  if (version != kCheckpointVersion)
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), 8);
  std::string htext(hlen, '\0');
  in.read(htext.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw IoError("truncated checkpoint header in " + path);

  json header = json::parse(htext);
  Checkpoint ck;
  ck.model_type = header.at("model_type").get<std::string>();
  ck.config_json = header.at("config").dump();
  ck.metadata_json = header.at("metadata").dump();
  for (const auto& entry : header.at("tensors")) {
    const auto name = entry.at("name").get<std::string>();
    const auto shape = entry.at("shape").get<std::vector<int>>();
    nn::Tensor t(shape);
    in.read(reinterpret_cast<char*>(t.data()), static_cast<std::streamsize>(t.numel() * 4));
    if (!in) throw IoError("truncated tensor '" + name + "' in " + path);
    ck.tensors.emplace(name, std::move(t));
  }
  return ck;
}

void load_params(nn::ParamStoreT<float>& dst, const Checkpoint& ck) {
  for (auto& p : dst.items()) {
    auto it = ck.tensors.find(p.name);
    if (it == ck.tensors.end()) throw ContractError("checkpoint missing tensor " + p.name);
    if (it->second.shape != p.value.shape)
      throw ContractError("checkpoint shape mismatch for " + p.name + ": got " +
                          it->second.shape_str() + ", want " + p.value.shape_str());
    p.value = it->second;
  }
}

}  // namespace saqam::model

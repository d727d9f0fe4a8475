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

#include "saqam/util/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "saqam/util/errors.hpp"

namespace saqam {

using nlohmann::json;
namespace fs = std::filesystem;

void write_manifest(const std::string& out_dir, const RunManifest& manifest) {
  fs::create_directories(out_dir);
  json j;
  j["command"] = manifest.command;
  j["seed"] = manifest.seed;
  j["version"] = manifest.version;
  j["config"] = manifest.config;
  j["outputs"] = manifest.outputs;
  j["status"] = manifest.status;
  std::ofstream os(fs::path(out_dir) / "manifest.json");
  if (!os) throw IoError("cannot write manifest in " + out_dir);
  os << j.dump(2) << "\n";
}

bool run_is_complete(const std::string& out_dir, const std::string& command) {
  const fs::path path = fs::path(out_dir) / "manifest.json";
  if (!fs::exists(path)) return false;
  std::ifstream in(path);
  if (!in) return false;
  json j;
  try {
    in >> j;
  } catch (const json::exception&) {
    return false;
  }
  if (j.value("command", "") != command || j.value("status", "") != "complete") return false;
  for (const auto& out : j.value("outputs", std::vector<std::string>{}))
    if (!fs::exists(out)) return false;
  return true;
}

}  // namespace saqam

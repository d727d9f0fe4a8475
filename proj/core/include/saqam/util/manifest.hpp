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

#ifndef SAQAM_UTIL_MANIFEST_HPP_
#define SAQAM_UTIL_MANIFEST_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace saqam {

// Every pipeline run writes `manifest.json` into its output directory:
// the resolved configuration, seed, code version, and produced files.
// A completed manifest makes a re-run a no-op unless forced.
struct RunManifest {
  std::string command;
  uint64_t seed = 0;
  std::string version;
  std::map<std::string, std::string> config;
  std::vector<std::string> outputs;
  std::string status;  // "complete" when the run finished
};

void write_manifest(const std::string& out_dir, const RunManifest& manifest);

// True when out_dir holds a completed manifest for `command` and every
// listed output still exists.
bool run_is_complete(const std::string& out_dir, const std::string& command);

}  // namespace saqam

#endif  // SAQAM_UTIL_MANIFEST_HPP_

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

#include <omp.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "saqam/audio/mix.hpp"
#include "saqam/audio/wav.hpp"
#include "saqam/pipeline/pipeline.hpp"
#include "saqam/sim/triplet.hpp"
#include "saqam/util/manifest.hpp"
#include "saqam/util/rng.hpp"

namespace saqam::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kSimulateKeys = {
    "sim.n_triplets",  "sim.kinds",        "sim.pool_size",    "sim.pool_seconds",
    "sim.clean_dir",   "sim.el_min",       "sim.el_max",       "sim.rt60_min",
    "sim.rt60_max",    "sim.n_doa",        "sim.doa_az_grid",  "sim.doa_elevations",
    "sim.doa_rt60_min", "sim.doa_rt60_max", "sim.doa_noise_min", "sim.doa_noise_max",
};

}  // namespace

SimulateOutputs run_simulate(const RunContext& ctx) {
  const std::string command = "simulate";
  SimulateOutputs out;
  out.manifest_jsonl = (fs::path(ctx.out_dir) / "dataset.jsonl").string();
  if (!ctx.force && run_is_complete(ctx.out_dir, command)) {
    out.skipped = true;
    return out;
  }
  ctx.config.require_known(kSimulateKeys);
  if (ctx.workers > 0) omp_set_num_threads(ctx.workers);

  const int n_triplets = ctx.config.get_int("sim.n_triplets", 400);
  const int n_doa = ctx.config.get_int("sim.n_doa", 400);
  const auto kind_names = ctx.config.get_list("sim.kinds", {"additive_noise", "clip"});
  std::vector<sim::Perturbation> kinds;
  for (const auto& k : kind_names) kinds.push_back(sim::perturbation_from_string(k));

  sim::SpatialSampling spatial;
  spatial.el_min_deg = ctx.config.get_double("sim.el_min", -45.0);
  spatial.el_max_deg = ctx.config.get_double("sim.el_max", 45.0);
  spatial.rt60_min_s = ctx.config.get_double("sim.rt60_min", 0.08);
  spatial.rt60_max_s = ctx.config.get_double("sim.rt60_max", 0.5);

  // clean pool: user WAV directory or the synthetic generator
  sim::CleanPool pool;
  const std::string clean_dir = ctx.config.get_string("sim.clean_dir", "");
  if (!clean_dir.empty()) {
    pool = sim::load_pool_dir(clean_dir);
  } else {
    pool = sim::synth_pool(ctx.config.get_int("sim.pool_size", 24),
                           ctx.config.get_double("sim.pool_seconds", 3.5),
                           derive_seed(ctx.seed, "sim-pool"));
  }

  const fs::path wav_dir = fs::path(ctx.out_dir) / "wavs";
  fs::create_directories(wav_dir);

  std::vector<json> rows(static_cast<size_t>(n_triplets + n_doa));

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_triplets; ++i) {
    const uint64_t tseed = derive_seed(ctx.seed, "sim-triplet", static_cast<uint64_t>(i));
    const sim::Perturbation kind = kinds[static_cast<size_t>(i) % kinds.size()];
    sim::Triplet t = sim::make_triplet(pool, kind, tseed, spatial);
    char name[64];
    std::snprintf(name, sizeof(name), "triplet_%05d", i);
    const std::string base = (wav_dir / name).string();
    audio::write_wav(base + "_a.wav", t.anchor);
    audio::write_wav(base + "_p.wav", t.positive);
    audio::write_wav(base + "_n.wav", t.negative);
    json r;
    r["type"] = "triplet";
    r["kind"] = sim::to_string(kind);
    r["levels"] = {t.level_anchor, t.level_positive, t.level_negative};
    r["utterances"] = t.utterance_ids;
    r["anchor"] = base + "_a.wav";
    r["positive"] = base + "_p.wav";
    r["negative"] = base + "_n.wav";
    r["seed"] = tseed;
    rows[static_cast<size_t>(i)] = std::move(r);
  }

  const int az_grid = ctx.config.get_int("sim.doa_az_grid", 10);
  const auto elevations = ctx.config.get_doubles("sim.doa_elevations", {0.0});
  const double doa_rt_min = ctx.config.get_double("sim.doa_rt60_min", 0.05);
  const double doa_rt_max = ctx.config.get_double("sim.doa_rt60_max", 0.3);
  const double doa_noise_min = ctx.config.get_double("sim.doa_noise_min", 15.0);
  const double doa_noise_max = ctx.config.get_double("sim.doa_noise_max", 30.0);

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_doa; ++i) {
    const uint64_t dseed = derive_seed(ctx.seed, "sim-doa", static_cast<uint64_t>(i));
    Rng rng(dseed);
    const int gi = static_cast<int>(rng.below(static_cast<uint64_t>(az_grid)));
    const double az = -180.0 + (gi + 0.5) * (360.0 / az_grid);
    const double el = elevations[rng.below(elevations.size())];
    const double rt = rng.uniform(doa_rt_min, doa_rt_max);
    const double snr = doa_noise_max >= 1000.0 ? audio::kNoNoiseSnr
                                               : rng.uniform(doa_noise_min, doa_noise_max);
    sim::DoaClip clip = sim::make_doa_clip(pool, az, el, rt, snr, dseed);
    char name[64];
    std::snprintf(name, sizeof(name), "doa_%05d.wav", i);
    const std::string path = (wav_dir / name).string();
    audio::write_wav(path, clip.signal);
    json r;
    r["type"] = "doa";
    r["azimuth_deg"] = az;
    r["elevation_deg"] = el;
    r["az_bin"] = clip.label.az_bin;
    r["el_bin"] = clip.label.el_bin;
    r["rt60_s"] = rt;
    r["wav"] = path;
    r["seed"] = dseed;
    rows[static_cast<size_t>(n_triplets + i)] = std::move(r);
  }

  {
    std::ofstream os(out.manifest_jsonl);
    if (!os) throw IoError("cannot write " + out.manifest_jsonl);
    for (const auto& r : rows) os << r.dump() << "\n";
  }

  out.n_triplets = n_triplets;
  out.n_doa = n_doa;
  RunManifest m;
  m.command = command;
  m.seed = ctx.seed;
  m.version = SAQAM_VERSION;
  m.config = ctx.config.entries();
  m.outputs = {out.manifest_jsonl};
  m.status = "complete";
  write_manifest(ctx.out_dir, m);
  return out;
}

Dataset load_dataset(const std::string& manifest_jsonl) {
  std::ifstream in(manifest_jsonl);
  if (!in) throw IoError("cannot open dataset manifest " + manifest_jsonl);
  Dataset ds;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json r = json::parse(line);
    const std::string type = r.at("type").get<std::string>();
    if (type == "triplet") {
      TripletClips t;
      t.kind = r.at("kind").get<std::string>();
      t.level_anchor = r.at("levels")[0].get<double>();
      t.level_positive = r.at("levels")[1].get<double>();
      t.level_negative = r.at("levels")[2].get<double>();
      t.anchor = audio::read_wav(r.at("anchor").get<std::string>());
      t.positive = audio::read_wav(r.at("positive").get<std::string>());
      t.negative = audio::read_wav(r.at("negative").get<std::string>());
      ds.triplets.push_back(std::move(t));
    } else if (type == "doa") {
      DoaItem d;
      d.az_bin = r.at("az_bin").get<int>();
      d.el_bin = r.at("el_bin").get<int>();
      d.azimuth_deg = r.at("azimuth_deg").get<double>();
      d.elevation_deg = r.at("elevation_deg").get<double>();
      d.signal = audio::read_wav(r.at("wav").get<std::string>());
      ds.doa.push_back(std::move(d));
    } else {
      throw DataError("unknown manifest row type '" + type + "'");
    }
  }
  return ds;
}

}  // namespace saqam::pipeline

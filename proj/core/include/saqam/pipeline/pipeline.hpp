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

#ifndef SAQAM_PIPELINE_PIPELINE_HPP_
#define SAQAM_PIPELINE_PIPELINE_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "saqam/audio/signal.hpp"
#include "saqam/model/saqam_net.hpp"
#include "saqam/util/kv_config.hpp"

namespace saqam::pipeline {

// Shared run context resolved from the command line.
struct RunContext {
  KvConfig config;
  std::string out_dir;
  uint64_t seed = 0;
  int workers = 0;  // 0: leave the OpenMP default
  bool force = false;
};

// ---- dataset records shared between simulate and train ----

struct TripletClips {
  audio::BinauralSignal anchor, positive, negative;
  std::string kind;
  double level_anchor = 0, level_positive = 0, level_negative = 0;
};

struct DoaItem {
  audio::BinauralSignal signal;
  int az_bin = 0, el_bin = 0;
  double azimuth_deg = 0, elevation_deg = 0;
};

struct Dataset {
  std::vector<TripletClips> triplets;
  std::vector<DoaItem> doa;
};

Dataset load_dataset(const std::string& manifest_jsonl);

// ModelConfig assembled from `model.*` keys (defaults = canonical).
model::ModelConfig model_config_from_kv(const KvConfig& cfg);

model::SaqamNet load_metric_model(const std::string& checkpoint_path);

// ---- command drivers (the CLI calls exactly these) ----

struct SimulateOutputs {
  std::string manifest_jsonl;
  int n_triplets = 0;
  int n_doa = 0;
  bool skipped = false;
};
SimulateOutputs run_simulate(const RunContext& ctx);

struct TrainOutputs {
  std::string checkpoint;
  double val_triplet_accuracy = 0;
  double val_doa_accuracy = 0;
  bool skipped = false;
};
TrainOutputs run_train(const RunContext& ctx);

struct EvalObjectiveOutputs {
  std::string metrics_csv;
  double lq_mp10 = 0, sq_mp10 = 0;
  double lq_common_area = 1, sq_common_area = 1;
  double lq_monotonicity_sc = 0, sq_angular_sc = 0;
  bool skipped = false;
};
EvalObjectiveOutputs run_eval_objective(const RunContext& ctx);

struct EvalSubjectiveOutputs {
  std::string table_csv;
  bool skipped = false;
};
EvalSubjectiveOutputs run_eval_subjective(const RunContext& ctx);

struct EnhanceTrainOutputs {
  std::string checkpoint;
  bool skipped = false;
};
EnhanceTrainOutputs run_enhance_train(const RunContext& ctx);

struct EnhanceEvalOutputs {
  std::string table_csv;
  std::vector<std::string> row_names;
  std::vector<double> si_sdr_db, l2, mrstft;
  bool skipped = false;
};
EnhanceEvalOutputs run_enhance_eval(const RunContext& ctx);

// ---- evaluation helpers reused by the acceptance suite ----

double triplet_accuracy(const model::SaqamNet& net, const std::vector<TripletClips>& triplets);

// Fraction of clips whose clip-level azimuth lands within `tol_bins` of the
// label (circular distance; azimuth bins wrap).
double doa_accuracy_az(const model::SaqamNet& net, const std::vector<DoaItem>& items,
                       int tol_bins);

// Enhancement toy set generation (also used by enhance-train/eval).
struct EnhancePair {
  audio::BinauralSignal noisy, clean;
};
std::vector<EnhancePair> make_enhance_set(int n_clips, uint64_t seed);

}  // namespace saqam::pipeline

#endif  // SAQAM_PIPELINE_PIPELINE_HPP_

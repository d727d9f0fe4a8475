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

#include <CLI11.hpp>
#include <cstdio>
#include <json.hpp>

#include "saqam/audio/wav.hpp"
#include "saqam/metric/metric.hpp"
#include "saqam/pipeline/pipeline.hpp"
#include "saqam/util/csv.hpp"

namespace {

using saqam::KvConfig;
using saqam::pipeline::RunContext;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  uint64_t seed = 0;
  int workers = 0;
  bool force = false;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path, "key = value configuration file");
  cmd->add_option("--out-dir", args->out_dir, "output directory for artifacts and the manifest");
  cmd->add_option("--seed", args->seed, "root seed; all randomness derives from it");
  cmd->add_option("--workers", args->workers, "data-pipeline thread count (0 = default)");
  cmd->add_flag("--force", args->force, "re-run even if a completed manifest exists");
  cmd->add_option("--set", args->overrides, "config override key=value (repeatable)")
      ->take_all();
}

RunContext make_context(const CommonArgs& args) {
  RunContext ctx;
  ctx.config = KvConfig::from_file(args.config_path);
  for (const auto& o : args.overrides) ctx.config.apply_override(o);
  ctx.out_dir = args.out_dir;
  ctx.seed = args.seed;
  ctx.workers = args.workers;
  ctx.force = args.force;
  return ctx;
}

void report_skip(bool skipped, const std::string& what) {
  if (skipped) std::printf("up to date, skipping (use --force to re-run): %s\n", what.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAQAM: simulation, training, scoring, and evaluation pipelines"};
  app.require_subcommand(1);

  CommonArgs sim_args, train_args, evobj_args, evsub_args, entrain_args, eneval_args;

  auto* sim = app.add_subcommand("simulate", "generate triplets and DOA clips");
  add_common(sim, &sim_args);

  auto* train = app.add_subcommand("train", "train the multi-task metric model");
  add_common(train, &train_args);

  auto* score = app.add_subcommand("score", "score a pair of binaural wav files");
  std::string model_path, a_path, b_path;
  bool json_out = false;
  score->add_option("--model", model_path, "metric checkpoint")->required();
  score->add_option("--a", a_path, "first wav")->required();
  score->add_option("--b", b_path, "second wav")->required();
  score->add_flag("--json", json_out, "emit a JSON report with per-layer contributions");

  auto* evobj = app.add_subcommand("eval-objective", "common area, MP@K, monotonicity");
  add_common(evobj, &evobj_args);

  auto* evsub = app.add_subcommand("eval-subjective", "per-condition Spearman vs MOS csv");
  add_common(evsub, &evsub_args);

  auto* entrain = app.add_subcommand("enhance-train", "train the CRM U-Net enhancer");
  add_common(entrain, &entrain_args);

  auto* eneval = app.add_subcommand("enhance-eval", "objective table over enhancement models");
  add_common(eneval, &eneval_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      auto out = saqam::pipeline::run_simulate(make_context(sim_args));
      report_skip(out.skipped, out.manifest_jsonl);
      if (!out.skipped)
        std::printf("simulated %d triplets, %d doa clips -> %s\n", out.n_triplets, out.n_doa,
                    out.manifest_jsonl.c_str());
    } else if (train->parsed()) {
      auto out = saqam::pipeline::run_train(make_context(train_args));
      report_skip(out.skipped, out.checkpoint);
      if (!out.skipped)
        std::printf("trained -> %s (val triplet acc %.3f, val doa acc %.3f)\n",
                    out.checkpoint.c_str(), out.val_triplet_accuracy, out.val_doa_accuracy);
    } else if (score->parsed()) {
      saqam::model::SaqamNet net = saqam::pipeline::load_metric_model(model_path);
      auto x1 = saqam::audio::read_wav(a_path);
      auto x2 = saqam::audio::read_wav(b_path);
      auto rep = saqam::metric::score(net, x1, x2);
      if (json_out) {
        nlohmann::json j;
        j["d1_lq"] = rep.d1_lq;
        j["d2_sq"] = rep.d2_sq;
        j["d3_ovrl"] = rep.d3_ovrl;
        j["per_layer"] = rep.per_layer;
        std::printf("%s\n", j.dump(2).c_str());
      } else {
        std::printf("D1 (listening quality):      %.6f\n", rep.d1_lq);
        std::printf("D2 (spatialization quality): %.6f\n", rep.d2_sq);
        std::printf("D3 (overall):                %.6f\n", rep.d3_ovrl);
      }
    } else if (evobj->parsed()) {
      auto out = saqam::pipeline::run_eval_objective(make_context(evobj_args));
      report_skip(out.skipped, out.metrics_csv);
      if (!out.skipped)
        std::printf("objective metrics -> %s (LQ mp@k %.3f area %.3f sc %.3f | SQ mp@k %.3f "
                    "area %.3f sc %.3f)\n",
                    out.metrics_csv.c_str(), out.lq_mp10, out.lq_common_area,
                    out.lq_monotonicity_sc, out.sq_mp10, out.sq_common_area, out.sq_angular_sc);
    } else if (evsub->parsed()) {
      auto out = saqam::pipeline::run_eval_subjective(make_context(evsub_args));
      report_skip(out.skipped, out.table_csv);
      if (!out.skipped) std::printf("subjective table -> %s\n", out.table_csv.c_str());
    } else if (entrain->parsed()) {
      auto out = saqam::pipeline::run_enhance_train(make_context(entrain_args));
      report_skip(out.skipped, out.checkpoint);
      if (!out.skipped) std::printf("enhancer -> %s\n", out.checkpoint.c_str());
    } else if (eneval->parsed()) {
      auto out = saqam::pipeline::run_enhance_eval(make_context(eneval_args));
      report_skip(out.skipped, out.table_csv);
      if (!out.skipped) {
        std::printf("enhancement table -> %s\n", out.table_csv.c_str());
        for (size_t i = 0; i < out.row_names.size(); ++i)
          std::printf("  %-10s l2 %.5f  mrstft %.4f  si-sdr %.2f dB\n", out.row_names[i].c_str(),
                      out.l2[i], out.mrstft[i], out.si_sdr_db[i]);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

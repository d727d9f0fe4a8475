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

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "saqam/eval/stats.hpp"
#include "saqam/eval/suites.hpp"
#include "saqam/metric/metric.hpp"
#include "saqam/pipeline/pipeline.hpp"
#include "saqam/sim/triplet.hpp"
#include "saqam/util/csv.hpp"
#include "saqam/util/manifest.hpp"
#include "saqam/util/rng.hpp"

namespace saqam::pipeline {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kEvalObjectiveKeys = {
    "eval.checkpoint", "eval.n_groups",     "eval.per_group",  "eval.n_contents",
    "eval.mp_k",       "eval.noise_levels", "eval.az_levels",  "eval.plots",
};
const std::vector<std::string> kEvalSubjectiveKeys = {
    "eval.scores_csv", "eval.mos_csv", "eval.name",
};

// Grouped clips sharing one (attribute, level), non-matched content inside a
// group. Returns cached stacks plus group labels.
struct GroupedSet {
  std::vector<metric::CachedStacks> stacks;
  std::vector<int> labels;
};

GroupedSet make_lq_groups(const model::SaqamNet& net, int n_groups, int per_group,
                          uint64_t seed) {
  sim::CleanPool pool =
      sim::synth_pool(per_group, sim::kClipSeconds + 0.5, derive_seed(seed, "lqg-pool"));
  GroupedSet set;
  const int total = n_groups * per_group;
  set.stacks.resize(static_cast<size_t>(total));
  set.labels.resize(static_cast<size_t>(total));
#pragma omp parallel for schedule(dynamic) collapse(2)
  for (int gidx = 0; gidx < n_groups; ++gidx) {
    for (int j = 0; j < per_group; ++j) {
      const double snr = -20.0 + 50.0 * gidx / std::max(1, n_groups - 1);
      const uint64_t cs = derive_seed(seed, "lqg", static_cast<uint64_t>(gidx * 1000 + j));
      Rng rng(cs);
      sim::Brir brir =
          sim::synth_brir(rng.uniform(-180.0, 180.0), 0.0, 0.15, derive_seed(cs, "brir"));
      auto clip = sim::binauralize(pool.utterances[static_cast<size_t>(j)], brir)
                      .crop_or_pad(sim::kClipSamples);
      clip = sim::perturb(clip, sim::Perturbation::kAdditiveNoise, snr, derive_seed(cs, "p"));
      const int idx = gidx * per_group + j;
      set.stacks[static_cast<size_t>(idx)] = metric::compute_stacks(net, clip);
      set.labels[static_cast<size_t>(idx)] = gidx;
    }
  }
  return set;
}

GroupedSet make_sq_groups(const model::SaqamNet& net, int n_groups, int per_group,
                          uint64_t seed) {
  sim::CleanPool pool =
      sim::synth_pool(per_group, sim::kClipSeconds + 0.5, derive_seed(seed, "sqg-pool"));
  GroupedSet set;
  const int total = n_groups * per_group;
  set.stacks.resize(static_cast<size_t>(total));
  set.labels.resize(static_cast<size_t>(total));
#pragma omp parallel for schedule(dynamic) collapse(2)
  for (int gidx = 0; gidx < n_groups; ++gidx) {
    for (int j = 0; j < per_group; ++j) {
      const double az = -180.0 + (gidx + 0.5) * 360.0 / n_groups;
      const uint64_t cs = derive_seed(seed, "sqg", static_cast<uint64_t>(gidx * 1000 + j));
      sim::Brir brir = sim::synth_brir(az, 0.0, 0.15, derive_seed(cs, "brir"));
      auto clip = sim::binauralize(pool.utterances[static_cast<size_t>(j)], brir)
                      .crop_or_pad(sim::kClipSamples);
      const int idx = gidx * per_group + j;
      set.stacks[static_cast<size_t>(idx)] = metric::compute_stacks(net, clip);
      set.labels[static_cast<size_t>(idx)] = gidx;
    }
  }
  return set;
}

struct GroupMetrics {
  double mp_k = 0;
  double area = 1;
};

// Pairwise distances, retrieval precision, and same/different-quality
// histogram overlap from one grouped set.
GroupMetrics group_metrics(const GroupedSet& set, int per_group, int k, bool use_d2,
                           uint64_t seed) {
  const int n = static_cast<int>(set.stacks.size());
  std::vector<double> dist(static_cast<size_t>(n) * n, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto rep = metric::distance(set.stacks[static_cast<size_t>(i)],
                                  set.stacks[static_cast<size_t>(j)]);
      const double d = use_d2 ? rep.d2_sq : rep.d1_lq;
      dist[static_cast<size_t>(i) * n + j] = dist[static_cast<size_t>(j) * n + i] = d;
    }
  GroupMetrics gm;
  gm.mp_k = eval::mean_precision_at_k_dist(dist, n, set.labels, k);

  // same quality, different content vs different quality, different content
  std::vector<double> same, diff;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const bool same_content = i % per_group == j % per_group;
      if (same_content) continue;  // content always differs within the kept pairs
      if (set.labels[static_cast<size_t>(i)] == set.labels[static_cast<size_t>(j)])
        same.push_back(dist[static_cast<size_t>(i) * n + j]);
      else
        diff.push_back(dist[static_cast<size_t>(i) * n + j]);
    }
  // balance the two samples
  Rng rng(derive_seed(seed, "area-subsample"));
  if (diff.size() > same.size()) {
    for (size_t i = diff.size() - 1; i > 0; --i)
      std::swap(diff[i], diff[rng.below(i + 1)]);
    diff.resize(same.size());
  }
  gm.area = eval::common_area(same, diff);
  return gm;
}

}  // namespace

EvalObjectiveOutputs run_eval_objective(const RunContext& ctx) {
  const std::string command = "eval-objective";
  EvalObjectiveOutputs out;
  out.metrics_csv = (fs::path(ctx.out_dir) / "objective_metrics.csv").string();
  if (!ctx.force && run_is_complete(ctx.out_dir, command)) {
    out.skipped = true;
    return out;
  }
  ctx.config.require_known(kEvalObjectiveKeys);
  if (ctx.workers > 0) omp_set_num_threads(ctx.workers);
  fs::create_directories(ctx.out_dir);

  const std::string ckpt = ctx.config.get_string("eval.checkpoint", "");
  if (ckpt.empty()) throw ConfigError("eval.checkpoint", "required for eval-objective");
  model::SaqamNet net = load_metric_model(ckpt);

  const int n_groups = ctx.config.get_int("eval.n_groups", 10);
  const int per_group = ctx.config.get_int("eval.per_group", 12);
  const int k = ctx.config.get_int("eval.mp_k", 10);
  const int n_contents = ctx.config.get_int("eval.n_contents", 12);
  const auto noise_levels =
      ctx.config.get_doubles("eval.noise_levels", {-20, -10, 0, 10, 20, 30});
  const auto az_levels = ctx.config.get_doubles("eval.az_levels", {0, 36, 72, 108, 144, 180});
  const bool plots = ctx.config.get_bool("eval.plots", true);

  GroupedSet lq_set = make_lq_groups(net, n_groups, per_group, derive_seed(ctx.seed, "lq-set"));
  GroupMetrics lq = group_metrics(lq_set, per_group, k, false, derive_seed(ctx.seed, "lq-gm"));
  out.lq_mp10 = lq.mp_k;
  out.lq_common_area = lq.area;

  GroupedSet sq_set = make_sq_groups(net, n_groups, per_group, derive_seed(ctx.seed, "sq-set"));
  GroupMetrics sq = group_metrics(sq_set, per_group, k, true, derive_seed(ctx.seed, "sq-gm"));
  out.sq_mp10 = sq.mp_k;
  out.sq_common_area = sq.area;

  auto mono = eval::monotonicity_suite(net, "additive_noise", noise_levels, n_contents,
                                       derive_seed(ctx.seed, "mono-noise"));
  out.lq_monotonicity_sc = mono.sc;
  auto angular = eval::monotonicity_suite(net, "angular", az_levels, n_contents,
                                          derive_seed(ctx.seed, "mono-angular"));
  out.sq_angular_sc = angular.sc;

  std::vector<std::vector<std::string>> rows = {
      {"attribute", "common_area", "mp@" + std::to_string(k), "monotonicity_sc"},
      {"SQ", fmt_num(out.sq_common_area), fmt_num(out.sq_mp10), fmt_num(out.sq_angular_sc)},
      {"LQ", fmt_num(out.lq_common_area), fmt_num(out.lq_mp10), fmt_num(out.lq_monotonicity_sc)},
  };
  write_csv(out.metrics_csv, rows);

  {  // markdown twin of the csv
    std::ofstream md(fs::path(ctx.out_dir) / "objective_metrics.md");
    md << "| Attribute | CommonArea (lower better) | MP@" << k
       << " | Monotonicity SC |\n|---|---|---|---|\n";
    md << "| SQ | " << fmt_num(out.sq_common_area) << " | " << fmt_num(out.sq_mp10) << " | "
       << fmt_num(out.sq_angular_sc) << " |\n";
    md << "| LQ | " << fmt_num(out.lq_common_area) << " | " << fmt_num(out.lq_mp10) << " | "
       << fmt_num(out.lq_monotonicity_sc) << " |\n";
  }

  std::vector<std::string> outputs = {out.metrics_csv};
  if (plots) {
    const std::string p1 = (fs::path(ctx.out_dir) / "distance_vs_level.svg").string();
    eval::write_line_plot(p1, "D1 vs additive-noise level", "SNR (dB)", "mean D1",
                          {{"D1", mono.levels, mono.mean_distance}});
    const std::string p2 = (fs::path(ctx.out_dir) / "distance_vs_angle.svg").string();
    eval::write_line_plot(p2, "D2 vs angular separation", "azimuth separation (deg)", "mean D2",
                          {{"D2", angular.levels, angular.mean_distance}});
    outputs.push_back(p1);
    outputs.push_back(p2);
  }

  RunManifest m;
  m.command = command;
  m.seed = ctx.seed;
  m.version = SAQAM_VERSION;
  m.config = ctx.config.entries();
  m.outputs = outputs;
  m.status = "complete";
  write_manifest(ctx.out_dir, m);
  return out;
}

EvalSubjectiveOutputs run_eval_subjective(const RunContext& ctx) {
  const std::string command = "eval-subjective";
  EvalSubjectiveOutputs out;
  out.table_csv = (fs::path(ctx.out_dir) / "subjective_sc.csv").string();
  if (!ctx.force && run_is_complete(ctx.out_dir, command)) {
    out.skipped = true;
    return out;
  }
  ctx.config.require_known(kEvalSubjectiveKeys);
  fs::create_directories(ctx.out_dir);

  const std::string scores = ctx.config.get_string("eval.scores_csv", "");
  const std::string mos = ctx.config.get_string("eval.mos_csv", "");
  if (scores.empty() || mos.empty())
    throw ConfigError("eval.scores_csv", "eval-subjective needs eval.scores_csv and eval.mos_csv");
  const std::string name = ctx.config.get_string("eval.name", "dataset");

  eval::SubjectiveResult res = eval::subjective_correlation(scores, mos);
  std::vector<std::vector<std::string>> rows = {
      {"dataset", "n_conditions", "sc_lq_d1", "sc_sq_d2", "sc_ovrl_d3"},
      {name, std::to_string(res.n_conditions), fmt_num(res.sc_d1), fmt_num(res.sc_d2),
       fmt_num(res.sc_d3)},
  };
  write_csv(out.table_csv, rows);
  {
    std::ofstream md(fs::path(ctx.out_dir) / "subjective_sc.md");
    md << "| Dataset | Conditions | LQ (D1) | SQ (D2) | OVRL (D3) |\n|---|---|---|---|---|\n"
       << "| " << name << " | " << res.n_conditions << " | " << fmt_num(res.sc_d1) << " | "
       << fmt_num(res.sc_d2) << " | " << fmt_num(res.sc_d3) << " |\n";
  }

  RunManifest m;
  m.command = command;
  m.seed = ctx.seed;
  m.version = SAQAM_VERSION;
  m.config = ctx.config.entries();
  m.outputs = {out.table_csv};
  m.status = "complete";
  write_manifest(ctx.out_dir, m);
  return out;
}

}  // namespace saqam::pipeline

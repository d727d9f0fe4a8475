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

#include "saqam/eval/suites.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "saqam/eval/stats.hpp"
#include "saqam/sim/brir.hpp"
#include "saqam/sim/perturb.hpp"
#include "saqam/sim/speech.hpp"
#include "saqam/sim/triplet.hpp"
#include "saqam/util/csv.hpp"
#include "saqam/util/rng.hpp"

namespace saqam::eval {

MonotonicityResult monotonicity_suite(const model::SaqamNet& net,
                                      const std::string& perturbation_id,
                                      const std::vector<double>& levels, int n_contents,
                                      uint64_t seed) {
  if (levels.size() < 2) throw DataError("monotonicity needs at least 2 levels");
  if (n_contents < 1) throw DataError("monotonicity needs at least 1 content");
  const bool angular = perturbation_id == "angular";
  const sim::Perturbation kind =
      angular ? sim::Perturbation::kAdditiveNoise : sim::perturbation_from_string(perturbation_id);

  // 2*n distinct utterances: the first n are references, the rest tests
  sim::CleanPool pool = sim::synth_pool(2 * n_contents, sim::kClipSeconds + 0.5,
                                        derive_seed(seed, "mono-pool"));
  const int n_levels = static_cast<int>(levels.size());

  std::vector<metric::CachedStacks> refs(static_cast<size_t>(n_contents));
  std::vector<std::vector<double>> dist(static_cast<size_t>(n_levels),
                                        std::vector<double>(static_cast<size_t>(n_contents)));
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < n_contents; ++j) {
    const uint64_t cs = derive_seed(seed, "mono-ref", static_cast<uint64_t>(j));
    Rng rng(cs);
    sim::Brir brir = sim::synth_brir(angular ? 0.0 : rng.uniform(-180.0, 180.0),
                                     0.0, 0.15, derive_seed(cs, "brir"));
    auto clip = sim::binauralize(pool.utterances[static_cast<size_t>(j)], brir);
    clip = clip.crop_or_pad(sim::kClipSamples);
    refs[static_cast<size_t>(j)] = metric::compute_stacks(net, clip);
  }
#pragma omp parallel for schedule(dynamic) collapse(2)
  for (int li = 0; li < n_levels; ++li) {
    for (int j = 0; j < n_contents; ++j) {
      const uint64_t cs = derive_seed(seed, "mono-test",
                                      static_cast<uint64_t>(li) * 1000 + static_cast<uint64_t>(j));
      const auto& utt = pool.utterances[static_cast<size_t>(n_contents + j)];
      audio::BinauralSignal clip;
      if (angular) {
        sim::Brir brir = sim::synth_brir(levels[static_cast<size_t>(li)], 0.0, 0.15,
                                         derive_seed(cs, "brir"));
        clip = sim::binauralize(utt, brir);
      } else {
        Rng rng(cs);
        sim::Brir brir = sim::synth_brir(rng.uniform(-180.0, 180.0), 0.0, 0.15,
                                         derive_seed(cs, "brir"));
        clip = sim::binauralize(utt, brir);
        clip = sim::perturb(clip.crop_or_pad(sim::kClipSamples), kind,
                            levels[static_cast<size_t>(li)], derive_seed(cs, "perturb"));
      }
      auto stacks = metric::compute_stacks(net, clip.crop_or_pad(sim::kClipSamples));
      auto rep = metric::distance(refs[static_cast<size_t>(j)], stacks);
      dist[static_cast<size_t>(li)][static_cast<size_t>(j)] = angular ? rep.d2_sq : rep.d1_lq;
    }
  }

  MonotonicityResult res;
  res.levels = levels;
  res.mean_distance.resize(static_cast<size_t>(n_levels));
  for (int li = 0; li < n_levels; ++li) {
    double acc = 0.0;
    for (double d : dist[static_cast<size_t>(li)]) acc += d;
    res.mean_distance[static_cast<size_t>(li)] = acc / n_contents;
  }
  // SC is taken against perturbation severity, not the raw level, so that a
  // well-behaved metric scores +1 for every kind (SNR-like levels shrink the
  // degradation as they grow).
  std::vector<double> severity(levels.size());
  for (size_t i = 0; i < levels.size(); ++i) {
    double s = levels[i];
    if (!angular) {
      switch (kind) {
        case sim::Perturbation::kAdditiveNoise:
        case sim::Perturbation::kBinauralNoise:
        case sim::Perturbation::kClip:
        case sim::Perturbation::kResample: s = -s; break;
        case sim::Perturbation::kPitchShift: s = std::abs(s); break;
        case sim::Perturbation::kFreqMask: break;
      }
    }
    severity[i] = s;
  }
  res.sc = spearman(severity, res.mean_distance);
  return res;
}

SubjectiveResult subjective_correlation(const std::string& scores_csv,
                                        const std::string& mos_csv) {
  auto srows = read_csv(scores_csv);
  auto mrows = read_csv(mos_csv);
  if (srows.size() < 2 || mrows.size() < 2) throw DataError("subjective csvs need data rows");

  struct Acc {
    double d1 = 0, d2 = 0, d3 = 0;
    int n = 0;
  };
  std::map<std::string, Acc> per_cond;
  for (size_t i = 1; i < srows.size(); ++i) {
    const auto& r = srows[i];
    if (r.size() < 5) throw DataError("scores row needs condition_id,item_id,d1,d2,d3");
    Acc& a = per_cond[r[0]];
    a.d1 += std::stod(r[2]);
    a.d2 += std::stod(r[3]);
    a.d3 += std::stod(r[4]);
    a.n += 1;
  }
  struct MosAcc {
    double sum = 0;
    int n = 0;
  };
  std::map<std::string, MosAcc> mos;
  for (size_t i = 1; i < mrows.size(); ++i) {
    const auto& r = mrows[i];
    if (r.size() < 2) throw DataError("mos row needs condition_id,rating");
    mos[r[0]].sum += std::stod(r[1]);
    mos[r[0]].n += 1;
  }

  std::string missing;
  for (const auto& [cond, acc] : per_cond)
    if (mos.find(cond) == mos.end()) missing += " " + cond;
  for (const auto& [cond, acc] : mos)
    if (per_cond.find(cond) == per_cond.end()) missing += " " + cond;
  if (!missing.empty()) throw DataError("condition keys missing from one input:" + missing);

  std::vector<double> d1, d2, d3, ratings;
  for (const auto& [cond, acc] : per_cond) {
    d1.push_back(-acc.d1 / acc.n);  // negate: lower distance = higher quality
    d2.push_back(-acc.d2 / acc.n);
    d3.push_back(-acc.d3 / acc.n);
    const MosAcc& m = mos.at(cond);
    ratings.push_back(m.sum / m.n);
  }
  SubjectiveResult res;
  res.n_conditions = static_cast<int>(ratings.size());
  res.sc_d1 = spearman(d1, ratings);
  res.sc_d2 = spearman(d2, ratings);
  res.sc_d3 = spearman(d3, ratings);
  return res;
}

void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel,
                     const std::vector<PlotSeries>& series) {
  const int w = 640, h = 420, ml = 70, mr = 20, mt = 40, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::ofstream os(path);
  if (!os) throw IoError("cannot write plot " + path);
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n"
     << "<rect width='100%' height='100%' fill='white'/>\n"
     << "<text x='" << w / 2 << "' y='24' text-anchor='middle' font-size='15'>" << title
     << "</text>\n"
     << "<text x='" << w / 2 << "' y='" << h - 12 << "' text-anchor='middle' font-size='12'>"
     << xlabel << "</text>\n"
     << "<text x='16' y='" << h / 2 << "' transform='rotate(-90 16 " << h / 2
     << ")' text-anchor='middle' font-size='12'>" << ylabel << "</text>\n"
     << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='" << h - mb
     << "' stroke='black'/>\n"
     << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << h - mb
     << "' stroke='black'/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double tx = xmin + (xmax - xmin) * tick / 4.0;
    const double ty = ymin + (ymax - ymin) * tick / 4.0;
    os << "<text x='" << px(tx) << "' y='" << h - mb + 16
       << "' text-anchor='middle' font-size='10'>" << fmt_num(tx, 3) << "</text>\n"
       << "<text x='" << ml - 6 << "' y='" << py(ty) + 3
       << "' text-anchor='end' font-size='10'>" << fmt_num(ty, 3) << "</text>\n";
  }
  for (size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kColors[si % 5];
    os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (size_t i = 0; i < s.x.size(); ++i) os << px(s.x[i]) << "," << py(s.y[i]) << " ";
    os << "'/>\n";
    for (size_t i = 0; i < s.x.size(); ++i)
      os << "<circle cx='" << px(s.x[i]) << "' cy='" << py(s.y[i]) << "' r='2.5' fill='" << color
         << "'/>\n";
    os << "<text x='" << w - mr - 8 << "' y='" << mt + 14 * (si + 1)
       << "' text-anchor='end' font-size='11' fill='" << color << "'>" << s.name << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace saqam::eval

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

#ifndef SAQAM_EVAL_SUITES_HPP_
#define SAQAM_EVAL_SUITES_HPP_

#include <string>
#include <vector>

#include "saqam/metric/metric.hpp"
#include "saqam/model/saqam_net.hpp"

namespace saqam::eval {

// Distance sweep against perturbation level (or angular separation for the
// pseudo-kind "angular", which sweeps D2 instead of D1). Pairs are always
// non-matched: reference and test carry different utterances.
struct MonotonicityResult {
  double sc = 0.0;                    // Spearman between level and mean distance
  std::vector<double> levels;
  std::vector<double> mean_distance;
};

MonotonicityResult monotonicity_suite(const model::SaqamNet& net,
                                      const std::string& perturbation_id,
                                      const std::vector<double>& levels, int n_contents,
                                      uint64_t seed);

// Per-condition correlation against a MOS file. Distances are averaged per
// condition, negated (distance falls as quality rises), and rank-correlated
// with the per-condition mean rating, so positive values mean agreement.
struct SubjectiveResult {
  int n_conditions = 0;
  double sc_d1 = 0.0, sc_d2 = 0.0, sc_d3 = 0.0;
};

// scores csv: condition_id,item_id,d1,d2,d3 (header row required)
// mos csv:    condition_id,rating (header row required)
SubjectiveResult subjective_correlation(const std::string& scores_csv,
                                        const std::string& mos_csv);

// Minimal line-plot writer (SVG) for the distance-vs-level curves.
struct PlotSeries {
  std::string name;
  std::vector<double> x, y;
};

void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel,
                     const std::vector<PlotSeries>& series);

}  // namespace saqam::eval

#endif  // SAQAM_EVAL_SUITES_HPP_

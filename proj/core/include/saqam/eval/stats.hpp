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

#ifndef SAQAM_EVAL_STATS_HPP_
#define SAQAM_EVAL_STATS_HPP_

#include <vector>

namespace saqam::eval {

// Overlap of the two normalized histograms over shared bin edges spanning
// the pooled range: sum of per-bin minima, in [0, 1].
double common_area(const std::vector<double>& dist_same, const std::vector<double>& dist_diff,
                   int n_bins = 50);

// Average ranks (1-based; ties get the mean of their rank span).
std::vector<double> average_ranks(const std::vector<double>& x);

// Spearman rank correlation: Pearson correlation of average ranks.
// Throws on constant input (correlation undefined).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Retrieval precision: for each query, rank all other items by ascending
// Euclidean distance (ties by index) and count the top-k sharing the query's
// label; returns the mean over queries.
double mean_precision_at_k(const std::vector<std::vector<double>>& embeddings,
                           const std::vector<int>& labels, int k);

// Same, from a precomputed symmetric distance matrix (row-major n x n).
double mean_precision_at_k_dist(const std::vector<double>& distances, int n,
                                const std::vector<int>& labels, int k);

}  // namespace saqam::eval

#endif  // SAQAM_EVAL_STATS_HPP_

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

#include "saqam/eval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "saqam/util/errors.hpp"

namespace saqam::eval {

double common_area(const std::vector<double>& dist_same, const std::vector<double>& dist_diff,
                   int n_bins) {
  if (dist_same.empty() || dist_diff.empty()) throw DataError("common_area: empty sample list");
  if (n_bins < 1) throw DomainError("common_area: n_bins must be >= 1");
  double lo = dist_same[0], hi = dist_same[0];
  for (double v : dist_same) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (double v : dist_diff) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi <= lo) return 1.0;  // identical degenerate histograms
  std::vector<double> ha(static_cast<size_t>(n_bins), 0.0), hb(static_cast<size_t>(n_bins), 0.0);
  auto bin_of = [&](double v) {
    int b = static_cast<int>((v - lo) / (hi - lo) * n_bins);
    return std::clamp(b, 0, n_bins - 1);
  };
  for (double v : dist_same) ha[static_cast<size_t>(bin_of(v))] += 1.0;
  for (double v : dist_diff) hb[static_cast<size_t>(bin_of(v))] += 1.0;
  double area = 0.0;
  for (int b = 0; b < n_bins; ++b)
    area += std::min(ha[static_cast<size_t>(b)] / static_cast<double>(dist_same.size()),
                     hb[static_cast<size_t>(b)] / static_cast<double>(dist_diff.size()));
  return area;
}

std::vector<double> average_ranks(const std::vector<double>& x) {
  const size_t n = x.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ContractError("spearman: length mismatch");
  if (x.size() < 3) throw DataError("spearman needs at least 3 points");
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw DataError("spearman undefined for constant input");
  return sxy / std::sqrt(sxx * syy);
}

namespace {

double precision_from_distance(const std::vector<double>& dist, int n,
                               const std::vector<int>& labels, int k) {
  double total = 0.0;
  std::vector<int> order;
  order.reserve(static_cast<size_t>(n) - 1);
  for (int q = 0; q < n; ++q) {
    order.clear();
    for (int j = 0; j < n; ++j)
      if (j != q) order.push_back(j);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double da = dist[static_cast<size_t>(q) * n + a];
      const double db = dist[static_cast<size_t>(q) * n + b];
      return da != db ? da < db : a < b;  // deterministic tie-break by index
    });
    int hits = 0;
    for (int r = 0; r < k; ++r)
      if (labels[static_cast<size_t>(order[static_cast<size_t>(r)])] ==
          labels[static_cast<size_t>(q)])
        ++hits;
    total += static_cast<double>(hits) / k;
  }
  return total / n;
}

}  // namespace

double mean_precision_at_k(const std::vector<std::vector<double>>& embeddings,
                           const std::vector<int>& labels, int k) {
  const int n = static_cast<int>(embeddings.size());
  if (labels.size() != embeddings.size()) throw ContractError("mp@k: label count mismatch");
  if (k < 1 || k >= n) throw DomainError("mp@k: need k in [1, n-1]");
  std::vector<double> dist(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (embeddings[static_cast<size_t>(i)].size() != embeddings[static_cast<size_t>(j)].size())
        throw ContractError("mp@k: embedding dimension mismatch");
      double ss = 0.0;
      for (size_t d = 0; d < embeddings[static_cast<size_t>(i)].size(); ++d) {
        const double diff =
            embeddings[static_cast<size_t>(i)][d] - embeddings[static_cast<size_t>(j)][d];
        ss += diff * diff;
      }
      dist[static_cast<size_t>(i) * n + j] = dist[static_cast<size_t>(j) * n + i] = std::sqrt(ss);
    }
  return precision_from_distance(dist, n, labels, k);
}

double mean_precision_at_k_dist(const std::vector<double>& distances, int n,
                                const std::vector<int>& labels, int k) {
  if (static_cast<int>(labels.size()) != n) throw ContractError("mp@k: label count mismatch");
  if (static_cast<int>(distances.size()) != n * n) throw ContractError("mp@k: matrix shape");
  if (k < 1 || k >= n) throw DomainError("mp@k: need k in [1, n-1]");
  return precision_from_distance(distances, n, labels, k);
}

}  // namespace saqam::eval

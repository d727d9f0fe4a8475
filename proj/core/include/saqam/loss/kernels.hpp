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

#ifndef SAQAM_LOSS_KERNELS_HPP_
#define SAQAM_LOSS_KERNELS_HPP_

#include <cmath>
#include <vector>

namespace saqam::loss {

template <typename S>
void softmax(const S* z, int n, S* out) {
  S zmax = z[0];
  for (int i = 1; i < n; ++i) zmax = std::max(zmax, z[i]);
  S sum = S(0);
  for (int i = 0; i < n; ++i) {
    out[i] = std::exp(z[i] - zmax);
    sum += out[i];
  }
  for (int i = 0; i < n; ++i) out[i] /= sum;
}

// Squared earth mover's distance between two discrete distributions:
// the sum of squared differences of their cumulative sums.
template <typename S>
S emd2_between(const S* phat, const S* p, int n) {
  S cum = S(0), acc = S(0);
  for (int i = 0; i < n; ++i) {
    cum += phat[i] - p[i];
    acc += cum * cum;
  }
  return acc;
}

// EMD^2(softmax(z), p). If dz is non-null, writes d/dz there (overwrites).
template <typename S>
S emd2_softmax(const S* z, const S* p, int n, S* dz) {
  std::vector<S> phat(static_cast<size_t>(n));
  softmax(z, n, phat.data());
  // c_k = cumulative difference up to k
  std::vector<S> c(static_cast<size_t>(n));
  S cum = S(0), acc = S(0);
  for (int i = 0; i < n; ++i) {
    cum += phat[i] - p[i];
    c[static_cast<size_t>(i)] = cum;
    acc += cum * cum;
  }
  if (dz != nullptr) {
    // s_j = dL/dphat_j = 2 * sum_{k >= j} c_k, then backprop through softmax.
    std::vector<S> s(static_cast<size_t>(n));
    S suffix = S(0);
    for (int j = n - 1; j >= 0; --j) {
      suffix += c[static_cast<size_t>(j)];
      s[static_cast<size_t>(j)] = S(2) * suffix;
    }
    S dot = S(0);
    for (int j = 0; j < n; ++j) dot += phat[static_cast<size_t>(j)] * s[static_cast<size_t>(j)];
    for (int i = 0; i < n; ++i)
      dz[i] = phat[static_cast<size_t>(i)] * (s[static_cast<size_t>(i)] - dot);
  }
  return acc;
}

// Cross entropy -sum p log softmax(z); dz (optional, overwritten) = phat - p.
template <typename S>
S xent_softmax(const S* z, const S* p, int n, S* dz) {
  std::vector<S> phat(static_cast<size_t>(n));
  softmax(z, n, phat.data());
  S acc = S(0);
  for (int i = 0; i < n; ++i) {
    if (p[i] > S(0)) acc -= p[i] * std::log(std::max(phat[static_cast<size_t>(i)], S(1e-30)));
    if (dz != nullptr) dz[i] = phat[static_cast<size_t>(i)] - p[i];
  }
  return acc;
}

// Hinge of Eq-style triplet objective on precomputed distances.
// Subgradient at the kink is taken as 0. d_loss/d_dap = active, d_dan = -active.
template <typename S>
S triplet_hinge(S d_ap, S d_an, S delta, S* d_dap, S* d_dan) {
  S t = d_ap - d_an + delta;
  bool active = t > S(0);
  if (d_dap != nullptr) *d_dap = active ? S(1) : S(0);
  if (d_dan != nullptr) *d_dan = active ? S(-1) : S(0);
  return active ? t : S(0);
}

}  // namespace saqam::loss

#endif  // SAQAM_LOSS_KERNELS_HPP_

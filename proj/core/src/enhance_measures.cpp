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

#include "saqam/enhance/measures.hpp"

#include <cmath>

#include "saqam/audio/stft.hpp"
#include "saqam/util/errors.hpp"

namespace saqam::enhance {

namespace {

constexpr double kEps = 1e-8;

struct Resolution {
  int fft, hop;
};
constexpr Resolution kResolutions[] = {{512, 128}, {1024, 256}, {2048, 512}};

const audio::StftPlan& plan_for(int fft, int hop) {
  static audio::StftPlan plans[3] = {
      audio::StftPlan::make(512, 128, audio::Window::kHann),
      audio::StftPlan::make(1024, 256, audio::Window::kHann),
      audio::StftPlan::make(2048, 512, audio::Window::kHann),
  };
  for (int i = 0; i < 3; ++i)
    if (kResolutions[i].fft == fft && kResolutions[i].hop == hop) return plans[i];
  throw ContractError("unknown mrstft resolution");
}

// spectral convergence + log-magnitude L1 for one channel at one resolution
double stft_terms(const std::vector<float>& est, const std::vector<float>& ref,
                  const audio::StftPlan& plan) {
  auto e = audio::stft(audio::BinauralSignal::from_mono(est), plan);
  auto r = audio::stft(audio::BinauralSignal::from_mono(ref), plan);
  double num = 0.0, den = 0.0, logl1 = 0.0;
  const int64_t n = static_cast<int64_t>(e.bins()) * e.frames();
  for (int64_t i = 0; i < n; ++i) {
    const double me = e.mag.v[static_cast<size_t>(i)];
    const double mr = r.mag.v[static_cast<size_t>(i)];
    num += (me - mr) * (me - mr);
    den += mr * mr;
    logl1 += std::abs(std::log(me + kEps) - std::log(mr + kEps));
  }
  return std::sqrt(num) / (std::sqrt(den) + kEps) + logl1 / static_cast<double>(n);
}

}  // namespace

double si_sdr_db(const std::vector<float>& estimate, const std::vector<float>& reference) {
  if (estimate.size() != reference.size()) throw ContractError("si_sdr: length mismatch");
  double dot = 0.0, ref_ss = 0.0;
  for (size_t i = 0; i < estimate.size(); ++i) {
    dot += static_cast<double>(estimate[i]) * reference[i];
    ref_ss += static_cast<double>(reference[i]) * reference[i];
  }
  if (ref_ss <= 0.0) throw DataError("si_sdr: zero reference");
  const double alpha = dot / ref_ss;
  double target_ss = 0.0, err_ss = 0.0;
  for (size_t i = 0; i < estimate.size(); ++i) {
    const double t = alpha * reference[i];
    const double e = estimate[i] - t;
    target_ss += t * t;
    err_ss += e * e;
  }
  if (err_ss <= 0.0 || target_ss <= 0.0) return kSiSdrCapDb;
  return std::min(kSiSdrCapDb, 10.0 * std::log10(target_ss / err_ss));
}

Measures measures(const audio::BinauralSignal& enhanced, const audio::BinauralSignal& clean) {
  if (enhanced.frames() != clean.frames()) throw ContractError("measures: length mismatch");
  if (clean.power() <= 0.0) throw DataError("measures: degenerate zero clean signal");
  Measures m;
  for (int c = 0; c < 2; ++c) {
    const auto& e = enhanced.ch[static_cast<size_t>(c)];
    const auto& r = clean.ch[static_cast<size_t>(c)];
    double se = 0.0;
    for (size_t i = 0; i < e.size(); ++i)
      se += (static_cast<double>(e[i]) - r[i]) * (static_cast<double>(e[i]) - r[i]);
    m.l2 += se / static_cast<double>(e.size()) / 2.0;
    m.si_sdr_db += si_sdr_db(e, r) / 2.0;
    double mr = 0.0;
    for (const auto& res : kResolutions) mr += stft_terms(e, r, plan_for(res.fft, res.hop)) / 3.0;
    m.mrstft += mr / 2.0;
  }
  return m;
}

}  // namespace saqam::enhance

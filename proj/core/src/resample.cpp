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

#include "saqam/audio/resample.hpp"

#include <cmath>

namespace saqam::audio {

namespace {

constexpr int kHalfWidth = 32;    // sinc half-width in samples of the slower rate
constexpr double kBeta = 10.0;    // Kaiser shape
constexpr double kCutoffFrac = 0.95;

double bessel_i0(double x) {
  // power series; converges quickly for the argument range we use
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= (x / (2.0 * k)) * (x / (2.0 * k));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

double kaiser(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  return bessel_i0(kBeta * std::sqrt(1.0 - u * u)) / bessel_i0(kBeta);
}

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  double px = M_PI * x;
  return std::sin(px) / px;
}

}  // namespace

std::vector<float> resample(const std::vector<float>& x, int from_rate, int to_rate) {
  if (from_rate <= 0 || to_rate <= 0) throw DomainError("sample rates must be positive");
  if (from_rate == to_rate) return x;
  const auto n = static_cast<int64_t>(x.size());
  const double ratio = static_cast<double>(to_rate) / from_rate;
  const auto m = static_cast<int64_t>(std::llround(static_cast<double>(n) * ratio));
  // anti-alias cutoff at the narrower Nyquist, half-width widened when decimating
  const double fc = 0.5 * kCutoffFrac * std::min(1.0, ratio);
  const double span = kHalfWidth * std::max(1.0, 1.0 / ratio);
  std::vector<float> y(static_cast<size_t>(m), 0.0f);
  for (int64_t i = 0; i < m; ++i) {
    const double center = static_cast<double>(i) / ratio;
    const auto k0 = static_cast<int64_t>(std::ceil(center - span));
    const auto k1 = static_cast<int64_t>(std::floor(center + span));
    double acc = 0.0, wsum = 0.0;
    for (int64_t k = std::max<int64_t>(0, k0); k <= std::min(n - 1, k1); ++k) {
      const double u = center - static_cast<double>(k);
      const double w = sinc(2.0 * fc * u) * kaiser(u / span);
      acc += w * x[static_cast<size_t>(k)];
      wsum += w;
    }
    // local kernel-sum normalization flattens the passband and fixes edges
    y[static_cast<size_t>(i)] = wsum > 1e-12 ? static_cast<float>(acc / wsum) : 0.0f;
  }
  return y;
}

BinauralSignal resample(const BinauralSignal& signal, int to_rate) {
  BinauralSignal out;
  out.sample_rate = to_rate;
  out.ch[0] = resample(signal.ch[0], signal.sample_rate, to_rate);
  out.ch[1] = resample(signal.ch[1], signal.sample_rate, to_rate);
  return out;
}

}  // namespace saqam::audio

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

#include "saqam/audio/stft.hpp"

namespace saqam::audio {

namespace {

constexpr float kPi = 3.14159265358979323846f;

using Mat = Eigen::MatrixXf;

// spec = analysis * frames. Returns a (2F x T) matrix for one channel.
Mat analyze_channel(const std::vector<float>& x, const StftPlan& plan, int64_t t) {
  const int n = plan.fft_size;
  Mat frames(n, t);
  for (int64_t fr = 0; fr < t; ++fr)
    for (int i = 0; i < n; ++i) frames(i, fr) = x[static_cast<size_t>(fr * plan.hop + i)];
  return plan.analysis * frames;
}

}  // namespace

const StftPlan& canonical_plan() {
  static const StftPlan plan = StftPlan::make(512, 256, Window::kHamming);
  return plan;
}

SpectroFeatures stft(const BinauralSignal& signal) { return stft(signal, canonical_plan()); }

SpectroFeatures stft(const BinauralSignal& signal, const StftPlan& plan) {
  signal.validate();
  const int64_t t = plan.frame_count(signal.frames());
  if (t < 1)
    throw DataError("signal too short for stft: " + std::to_string(signal.frames()) +
                    " < " + std::to_string(plan.fft_size) + " samples");
  const int f = plan.bins();
  SpectroFeatures out;
  out.hop = plan.hop;
  out.fft_size = plan.fft_size;
  out.mag = nn::Tensor({2, f, static_cast<int>(t)});
  out.phase = nn::Tensor({2, f, static_cast<int>(t)});
  for (int c = 0; c < 2; ++c) {
    Mat spec = analyze_channel(signal.ch[static_cast<size_t>(c)], plan, t);
    for (int k = 0; k < f; ++k)
      for (int64_t fr = 0; fr < t; ++fr) {
        float re = spec(k, fr);
        float im = spec(f + k, fr);
        int64_t idx = (static_cast<int64_t>(c) * f + k) * t + fr;
        out.mag.v[static_cast<size_t>(idx)] = std::sqrt(re * re + im * im);
        float p = std::atan2(im, re);
        if (p <= -kPi) p = kPi;  // keep phase in (-pi, pi]
        out.phase.v[static_cast<size_t>(idx)] = p;
      }
  }
  return out;
}

BinauralSignal istft(const SpectroFeatures& features, int64_t length) {
  return istft(features, length, canonical_plan());
}

BinauralSignal istft(const SpectroFeatures& features, int64_t length, const StftPlan& plan) {
  features.validate();
  if (features.fft_size != plan.fft_size || features.hop != plan.hop)
    throw ContractError("features do not match plan geometry");
  const int f = plan.bins();
  const int n = plan.fft_size;
  const int64_t t = features.frames();
  const std::vector<float> env = plan.wola_envelope(t);
  const int64_t extent = static_cast<int64_t>(env.size());

  BinauralSignal out(length, kSampleRate);
  Mat spec(2 * f, t);
  for (int c = 0; c < 2; ++c) {
    for (int k = 0; k < f; ++k)
      for (int64_t fr = 0; fr < t; ++fr) {
        int64_t idx = (static_cast<int64_t>(c) * f + k) * t + fr;
        float m = features.mag.v[static_cast<size_t>(idx)];
        float p = features.phase.v[static_cast<size_t>(idx)];
        spec(k, fr) = m * std::cos(p);
        spec(f + k, fr) = m * std::sin(p);
      }
    Mat frames = plan.synthesis * spec;  // (n x T) windowed time frames
    std::vector<double> acc(static_cast<size_t>(extent), 0.0);
    for (int64_t fr = 0; fr < t; ++fr)
      for (int i = 0; i < n; ++i)
        acc[static_cast<size_t>(fr * plan.hop + i)] +=
            static_cast<double>(plan.window[static_cast<size_t>(i)]) * frames(i, fr);
    for (int64_t i = 0; i < std::min(length, extent); ++i) {
      double e = static_cast<double>(env[static_cast<size_t>(i)]);
      out.ch[static_cast<size_t>(c)][static_cast<size_t>(i)] =
          static_cast<float>(acc[static_cast<size_t>(i)] / std::max(e, 1e-8));
    }
  }
  return out;
}

}  // namespace saqam::audio

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

#ifndef SAQAM_AUDIO_STFT_HPP_
#define SAQAM_AUDIO_STFT_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "saqam/audio/signal.hpp"
#include "saqam/nn/tensor.hpp"

namespace saqam::audio {

enum class Window { kHamming, kHann };

// One-sided short-time transform realized as two dense matrix products
// (analysis and least-squares synthesis). Sizes here are small enough that
// dense GEMM beats plan-based FFTs once setup cost is counted, and the
// linear-operator form is what the differentiable front-end needs anyway.
template <typename S>
struct StftPlanT {
  using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

  int fft_size = 512;
  int hop = 256;
  std::vector<S> window;  // periodic window of length fft_size
  Mat analysis;           // (2F x n): rows [0,F) real part, [F,2F) imag part
  Mat synthesis;          // (n x 2F): inverse one-sided DFT (no window)

  int bins() const { return fft_size / 2 + 1; }

  static StftPlanT make(int fft_size = 512, int hop = 256, Window w = Window::kHamming) {
    StftPlanT p;
    p.fft_size = fft_size;
    p.hop = hop;
    const int n = fft_size;
    const int f = n / 2 + 1;
    p.window.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      double c = std::cos(2.0 * M_PI * i / n);
      p.window[static_cast<size_t>(i)] =
          static_cast<S>(w == Window::kHamming ? 0.54 - 0.46 * c : 0.5 - 0.5 * c);
    }
    p.analysis.resize(2 * f, n);
    p.synthesis.resize(n, 2 * f);
    for (int k = 0; k < f; ++k) {
      for (int i = 0; i < n; ++i) {
        double ang = 2.0 * M_PI * k * i / n;
        double win = static_cast<double>(p.window[static_cast<size_t>(i)]);
        p.analysis(k, i) = static_cast<S>(std::cos(ang) * win);
        p.analysis(f + k, i) = static_cast<S>(-std::sin(ang) * win);
        double scale = (k == 0 || k == f - 1) ? 1.0 : 2.0;
        p.synthesis(i, k) = static_cast<S>(scale * std::cos(ang) / n);
        p.synthesis(i, f + k) = static_cast<S>(-scale * std::sin(ang) / n);
      }
    }
    return p;
  }

  int64_t frame_count(int64_t samples) const {
    return samples < fft_size ? 0 : (samples - fft_size) / hop + 1;
  }

  // Squared-window overlap-add envelope for `t` frames; length covers the
  // full synthesis extent (t-1)*hop + fft_size.
  std::vector<S> wola_envelope(int64_t t) const {
    std::vector<S> env(static_cast<size_t>((t - 1) * hop + fft_size), S(0));
    for (int64_t fr = 0; fr < t; ++fr)
      for (int i = 0; i < fft_size; ++i)
        env[static_cast<size_t>(fr * hop + i)] +=
            window[static_cast<size_t>(i)] * window[static_cast<size_t>(i)];
    return env;
  }
};

using StftPlan = StftPlanT<float>;

// Per-channel magnitude and phase time-frequency maps, F = fft_size/2 + 1.
struct SpectroFeatures {
  nn::Tensor mag;    // (2, F, T), non-negative
  nn::Tensor phase;  // (2, F, T), values in (-pi, pi]
  int hop = 256;
  int fft_size = 512;

  int bins() const { return mag.dim(1); }
  int frames() const { return mag.dim(2); }

  void validate() const {
    if (mag.rank() != 3 || !mag.same_shape(phase) || mag.dim(0) != 2)
      throw ContractError("features must be (2,F,T) mag/phase pairs");
    if (mag.dim(1) != fft_size / 2 + 1) throw ContractError("F does not match fft_size");
    for (float v : mag.v)
      if (v < 0.0f || !std::isfinite(v)) throw NumericError("invalid magnitude");
  }
};

const StftPlan& canonical_plan();

// Analysis with the canonical 512-point, hop-256 Hamming front-end.
// Requires at least one full window of samples.
SpectroFeatures stft(const BinauralSignal& signal);
SpectroFeatures stft(const BinauralSignal& signal, const StftPlan& plan);

// Weighted overlap-add reconstruction, cropped or zero-padded to `length`.
BinauralSignal istft(const SpectroFeatures& features, int64_t length);
BinauralSignal istft(const SpectroFeatures& features, int64_t length, const StftPlan& plan);

}  // namespace saqam::audio

#endif  // SAQAM_AUDIO_STFT_HPP_

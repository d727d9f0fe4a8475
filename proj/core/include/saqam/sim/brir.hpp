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

#ifndef SAQAM_SIM_BRIR_HPP_
#define SAQAM_SIM_BRIR_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "saqam/audio/signal.hpp"

namespace saqam::sim {

// Binaural room impulse response pair with its source geometry.
struct Brir {
  std::vector<float> left_ir, right_ir;
  double azimuth_deg = 0.0;    // (-180, 180], positive to the right
  double elevation_deg = 0.0;  // [-90, 90]
  double rt60_s = 0.0;         // [0, 1.0]

  void validate() const;
};

// Azimuth/elevation bin indices for the DOA targets: 50 azimuth bins over
// (-180, 180] and 25 elevation bins over [-90, 90], 7.2 degrees each.
struct SourceLabel {
  int az_bin = 0;
  int el_bin = 0;
};

inline constexpr int kAzBins = 50;
inline constexpr int kElBins = 25;
inline constexpr double kBinWidthDeg = 7.2;

SourceLabel source_label(double azimuth_deg, double elevation_deg);

// Center angles of a bin (used by evaluation sweeps).
double az_bin_center(int bin);
double el_bin_center(int bin);

// Spherical-head model: a fractionally delayed direct path carrying the
// ITD (0.09 m head radius over 343 m/s) and a 6 dB * sin(az) * cos(el)
// level difference toward the near ear, followed by an exponentially
// decaying decorrelated tail matching rt60. Deterministic given the seed.
Brir synth_brir(double azimuth_deg, double elevation_deg, double rt60_s, uint64_t seed);

// left = mono * left_ir, right = mono * right_ir (full convolution trimmed
// to the mono length); peak-normalized only when |peak| > 1.
audio::BinauralSignal binauralize(const std::vector<float>& mono, const Brir& brir);

// FFT-based linear convolution, trimmed to `out_len`.
std::vector<float> convolve(const std::vector<float>& x, const std::vector<float>& h,
                            int64_t out_len);

// User-supplied BRIRs: paired stereo WAV files listed in a CSV sidecar with
// columns path,azimuth_deg,elevation_deg,rt60_s (header required).
std::vector<Brir> load_brir_csv(const std::string& csv_path);

}  // namespace saqam::sim

#endif  // SAQAM_SIM_BRIR_HPP_

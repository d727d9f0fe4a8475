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

#include "saqam/sim/brir.hpp"

#include <unsupported/Eigen/FFT>
#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "saqam/audio/wav.hpp"
#include "saqam/util/errors.hpp"
#include "saqam/util/rng.hpp"

namespace saqam::sim {

namespace {

constexpr double kHeadRadiusM = 0.09;
constexpr double kSpeedOfSoundMs = 343.0;
constexpr double kIldMaxDb = 6.0;
constexpr int kBaseDelay = 32;          // samples before the direct arrival
constexpr int kSincHalfWidth = 24;      // fractional-delay kernel support
constexpr int kTailGap = 16;            // samples between direct path and tail
constexpr double kDirectToReverbDb = 5.0;

void check_angles(double az, double el) {
  if (!(az > -180.0 - 1e-9 && az <= 180.0 + 1e-9) || !std::isfinite(az))
    throw DomainError("azimuth must be in (-180, 180], got " + std::to_string(az));
  if (!(el >= -90.0 && el <= 90.0))
    throw DomainError("elevation must be in [-90, 90], got " + std::to_string(el));
}

// Hann-windowed sinc impulse centered at fractional position `center`.
void add_fractional_impulse(std::vector<float>& ir, double center, double gain) {
  const auto lo = static_cast<int64_t>(std::ceil(center - kSincHalfWidth));
  const auto hi = static_cast<int64_t>(std::floor(center + kSincHalfWidth));
  for (int64_t n = std::max<int64_t>(0, lo); n <= std::min<int64_t>(static_cast<int64_t>(ir.size()) - 1, hi); ++n) {
    const double u = static_cast<double>(n) - center;
    const double s = std::abs(u) < 1e-12 ? 1.0 : std::sin(M_PI * u) / (M_PI * u);
    const double w = 0.5 * (1.0 + std::cos(M_PI * u / kSincHalfWidth));
    ir[static_cast<size_t>(n)] += static_cast<float>(gain * s * w);
  }
}

}  // namespace

void Brir::validate() const {
  check_angles(azimuth_deg, elevation_deg);
  if (!(rt60_s >= 0.0 && rt60_s <= 1.0)) throw DomainError("rt60 must be in [0, 1.0] s");
  if (left_ir.size() != right_ir.size() || left_ir.empty())
    throw ContractError("BRIR ears must be nonempty and equal length");
  float peak = 0.0f;
  for (float v : left_ir) {
    if (!std::isfinite(v)) throw NumericError("non-finite BRIR sample");
    peak = std::max(peak, std::abs(v));
  }
  for (float v : right_ir) {
    if (!std::isfinite(v)) throw NumericError("non-finite BRIR sample");
    peak = std::max(peak, std::abs(v));
  }
  if (peak > 1.0f + 1e-6f) throw ContractError("BRIR not peak-normalized");
}

SourceLabel source_label(double azimuth_deg, double elevation_deg) {
  check_angles(azimuth_deg, elevation_deg);
  SourceLabel l;
  l.az_bin = std::clamp(static_cast<int>(std::floor((azimuth_deg + 180.0) / kBinWidthDeg)), 0,
                        kAzBins - 1);
  l.el_bin = std::clamp(static_cast<int>(std::floor((elevation_deg + 90.0) / kBinWidthDeg)), 0,
                        kElBins - 1);
  return l;
}

double az_bin_center(int bin) { return -180.0 + (bin + 0.5) * kBinWidthDeg; }
double el_bin_center(int bin) { return -90.0 + (bin + 0.5) * kBinWidthDeg; }

Brir synth_brir(double azimuth_deg, double elevation_deg, double rt60_s, uint64_t seed) {
  check_angles(azimuth_deg, elevation_deg);
  if (!(rt60_s >= 0.0 && rt60_s <= 1.0)) throw DomainError("rt60 must be in [0, 1.0] s");

  const double fs = audio::kSampleRate;
  const double lateral = std::sin(azimuth_deg * M_PI / 180.0) * std::cos(elevation_deg * M_PI / 180.0);
  const double itd_samples = kHeadRadiusM / kSpeedOfSoundMs * lateral * fs;
  const double ild_db = kIldMaxDb * lateral;  // positive: right ear louder

  // positive azimuth: right ear leads, left ear lags by |itd|
  const double right_pos = kBaseDelay + std::max(0.0, -itd_samples);
  const double left_pos = kBaseDelay + std::max(0.0, itd_samples);
  const double right_gain = std::pow(10.0, ild_db / 40.0);
  const double left_gain = std::pow(10.0, -ild_db / 40.0);

  const int tail_start = kBaseDelay + kSincHalfWidth + kTailGap;
  const int tail_len = rt60_s > 0.0 ? static_cast<int>(std::ceil(rt60_s * fs * 1.1)) : 0;
  const int total = tail_start + std::max(tail_len, kSincHalfWidth + 1);

  Brir b;
  b.azimuth_deg = azimuth_deg;
  b.elevation_deg = elevation_deg;
  b.rt60_s = rt60_s;
  b.left_ir.assign(static_cast<size_t>(total), 0.0f);
  b.right_ir.assign(static_cast<size_t>(total), 0.0f);
  add_fractional_impulse(b.left_ir, left_pos, left_gain);
  add_fractional_impulse(b.right_ir, right_pos, right_gain);

  if (tail_len > 0) {
    Rng rng(derive_seed(seed, "brir-tail"));
    // amplitude envelope dropping 60 dB of energy over rt60
    double env_ss = 0.0;
    std::vector<double> env(static_cast<size_t>(tail_len));
    for (int n = 0; n < tail_len; ++n) {
      env[static_cast<size_t>(n)] = std::pow(10.0, -3.0 * (n / fs) / rt60_s);
      env_ss += env[static_cast<size_t>(n)] * env[static_cast<size_t>(n)];
    }
    const double direct_energy = left_gain * left_gain + right_gain * right_gain;
    const double tail_energy = direct_energy * std::pow(10.0, -kDirectToReverbDb / 10.0);
    const double sigma = std::sqrt(tail_energy / (2.0 * env_ss));  // per ear
    for (int n = 0; n < tail_len; ++n) {
      const double e = sigma * env[static_cast<size_t>(n)];
      b.left_ir[static_cast<size_t>(tail_start + n)] += static_cast<float>(e * rng.normal());
      b.right_ir[static_cast<size_t>(tail_start + n)] += static_cast<float>(e * rng.normal());
    }
  }

  float peak = 0.0f;
  for (float v : b.left_ir) peak = std::max(peak, std::abs(v));
  for (float v : b.right_ir) peak = std::max(peak, std::abs(v));
  if (peak > 1.0f) {
    const float inv = 1.0f / peak;
    for (float& v : b.left_ir) v *= inv;
    for (float& v : b.right_ir) v *= inv;
  }
  return b;
}

std::vector<float> convolve(const std::vector<float>& x, const std::vector<float>& h,
                            int64_t out_len) {
  const int64_t full = static_cast<int64_t>(x.size()) + static_cast<int64_t>(h.size()) - 1;
  int64_t nfft = 1;
  while (nfft < full) nfft <<= 1;
  Eigen::FFT<float> fft;
  std::vector<float> xa(static_cast<size_t>(nfft), 0.0f), ha(static_cast<size_t>(nfft), 0.0f);
  std::copy(x.begin(), x.end(), xa.begin());
  std::copy(h.begin(), h.end(), ha.begin());
  std::vector<std::complex<float>> xf, hf;
  fft.fwd(xf, xa);
  fft.fwd(hf, ha);
  for (size_t i = 0; i < xf.size(); ++i) xf[i] *= hf[i];
  std::vector<float> y;
  fft.inv(y, xf);
  y.resize(static_cast<size_t>(std::min(out_len, full)));
  y.resize(static_cast<size_t>(out_len), 0.0f);
  return y;
}

audio::BinauralSignal binauralize(const std::vector<float>& mono, const Brir& brir) {
  if (mono.empty()) throw DataError("binauralize: empty input");
  brir.validate();
  audio::BinauralSignal out;
  out.sample_rate = audio::kSampleRate;
  out.ch[0] = convolve(mono, brir.left_ir, static_cast<int64_t>(mono.size()));
  out.ch[1] = convolve(mono, brir.right_ir, static_cast<int64_t>(mono.size()));
  const float peak = out.peak();
  if (peak > 1.0f) {
    const float inv = 1.0f / peak;
    for (auto& c : out.ch)
      for (float& v : c) v *= inv;
  }
  return out;
}

std::vector<Brir> load_brir_csv(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw IoError("cannot open BRIR list " + csv_path);
  const auto base = std::filesystem::path(csv_path).parent_path();
  std::vector<Brir> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::stringstream ss(line);
    std::string path, az, el, rt;
    if (!std::getline(ss, path, ',') || !std::getline(ss, az, ',') ||
        !std::getline(ss, el, ',') || !std::getline(ss, rt, ','))
      throw DataError("malformed BRIR row: " + line);
    audio::BinauralSignal pair = audio::read_wav((base / path).string());
    Brir b;
    b.left_ir = pair.ch[0];
    b.right_ir = pair.ch[1];
    b.azimuth_deg = std::stod(az);
    b.elevation_deg = std::stod(el);
    b.rt60_s = std::stod(rt);
    float peak = 0.0f;
    for (float v : b.left_ir) peak = std::max(peak, std::abs(v));
    for (float v : b.right_ir) peak = std::max(peak, std::abs(v));
    if (peak > 1.0f) {
      const float inv = 1.0f / peak;
      for (float& v : b.left_ir) v *= inv;
      for (float& v : b.right_ir) v *= inv;
    }
    b.validate();
    out.push_back(std::move(b));
  }
  if (out.empty()) throw DataError("no BRIR rows in " + csv_path);
  return out;
}

}  // namespace saqam::sim

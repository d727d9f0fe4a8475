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

#include "saqam/sim/speech.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "saqam/audio/signal.hpp"
#include "saqam/audio/wav.hpp"
#include "saqam/util/errors.hpp"
#include "saqam/util/rng.hpp"

namespace saqam::sim {

namespace {

constexpr double kFs = audio::kSampleRate;

// RBJ constant-skirt bandpass biquad.
struct Biquad {
  double b0, b1, b2, a1, a2;
  double z1 = 0.0, z2 = 0.0;

  static Biquad bandpass(double f0, double bw_hz) {
    const double w0 = 2.0 * M_PI * f0 / kFs;
    const double q = f0 / bw_hz;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    Biquad b{};
    b.b0 = alpha / a0;
    b.b1 = 0.0;
    b.b2 = -alpha / a0;
    b.a1 = -2.0 * std::cos(w0) / a0;
    b.a2 = (1.0 - alpha) / a0;
    return b;
  }

  double tick(double x) {
    const double y = b0 * x + z1;
    z1 = b1 * x - a1 * y + z2;
    z2 = b2 * x - a2 * y;
    return y;
  }
};

void normalize_peak(std::vector<float>& x, float target) {
  float peak = 0.0f;
  for (float v : x) peak = std::max(peak, std::abs(v));
  if (peak > 1e-9f) {
    const float s = target / peak;
    for (float& v : x) v *= s;
  }
}

}  // namespace

std::vector<float> synth_utterance(double seconds, uint64_t seed) {
  Rng rng(derive_seed(seed, "utterance"));
  const auto total = static_cast<int64_t>(seconds * kFs);
  std::vector<float> out(static_cast<size_t>(total), 0.0f);

  // per-speaker formant layout and pitch register
  const double f1 = rng.uniform(300.0, 750.0);
  const double f2 = rng.uniform(900.0, 2000.0);
  const double f3 = rng.uniform(2200.0, 3200.0);
  const double f0_base = rng.uniform(90.0, 230.0);

  int64_t pos = 0;
  while (pos < total) {
    const auto seg = static_cast<int64_t>(rng.uniform(0.06, 0.24) * kFs);
    const double kind = rng.uniform();
    if (kind < 0.18) {  // pause
      pos += seg;
      continue;
    }
    const int64_t end = std::min(total, pos + seg);
    const int64_t len = end - pos;
    std::vector<double> excite(static_cast<size_t>(len), 0.0);
    if (kind < 0.80) {  // voiced: drifting pulse train
      double f0 = f0_base * rng.uniform(0.85, 1.2);
      const double drift = rng.uniform(-40.0, 40.0) / (seconds * kFs);
      double phase = rng.uniform();
      for (int64_t i = 0; i < len; ++i) {
        phase += f0 / kFs;
        f0 = std::max(60.0, f0 + drift);
        if (phase >= 1.0) {
          phase -= 1.0;
          excite[static_cast<size_t>(i)] = 1.0;
        }
      }
    } else {  // unvoiced burst
      for (auto& v : excite) v = 0.35 * rng.normal();
    }
    Biquad r1 = Biquad::bandpass(f1 * rng.uniform(0.85, 1.15), 110.0);
    Biquad r2 = Biquad::bandpass(f2 * rng.uniform(0.85, 1.15), 170.0);
    Biquad r3 = Biquad::bandpass(f3 * rng.uniform(0.9, 1.1), 260.0);
    const double g2 = rng.uniform(0.4, 0.9), g3 = rng.uniform(0.15, 0.5);
    const int64_t fade = std::min<int64_t>(len / 4, static_cast<int64_t>(0.005 * kFs));
    for (int64_t i = 0; i < len; ++i) {
      const double e = excite[static_cast<size_t>(i)];
      double v = r1.tick(e) + g2 * r2.tick(e) + g3 * r3.tick(e);
      double w = 1.0;
      if (i < fade) w = 0.5 * (1.0 - std::cos(M_PI * i / fade));
      if (len - 1 - i < fade) w = std::min(w, 0.5 * (1.0 - std::cos(M_PI * (len - 1 - i) / fade)));
      out[static_cast<size_t>(pos + i)] = static_cast<float>(v * w);
    }
    pos = end;
  }
  normalize_peak(out, 0.35f);
  return out;
}

CleanPool synth_pool(int count, double seconds, uint64_t seed) {
  CleanPool pool;
  pool.utterances.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i)
    pool.utterances.push_back(synth_utterance(seconds, derive_seed(seed, "pool", static_cast<uint64_t>(i))));
  return pool;
}

CleanPool load_pool_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("clean pool directory not found: " + dir);
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".wav") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  CleanPool pool;
  for (const auto& f : files) {
    audio::BinauralSignal s = audio::read_wav(f);
    std::vector<float> mono(static_cast<size_t>(s.frames()));
    for (int64_t i = 0; i < s.frames(); ++i)
      mono[static_cast<size_t>(i)] =
          0.5f * (s.ch[0][static_cast<size_t>(i)] + s.ch[1][static_cast<size_t>(i)]);
    pool.utterances.push_back(std::move(mono));
  }
  if (pool.utterances.empty()) throw DataError("no wav files in clean pool " + dir);
  return pool;
}

std::vector<float> synth_noise(double seconds, NoiseColor color, uint64_t seed) {
  Rng rng(derive_seed(seed, "noise"));
  const auto n = static_cast<int64_t>(seconds * kFs);
  std::vector<float> out(static_cast<size_t>(n));
  if (color == NoiseColor::kWhite) {
    for (auto& v : out) v = static_cast<float>(rng.normal());
  } else {
    // Paul Kellet's economy pink filter
    double b0 = 0, b1 = 0, b2 = 0;
    for (auto& v : out) {
      const double w = rng.normal();
      b0 = 0.99765 * b0 + w * 0.0990460;
      b1 = 0.96300 * b1 + w * 0.2965164;
      b2 = 0.57000 * b2 + w * 1.0526913;
      v = static_cast<float>(b0 + b1 + b2 + w * 0.1848);
    }
  }
  normalize_peak(out, 0.5f);
  return out;
}

}  // namespace saqam::sim

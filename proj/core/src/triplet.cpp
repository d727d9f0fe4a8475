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

#include "saqam/sim/triplet.hpp"

#include <algorithm>
#include <cmath>

#include "saqam/audio/mix.hpp"
#include "saqam/util/errors.hpp"
#include "saqam/util/rng.hpp"

namespace saqam::sim {

namespace {

constexpr int kMaxLevelRedraws = 100;

// 3-second excerpt at a random offset; zero-padded when too short.
std::vector<float> excerpt(const std::vector<float>& utt, Rng& rng) {
  std::vector<float> out(static_cast<size_t>(kClipSamples), 0.0f);
  const auto n = static_cast<int64_t>(utt.size());
  if (n <= kClipSamples) {
    std::copy(utt.begin(), utt.end(), out.begin());
  } else {
    const auto off = static_cast<int64_t>(rng.below(static_cast<uint64_t>(n - kClipSamples + 1)));
    std::copy_n(utt.begin() + off, kClipSamples, out.begin());
  }
  return out;
}

Brir sample_brir(Rng& rng, const SpatialSampling& sp, uint64_t seed) {
  const double az = rng.uniform(-180.0, 180.0);
  const double el = rng.uniform(sp.el_min_deg, sp.el_max_deg);
  const double rt = rng.uniform(sp.rt60_min_s, sp.rt60_max_s);
  return synth_brir(az, el, rt, seed);
}

}  // namespace

void Triplet::validate() const {
  if (!(std::abs(level_anchor - level_positive) < std::abs(level_anchor - level_negative)))
    throw ContractError("triplet level ordering violated");
  if (utterance_ids[0] == utterance_ids[1] || utterance_ids[0] == utterance_ids[2] ||
      utterance_ids[1] == utterance_ids[2])
    throw ContractError("triplet utterances must be pairwise distinct");
}

Triplet make_triplet(const CleanPool& pool, Perturbation kind, uint64_t seed,
                     const SpatialSampling& spatial) {
  if (pool.size() < 3) throw DataError("clean pool needs at least 3 utterances");
  Rng rng(derive_seed(seed, "triplet"));

  // three distinct utterances
  std::array<int, 3> ids{};
  ids[0] = static_cast<int>(rng.below(pool.size()));
  do ids[1] = static_cast<int>(rng.below(pool.size()));
  while (ids[1] == ids[0]);
  do ids[2] = static_cast<int>(rng.below(pool.size()));
  while (ids[2] == ids[0] || ids[2] == ids[1]);

  // levels: anchor is the first draw; of the other two, the closer one
  // becomes the positive. Ties are redrawn.
  const LevelRange range = level_range(kind);
  double la = 0, lp = 0, ln = 0;
  bool ok = false;
  for (int attempt = 0; attempt < kMaxLevelRedraws && !ok; ++attempt) {
    la = rng.uniform(range.lo, range.hi);
    const double l2 = rng.uniform(range.lo, range.hi);
    const double l3 = rng.uniform(range.lo, range.hi);
    const double d2 = std::abs(la - l2), d3 = std::abs(la - l3);
    if (d2 == d3) continue;
    lp = d2 < d3 ? l2 : l3;
    ln = d2 < d3 ? l3 : l2;
    ok = true;
  }
  if (!ok) throw DataError("could not draw strictly ordered perturbation levels");

  Triplet t;
  t.kind = kind;
  t.utterance_ids = ids;
  t.level_anchor = la;
  t.level_positive = lp;
  t.level_negative = ln;

  const uint64_t perturb_seed = derive_seed(seed, "triplet-perturb");
  audio::BinauralSignal* outs[3] = {&t.anchor, &t.positive, &t.negative};
  const double levels[3] = {la, lp, ln};
  for (int i = 0; i < 3; ++i) {
    auto mono = excerpt(pool.utterances[static_cast<size_t>(ids[static_cast<size_t>(i)])], rng);
    Brir brir = sample_brir(rng, spatial, derive_seed(seed, "triplet-brir", static_cast<uint64_t>(i)));
    auto clip = binauralize(mono, brir);
    *outs[i] = perturb(clip, kind, levels[i], perturb_seed);
  }
  t.validate();
  return t;
}

audio::BinauralSignal augment_shift(const audio::BinauralSignal& signal, uint64_t seed) {
  Rng rng(derive_seed(seed, "shift"));
  const int64_t silence = static_cast<int64_t>(0.25 * audio::kSampleRate);
  const bool prepend = rng.coin();
  audio::BinauralSignal ext(signal.frames() + silence, signal.sample_rate);
  for (int c = 0; c < 2; ++c) {
    auto& dst = ext.ch[static_cast<size_t>(c)];
    const auto& src = signal.ch[static_cast<size_t>(c)];
    std::copy(src.begin(), src.end(), dst.begin() + (prepend ? silence : 0));
  }
  // re-crop to 3 s keeping the silence-side edge
  if (prepend) return ext.slice(0, kClipSamples);
  return ext.slice(ext.frames() - kClipSamples, kClipSamples);
}

DoaClip make_doa_clip(const CleanPool& pool, double azimuth_deg, double elevation_deg,
                      double rt60_s, double noise_snr_db, uint64_t seed) {
  if (pool.size() < 1) throw DataError("clean pool is empty");
  Rng rng(derive_seed(seed, "doa"));
  DoaClip clip;
  clip.utterance_id = static_cast<int>(rng.below(pool.size()));
  clip.azimuth_deg = azimuth_deg;
  clip.elevation_deg = elevation_deg;
  clip.label = source_label(azimuth_deg, elevation_deg);
  auto mono = excerpt(pool.utterances[static_cast<size_t>(clip.utterance_id)], rng);
  Brir brir = synth_brir(azimuth_deg, elevation_deg, rt60_s, derive_seed(seed, "doa-brir"));
  clip.signal = binauralize(mono, brir);
  if (!(std::isinf(noise_snr_db) && noise_snr_db > 0))
    clip.signal = perturb(clip.signal, Perturbation::kAdditiveNoise, noise_snr_db,
                          derive_seed(seed, "doa-noise"));
  return clip;
}

}  // namespace saqam::sim

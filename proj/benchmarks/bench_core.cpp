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

#include <benchmark/benchmark.h>

#include "saqam/audio/stft.hpp"
#include "saqam/metric/metric.hpp"
#include "saqam/model/saqam_net.hpp"
#include "saqam/sim/brir.hpp"
#include "saqam/util/rng.hpp"

namespace {

using namespace saqam;

audio::BinauralSignal random_signal(int64_t n, uint64_t seed) {
  audio::BinauralSignal s(n);
  Rng rng(seed);
  for (auto& c : s.ch)
    for (auto& v : c) v = 0.3f * static_cast<float>(rng.normal());
  return s;
}

void BM_Stft3s(benchmark::State& state) {
  auto x = random_signal(48000, 1);
  for (auto _ : state) benchmark::DoNotOptimize(audio::stft(x));
}
BENCHMARK(BM_Stft3s)->Unit(benchmark::kMillisecond);

void BM_Binauralize(benchmark::State& state) {
  Rng rng(2);
  std::vector<float> mono(48000);
  for (auto& v : mono) v = 0.3f * static_cast<float>(rng.normal());
  auto brir = sim::synth_brir(45.0, 10.0, 0.5, 3);
  for (auto _ : state) benchmark::DoNotOptimize(sim::binauralize(mono, brir));
}
BENCHMARK(BM_Binauralize)->Unit(benchmark::kMillisecond);

void BM_ModelForward3s(benchmark::State& state) {
  model::ModelConfig cfg;
  cfg.inception_width = static_cast<int>(state.range(0));
  model::SaqamNet net(cfg, 7);
  auto feats = audio::stft(random_signal(48000, 4));
  for (auto _ : state) {
    nn::Graph g;
    auto out = net.forward(g, net.input_from_features(g, feats), false);
    benchmark::DoNotOptimize(out.lq_embedding.val()[0]);
  }
}
BENCHMARK(BM_ModelForward3s)->Arg(64)->Arg(36)->Unit(benchmark::kMillisecond);

void BM_Score3s(benchmark::State& state) {
  model::ModelConfig cfg;
  model::SaqamNet net(cfg, 7);
  auto x = random_signal(48000, 5);
  auto y = random_signal(48000, 6);
  for (auto _ : state) benchmark::DoNotOptimize(metric::score(net, x, y).d1_lq);
}
BENCHMARK(BM_Score3s)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

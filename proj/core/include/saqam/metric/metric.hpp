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

#ifndef SAQAM_METRIC_METRIC_HPP_
#define SAQAM_METRIC_METRIC_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "saqam/audio/signal.hpp"
#include "saqam/model/saqam_net.hpp"
#include "saqam/nn/ops.hpp"

namespace saqam::metric {

// Ordered list of named feature maps captured from one forward pass.
using ActivationStack = std::vector<std::pair<std::string, nn::Tensor>>;

inline constexpr int64_t kMinScoreSamples = 8000;  // 0.5 s at 16 kHz

struct DistanceReport {
  double d1_lq = 0.0;
  double d2_sq = 0.0;
  double d3_ovrl = 0.0;
  std::map<std::string, double> per_layer;
};

// Mean absolute difference of channel-wise unit-normalized activations,
// averaged per layer and then over layers. Symmetric, zero on identical
// stacks. Layer names and shapes must agree.
double deep_feature_distance(const ActivationStack& a, const ActivationStack& b,
                             std::map<std::string, double>* per_layer = nullptr);

// All three stacks of one signal, cached so that batch evaluations forward
// each clip exactly once.
struct CachedStacks {
  ActivationStack body, lq, sq;
  int64_t padded_frames = 0;
};

CachedStacks compute_stacks(const model::SaqamNet& net, const audio::BinauralSignal& x);

DistanceReport distance(const CachedStacks& a, const CachedStacks& b);

// Non-matched-reference scoring: the two signals need not share content,
// length, or alignment; the shorter is zero-padded before the forward pass.
// Both must be at least 0.5 s long. Lower values mean more similar.
DistanceReport score(const model::SaqamNet& net, const audio::BinauralSignal& x1,
                     const audio::BinauralSignal& x2);

// Graph-building deep-feature distance for training-time use.
template <typename S>
nn::VarT<S> dfd_var(const model::NamedStack<S>& a, const model::NamedStack<S>& b) {
  if (a.size() != b.size() || a.empty()) throw ContractError("dfd: stack layout mismatch");
  nn::VarT<S> acc;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].first != b[i].first) throw ContractError("dfd: layer name mismatch");
    auto na = nn::channel_unit_normalize(a[i].second);
    auto nb = nn::channel_unit_normalize(b[i].second);
    auto layer = nn::mean_all(nn::abs_op(nn::sub(na, nb)));
    acc = i == 0 ? layer : nn::add(acc, layer);
  }
  return nn::scale(acc, S(1) / static_cast<S>(a.size()));
}

}  // namespace saqam::metric

#endif  // SAQAM_METRIC_METRIC_HPP_

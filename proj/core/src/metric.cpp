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

#include "saqam/metric/metric.hpp"

#include <cmath>

namespace saqam::metric {

namespace {

// Layer term in double precision; formula mirrors nn::channel_unit_normalize.
double layer_distance(const nn::Tensor& a, const nn::Tensor& b) {
  const int c = a.dim(0);
  const int64_t inner = a.numel() / c;
  double acc = 0.0;
  std::vector<double> na(static_cast<size_t>(inner)), nb(static_cast<size_t>(inner));
  for (int ci = 0; ci < c; ++ci) {
    double ssa = 0.0, ssb = 0.0;
    const float* ap = &a.v[static_cast<size_t>(ci * inner)];
    const float* bp = &b.v[static_cast<size_t>(ci * inner)];
    for (int64_t i = 0; i < inner; ++i) {
      ssa += static_cast<double>(ap[i]) * ap[i];
      ssb += static_cast<double>(bp[i]) * bp[i];
    }
    const double eps2 = nn::kChannelNormEps * nn::kChannelNormEps;
    const double inva = 1.0 / std::sqrt(ssa + eps2);
    const double invb = 1.0 / std::sqrt(ssb + eps2);
    for (int64_t i = 0; i < inner; ++i) acc += std::abs(ap[i] * inva - bp[i] * invb);
  }
  return acc / static_cast<double>(a.numel());
}

double stack_distance(const ActivationStack& a, const ActivationStack& b,
                      std::map<std::string, double>* per_layer) {
  if (a.size() != b.size() || a.empty()) throw ContractError("mismatched activation stacks");
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].first != b[i].first || a[i].second.shape != b[i].second.shape)
      throw ContractError("mismatched activation stacks at layer " + a[i].first);
    double d = layer_distance(a[i].second, b[i].second);
    if (per_layer != nullptr) (*per_layer)[a[i].first] = d;
    acc += d;
  }
  return acc / static_cast<double>(a.size());
}

ActivationStack detach(const model::NamedStack<float>& s) {
  ActivationStack out;
  out.reserve(s.size());
  for (const auto& [name, var] : s) out.emplace_back(name, var.val());
  return out;
}

}  // namespace

double deep_feature_distance(const ActivationStack& a, const ActivationStack& b,
                             std::map<std::string, double>* per_layer) {
  return stack_distance(a, b, per_layer);
}

CachedStacks compute_stacks(const model::SaqamNet& net, const audio::BinauralSignal& x) {
  nn::Graph g;
  auto features = audio::stft(x);
  auto out = net.forward(g, net.input_from_features(g, features), false);
  CachedStacks s;
  s.body = detach(out.body_stack);
  s.lq = detach(out.lq_stack);
  s.sq = detach(out.sq_stack);
  s.padded_frames = features.frames();
  return s;
}

DistanceReport distance(const CachedStacks& a, const CachedStacks& b) {
  DistanceReport r;
  r.d1_lq = stack_distance(a.lq, b.lq, &r.per_layer);
  r.d2_sq = stack_distance(a.sq, b.sq, &r.per_layer);
  r.d3_ovrl = stack_distance(a.body, b.body, &r.per_layer);
  return r;
}

DistanceReport score(const model::SaqamNet& net, const audio::BinauralSignal& x1,
                     const audio::BinauralSignal& x2) {
  if (x1.frames() < kMinScoreSamples || x2.frames() < kMinScoreSamples)
    throw DataError("score inputs must be at least 0.5 s long");
  const int64_t n = std::max(x1.frames(), x2.frames());
  CachedStacks a = compute_stacks(net, x1.frames() == n ? x1 : x1.crop_or_pad(n));
  CachedStacks b = compute_stacks(net, x2.frames() == n ? x2 : x2.crop_or_pad(n));
  return distance(a, b);
}

}  // namespace saqam::metric

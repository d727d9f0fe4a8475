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

#ifndef SAQAM_ENHANCE_LOSSES_HPP_
#define SAQAM_ENHANCE_LOSSES_HPP_

#include "saqam/metric/metric.hpp"
#include "saqam/model/saqam_net.hpp"
#include "saqam/nn/ops.hpp"

namespace saqam::enhance {

inline constexpr double kLogMseEps = 1e-8;

// log(mean((est_re - tgt_re)^2 + (est_im - tgt_im)^2) + eps), the mean taken
// over both channels' real and imaginary planes.
template <typename S>
nn::VarT<S> logmse_loss(nn::VarT<S> est_c4, nn::VarT<S> tgt_c4) {
  auto d = nn::sub(est_c4, tgt_c4);
  return nn::log_eps(nn::mean_all(nn::mul(d, d)), static_cast<S>(kLogMseEps));
}

// D1 + D2 + D3 between the enhanced output and the clean target, built on a
// frozen metric model (no gradient flows into it). `enhanced_wave` is a
// (2, N) graph var; the clean side is forwarded without gradients.
template <typename S>
nn::VarT<S> saqam_loss(const model::SaqamNetT<S>& metric_net, nn::VarT<S> enhanced_wave,
                       const nn::TensorT<S>& clean_wave) {
  nn::GraphT<S>& g = *enhanced_wave.g;
  auto enh_in = metric_net.input_from_waveform(g, enhanced_wave);
  auto enh = metric_net.forward(g, enh_in, false);
  auto clean_leaf = g.leaf(clean_wave, false);
  auto clean_in = metric_net.input_from_waveform(g, clean_leaf);
  auto clean = metric_net.forward(g, clean_in, false);
  auto d1 = metric::dfd_var(enh.lq_stack, clean.lq_stack);
  auto d2 = metric::dfd_var(enh.sq_stack, clean.sq_stack);
  auto d3 = metric::dfd_var(enh.body_stack, clean.body_stack);
  return nn::add(nn::add(d1, d2), d3);
}

}  // namespace saqam::enhance

#endif  // SAQAM_ENHANCE_LOSSES_HPP_

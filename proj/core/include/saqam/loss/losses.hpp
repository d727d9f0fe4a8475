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

#ifndef SAQAM_LOSS_LOSSES_HPP_
#define SAQAM_LOSS_LOSSES_HPP_

#include <vector>

#include "saqam/loss/kernels.hpp"
#include "saqam/util/errors.hpp"

namespace saqam::loss {

// Discrete soft label: mass 0.4 at the true bin, 0.2 one bin away, 0.1 two
// bins away. Azimuth labels wrap around; elevation labels fold the
// out-of-range mass onto the nearest boundary bin so the sum stays 1.
struct SoftLabel {
  std::vector<double> probs;
  int v = 0;
  bool wraparound = false;
};

SoftLabel soft_label(int v, int n_bins, bool wraparound);

template <typename S>
std::vector<S> label_probs(const SoftLabel& label) {
  std::vector<S> out(label.probs.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<S>(label.probs[i]);
  return out;
}

// EMD^2 between softmax(logits) and the soft label; optionally returns
// d/dlogits. Differentiable everywhere.
double emd2_loss(const std::vector<double>& logits, const SoftLabel& label,
                 std::vector<double>* grad_logits = nullptr);

// Soft-label cross entropy (kept as the ablation alternative to EMD^2).
double xent_loss(const std::vector<double>& logits, const SoftLabel& label,
                 std::vector<double>* grad_logits = nullptr);

// max{0, d_ap - d_an + delta}; subgradient 0 at the kink.
double triplet_loss(double d_ap, double d_an, double delta);
double triplet_loss_grad(double d_ap, double d_an, double delta, double* d_dap, double* d_dan);

// Margin grows linearly from delta_start at epoch 0 to delta_end at the
// final epoch.
struct MarginSchedule {
  double delta_start = 0.5;
  double delta_end = 1.5;
  int total_epochs = 1;
};

double margin_at(const MarginSchedule& schedule, int epoch);

// Weighted combination of the two task objectives. A batch carrying only one
// task's labels passes 0 for the missing term.
struct MtlWeights {
  double w_lq = 1.0;
  double w_sq = 1.0;
};

double mtl_loss(double triplet_term, double emd_term, const MtlWeights& weights);

}  // namespace saqam::loss

#endif  // SAQAM_LOSS_LOSSES_HPP_

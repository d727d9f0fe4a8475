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

#include "saqam/loss/losses.hpp"

#include <algorithm>
#include <string>

namespace saqam::loss {

SoftLabel soft_label(int v, int n_bins, bool wraparound) {
  if (n_bins < 5) throw DomainError("soft_label requires n_bins >= 5");
  if (v < 0 || v >= n_bins)
    throw DomainError("soft_label bin " + std::to_string(v) + " outside [0, " +
                      std::to_string(n_bins) + ")");
  static constexpr double kMass[5] = {0.1, 0.2, 0.4, 0.2, 0.1};
  SoftLabel label;
  label.v = v;
  label.wraparound = wraparound;
  label.probs.assign(static_cast<size_t>(n_bins), 0.0);
  for (int off = -2; off <= 2; ++off) {
    int bin = v + off;
    if (wraparound) {
      bin = ((bin % n_bins) + n_bins) % n_bins;
    } else {
      bin = std::clamp(bin, 0, n_bins - 1);  // fold onto the nearest boundary
    }
    label.probs[static_cast<size_t>(bin)] += kMass[off + 2];
  }
  return label;
}

double emd2_loss(const std::vector<double>& logits, const SoftLabel& label,
                 std::vector<double>* grad_logits) {
  const int n = static_cast<int>(logits.size());
  if (static_cast<size_t>(n) != label.probs.size())
    throw ContractError("emd2_loss: logits/label size mismatch");
  if (grad_logits != nullptr) grad_logits->assign(static_cast<size_t>(n), 0.0);
  return emd2_softmax(logits.data(), label.probs.data(), n,
                      grad_logits != nullptr ? grad_logits->data() : nullptr);
}

double xent_loss(const std::vector<double>& logits, const SoftLabel& label,
                 std::vector<double>* grad_logits) {
  const int n = static_cast<int>(logits.size());
  if (static_cast<size_t>(n) != label.probs.size())
    throw ContractError("xent_loss: logits/label size mismatch");
  if (grad_logits != nullptr) grad_logits->assign(static_cast<size_t>(n), 0.0);
  return xent_softmax(logits.data(), label.probs.data(), n,
                      grad_logits != nullptr ? grad_logits->data() : nullptr);
}

double triplet_loss(double d_ap, double d_an, double delta) {
  return triplet_loss_grad(d_ap, d_an, delta, nullptr, nullptr);
}

double triplet_loss_grad(double d_ap, double d_an, double delta, double* d_dap, double* d_dan) {
  if (d_ap < 0.0 || d_an < 0.0) throw DomainError("triplet_loss: distances must be >= 0");
  if (delta < 0.0) throw DomainError("triplet_loss: margin must be >= 0");
  return triplet_hinge(d_ap, d_an, delta, d_dap, d_dan);
}

double margin_at(const MarginSchedule& schedule, int epoch) {
  if (schedule.total_epochs < 1) throw DomainError("margin schedule needs >= 1 epoch");
  if (epoch < 0 || epoch > schedule.total_epochs)
    throw DomainError("epoch " + std::to_string(epoch) + " outside [0, " +
                      std::to_string(schedule.total_epochs) + "]");
  const double frac = static_cast<double>(epoch) / schedule.total_epochs;
  return schedule.delta_start + (schedule.delta_end - schedule.delta_start) * frac;
}

double mtl_loss(double triplet_term, double emd_term, const MtlWeights& weights) {
  if (weights.w_lq < 0.0 || weights.w_sq < 0.0) throw DomainError("mtl weights must be >= 0");
  return weights.w_lq * triplet_term + weights.w_sq * emd_term;
}

}  // namespace saqam::loss

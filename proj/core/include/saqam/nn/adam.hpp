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

#ifndef SAQAM_NN_ADAM_HPP_
#define SAQAM_NN_ADAM_HPP_

#include <cmath>

#include "saqam/nn/params.hpp"

namespace saqam::nn {

template <typename S>
class AdamT {
 public:
  explicit AdamT(ParamStoreT<S>& params, double lr = 1e-4, double beta1 = 0.9,
                 double beta2 = 0.999, double eps = 1e-8)
      : params_(params), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const auto& p : params.items()) {
      m_.push_back(TensorT<S>::zeros(p.value.shape));
      v_.push_back(TensorT<S>::zeros(p.value.shape));
    }
  }

  void set_lr(double lr) { lr_ = lr; }
  double lr() const { return lr_; }

  void step(const std::vector<TensorT<S>>& grads) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (size_t i = 0; i < params_.size(); ++i) {
      TensorT<S>& w = params_.at(static_cast<int>(i)).value;
      const TensorT<S>& g = grads[i];
      TensorT<S>& m = m_[i];
      TensorT<S>& v = v_[i];
      for (int64_t j = 0; j < w.numel(); ++j) {
        const double gj = static_cast<double>(g[j]);
        const double mj = beta1_ * m[j] + (1.0 - beta1_) * gj;
        const double vj = beta2_ * v[j] + (1.0 - beta2_) * gj * gj;
        m[j] = static_cast<S>(mj);
        v[j] = static_cast<S>(vj);
        w[j] -= static_cast<S>(lr_ * (mj / bc1) / (std::sqrt(vj / bc2) + eps_));
      }
    }
  }

 private:
  ParamStoreT<S>& params_;
  double lr_, beta1_, beta2_, eps_;
  int64_t t_ = 0;
  std::vector<TensorT<S>> m_, v_;
};

using Adam = AdamT<float>;

}  // namespace saqam::nn

#endif  // SAQAM_NN_ADAM_HPP_

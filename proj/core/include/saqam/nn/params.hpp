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

#ifndef SAQAM_NN_PARAMS_HPP_
#define SAQAM_NN_PARAMS_HPP_

#include <string>
#include <vector>

#include "saqam/nn/graph.hpp"
#include "saqam/nn/tensor.hpp"
#include "saqam/util/rng.hpp"

namespace saqam::nn {

template <typename S>
struct ParamT {
  std::string name;
  TensorT<S> value;
};

// Named parameter registry shared by the trainable models.
template <typename S>
class ParamStoreT {
 public:
  int add(std::string name, TensorT<S> init) {
    items_.push_back({std::move(name), std::move(init)});
    return static_cast<int>(items_.size()) - 1;
  }

  size_t size() const { return items_.size(); }
  ParamT<S>& at(int i) { return items_[static_cast<size_t>(i)]; }
  const ParamT<S>& at(int i) const { return items_[static_cast<size_t>(i)]; }
  std::vector<ParamT<S>>& items() { return items_; }
  const std::vector<ParamT<S>>& items() const { return items_; }

  int find(const std::string& name) const {
    for (size_t i = 0; i < items_.size(); ++i)
      if (items_[i].name == name) return static_cast<int>(i);
    return -1;
  }

  int64_t total_elements() const {
    int64_t n = 0;
    for (const auto& p : items_) n += p.value.numel();
    return n;
  }

  // Bind every parameter as a graph leaf; index in the result matches the
  // parameter id handed out by add().
  std::vector<VarT<S>> bind(GraphT<S>& g, bool needs_grad) const {
    std::vector<VarT<S>> vars;
    vars.reserve(items_.size());
    for (size_t i = 0; i < items_.size(); ++i)
      vars.push_back(g.leaf(items_[i].value, needs_grad, static_cast<int>(i)));
    return vars;
  }

  std::vector<TensorT<S>> zero_grads() const {
    std::vector<TensorT<S>> gs;
    gs.reserve(items_.size());
    for (const auto& p : items_) gs.push_back(TensorT<S>::zeros(p.value.shape));
    return gs;
  }

 private:
  std::vector<ParamT<S>> items_;
};

// He-normal initialization helpers.
template <typename S>
TensorT<S> he_normal(std::vector<int> shape, int64_t fan_in, Rng& rng) {
  TensorT<S> t(std::move(shape));
  const double stddev = std::sqrt(2.0 / static_cast<double>(fan_in));
  for (auto& v : t.v) v = static_cast<S>(stddev * rng.normal());
  return t;
}

}  // namespace saqam::nn

#endif  // SAQAM_NN_PARAMS_HPP_

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

#ifndef SAQAM_NN_GRAPH_HPP_
#define SAQAM_NN_GRAPH_HPP_

#include <functional>
#include <utility>
#include <vector>

#include "saqam/nn/tensor.hpp"

namespace saqam::nn {

template <typename S>
class GraphT;

// Lightweight handle to a node inside a GraphT. Invalidated on graph reset.
template <typename S>
struct VarT {
  GraphT<S>* g = nullptr;
  int id = -1;

  bool valid() const { return g != nullptr && id >= 0; }
  const TensorT<S>& val() const { return g->value(id); }
  bool needs_grad() const { return g->node(id).needs_grad; }
};

using Var = VarT<float>;

// Reverse-mode tape. Nodes are appended in evaluation order, which is a
// topological order by construction, so backward() is a single reverse scan.
// One graph per forward pass; graphs are not thread-safe but independent
// graphs may run concurrently.
template <typename S>
class GraphT {
 public:
  using Tensor = TensorT<S>;

  struct Node {
    Tensor value;
    Tensor grad;  // allocated on first contribution during backward
    bool needs_grad = false;
    int param_id = -1;
    std::vector<int> parents;
    std::function<void(GraphT&, int)> backward;
    std::vector<int> iaux;  // op scratch surviving to backward (argmax indices etc.)
  };

  VarT<S> leaf(Tensor value, bool needs_grad = false, int param_id = -1) {
    Node n;
    n.value = std::move(value);
    n.needs_grad = needs_grad;
    n.param_id = param_id;
    nodes_.push_back(std::move(n));
    return {this, static_cast<int>(nodes_.size()) - 1};
  }

  VarT<S> op(Tensor value, std::vector<int> parents,
             std::function<void(GraphT&, int)> backward_fn,
             std::vector<int> iaux = {}) {
    Node n;
    n.value = std::move(value);
    n.parents = std::move(parents);
    for (int p : n.parents)
      if (nodes_[static_cast<size_t>(p)].needs_grad) n.needs_grad = true;
    if (n.needs_grad) n.backward = std::move(backward_fn);
    n.iaux = std::move(iaux);
    nodes_.push_back(std::move(n));
    return {this, static_cast<int>(nodes_.size()) - 1};
  }

  Node& node(int id) { return nodes_[static_cast<size_t>(id)]; }
  const Node& node(int id) const { return nodes_[static_cast<size_t>(id)]; }
  Tensor& value(int id) { return nodes_[static_cast<size_t>(id)].value; }
  const Tensor& value(int id) const { return nodes_[static_cast<size_t>(id)].value; }

  // Zero-init the grad tensor on demand; returns it for accumulation.
  Tensor& grad(int id) {
    Node& n = nodes_[static_cast<size_t>(id)];
    if (n.grad.numel() == 0) n.grad = Tensor::zeros(n.value.shape);
    return n.grad;
  }

  bool has_grad(int id) const { return nodes_[static_cast<size_t>(id)].grad.numel() != 0; }

  // Reverse-accumulate from a scalar root.
  void backward(const VarT<S>& root) {
    if (root.g != this) throw ContractError("backward root from another graph");
    if (value(root.id).numel() != 1) throw ContractError("backward root must be scalar");
    grad(root.id)[0] = S(1);
    for (int id = root.id; id >= 0; --id) {
      Node& n = nodes_[static_cast<size_t>(id)];
      if (!n.needs_grad || n.grad.numel() == 0 || !n.backward) continue;
      n.backward(*this, id);
    }
  }

  // Collect d(root)/d(param) for every bound parameter leaf, summed per slot.
  // `sink[param_id]` must be pre-sized to the parameter shapes.
  void accumulate_param_grads(std::vector<Tensor>& sink) const {
    for (const Node& n : nodes_) {
      if (n.param_id < 0 || n.grad.numel() == 0) continue;
      Tensor& dst = sink[static_cast<size_t>(n.param_id)];
      for (int64_t i = 0; i < n.grad.numel(); ++i) dst[i] += n.grad[i];
    }
  }

  size_t size() const { return nodes_.size(); }

 private:
  std::vector<Node> nodes_;
};

using Graph = GraphT<float>;

}  // namespace saqam::nn

#endif  // SAQAM_NN_GRAPH_HPP_

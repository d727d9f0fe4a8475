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

#ifndef SAQAM_NN_TENSOR_HPP_
#define SAQAM_NN_TENSOR_HPP_

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "saqam/util/errors.hpp"

namespace saqam::nn {

// Allocator that skips zero-initialization on resize; fills that are needed
// stay explicit (Tensor::zeros, assign).
template <typename T>
struct DefaultInitAlloc : std::allocator<T> {
  template <typename U>
  struct rebind {
    using other = DefaultInitAlloc<U>;
  };
  template <typename U, typename... Args>
  void construct(U* p, Args&&... args) {
    if constexpr (sizeof...(Args) == 0)
      ::new (static_cast<void*>(p)) U;
    else
      ::new (static_cast<void*>(p)) U(std::forward<Args>(args)...);
  }
};

// Dense row-major tensor. Rank is dynamic but small (<= 4 in practice).
template <typename S>
struct TensorT {
  using Storage = std::vector<S, DefaultInitAlloc<S>>;
  std::vector<int> shape;
  Storage v;

  TensorT() = default;
  explicit TensorT(std::vector<int> dims) : shape(std::move(dims)) {
    v.assign(static_cast<size_t>(numel_of(shape)), S(0));
  }
  TensorT(std::vector<int> dims, std::initializer_list<S> data)
      : shape(std::move(dims)), v(data) {
    if (static_cast<int64_t>(v.size()) != numel_of(shape))
      throw ContractError("tensor data size does not match shape");
  }

  // Skips the zero fill; caller promises to overwrite every element.
  static TensorT uninitialized(std::vector<int> dims) {
    TensorT t;
    t.shape = std::move(dims);
    t.v.resize(static_cast<size_t>(numel_of(t.shape)));
    return t;
  }

  static int64_t numel_of(const std::vector<int>& dims) {
    int64_t n = 1;
    for (int d : dims) n *= d;
    return n;
  }

  static TensorT zeros(std::vector<int> dims) { return TensorT(std::move(dims)); }
  static TensorT full(std::vector<int> dims, S value) {
    TensorT t(std::move(dims));
    std::fill(t.v.begin(), t.v.end(), value);
    return t;
  }
  static TensorT scalar(S value) {
    TensorT t({1});
    t.v[0] = value;
    return t;
  }

  int64_t numel() const { return static_cast<int64_t>(v.size()); }
  int rank() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape[static_cast<size_t>(i)]; }

  S* data() { return v.data(); }
  const S* data() const { return v.data(); }

  S& operator[](int64_t i) { return v[static_cast<size_t>(i)]; }
  S operator[](int64_t i) const { return v[static_cast<size_t>(i)]; }

  bool same_shape(const TensorT& o) const { return shape == o.shape; }

  bool all_finite() const {
    for (S x : v)
      if (!std::isfinite(static_cast<double>(x))) return false;
    return true;
  }

  template <typename U>
  TensorT<U> cast() const {
    TensorT<U> out;
    out.shape = shape;
    out.v.resize(v.size());
    for (size_t i = 0; i < v.size(); ++i) out.v[i] = static_cast<U>(v[i]);
    return out;
  }

  std::string shape_str() const {
    std::string s = "(";
    for (size_t i = 0; i < shape.size(); ++i) s += (i ? "," : "") + std::to_string(shape[i]);
    return s + ")";
  }
};

using Tensor = TensorT<float>;

}  // namespace saqam::nn

#endif  // SAQAM_NN_TENSOR_HPP_

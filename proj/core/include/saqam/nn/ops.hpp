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

#ifndef SAQAM_NN_OPS_HPP_
#define SAQAM_NN_OPS_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "saqam/loss/kernels.hpp"
#include "saqam/nn/graph.hpp"

namespace saqam::nn {

namespace detail {

template <typename S>
using MatCM = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;
template <typename S>
using MapRM = Eigen::Map<Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
template <typename S>
using CMapRM =
    Eigen::Map<const Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

inline int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Elementwise ops
// ---------------------------------------------------------------------------

template <typename S, typename F, typename DF>
VarT<S> unary_elementwise(VarT<S> x, F f, DF dfdx) {
  GraphT<S>& g = *x.g;
  TensorT<S> out = TensorT<S>::uninitialized(x.val().shape);
  const TensorT<S>& xv = x.val();
  for (int64_t i = 0; i < xv.numel(); ++i) out[i] = f(xv[i]);
  int xid = x.id;
  return g.op(std::move(out), {xid}, [xid, dfdx](GraphT<S>& gr, int id) {
    const TensorT<S>& dy = gr.grad(id);
    const TensorT<S>& xin = gr.value(xid);
    TensorT<S>& dx = gr.grad(xid);
    for (int64_t i = 0; i < dy.numel(); ++i) dx[i] += dy[i] * dfdx(xin[i]);
  });
}

template <typename S>
VarT<S> leaky_relu(VarT<S> x, S slope = S(0.1)) {
  return unary_elementwise(
      x, [slope](S v) { return v > S(0) ? v : slope * v; },
      [slope](S v) { return v > S(0) ? S(1) : slope; });
}

template <typename S>
VarT<S> relu(VarT<S> x) {
  return leaky_relu(x, S(0));
}

template <typename S>
VarT<S> tanh_op(VarT<S> x) {
  GraphT<S>& g = *x.g;
  TensorT<S> out = TensorT<S>::uninitialized(x.val().shape);
  for (int64_t i = 0; i < out.numel(); ++i) out[i] = std::tanh(x.val()[i]);
  int xid = x.id;
  return g.op(std::move(out), {xid}, [xid](GraphT<S>& gr, int id) {
    const TensorT<S>& y = gr.value(id);
    const TensorT<S>& dy = gr.grad(id);
    TensorT<S>& dx = gr.grad(xid);
    for (int64_t i = 0; i < dy.numel(); ++i) dx[i] += dy[i] * (S(1) - y[i] * y[i]);
  });
}

template <typename S>
VarT<S> abs_op(VarT<S> x) {
  return unary_elementwise(
      x, [](S v) { return std::abs(v); },
      [](S v) { return v > S(0) ? S(1) : (v < S(0) ? S(-1) : S(0)); });
}

template <typename S>
VarT<S> log1p_op(VarT<S> x) {
  return unary_elementwise(
      x, [](S v) { return std::log1p(v); }, [](S v) { return S(1) / (S(1) + v); });
}

template <typename S>
VarT<S> log_eps(VarT<S> x, S eps) {
  return unary_elementwise(
      x, [eps](S v) { return std::log(v + eps); }, [eps](S v) { return S(1) / (v + eps); });
}

template <typename S>
VarT<S> scale(VarT<S> x, S c) {
  return unary_elementwise(x, [c](S v) { return c * v; }, [c](S) { return c; });
}

template <typename S>
VarT<S> add_scalar(VarT<S> x, S c) {
  return unary_elementwise(x, [c](S v) { return v + c; }, [](S) { return S(1); });
}

template <typename S>
VarT<S> add(VarT<S> a, VarT<S> b) {
  GraphT<S>& g = *a.g;
  if (!a.val().same_shape(b.val())) throw ContractError("add: shape mismatch");
  TensorT<S> out = TensorT<S>::uninitialized(a.val().shape);
  for (int64_t i = 0; i < out.numel(); ++i) out[i] = a.val()[i] + b.val()[i];
  int ai = a.id, bi = b.id;
  return g.op(std::move(out), {ai, bi}, [ai, bi](GraphT<S>& gr, int id) {
    const TensorT<S>& dy = gr.grad(id);
    if (gr.node(ai).needs_grad) {
      TensorT<S>& da = gr.grad(ai);
      for (int64_t i = 0; i < dy.numel(); ++i) da[i] += dy[i];
    }
    if (gr.node(bi).needs_grad) {
      TensorT<S>& db = gr.grad(bi);
      for (int64_t i = 0; i < dy.numel(); ++i) db[i] += dy[i];
    }
  });
}

template <typename S>
VarT<S> sub(VarT<S> a, VarT<S> b) {
  GraphT<S>& g = *a.g;
  if (!a.val().same_shape(b.val())) throw ContractError("sub: shape mismatch");
  TensorT<S> out = TensorT<S>::uninitialized(a.val().shape);
  for (int64_t i = 0; i < out.numel(); ++i) out[i] = a.val()[i] - b.val()[i];
  int ai = a.id, bi = b.id;
  return g.op(std::move(out), {ai, bi}, [ai, bi](GraphT<S>& gr, int id) {
    const TensorT<S>& dy = gr.grad(id);
    if (gr.node(ai).needs_grad) {
      TensorT<S>& da = gr.grad(ai);
      for (int64_t i = 0; i < dy.numel(); ++i) da[i] += dy[i];
    }
    if (gr.node(bi).needs_grad) {
      TensorT<S>& db = gr.grad(bi);
      for (int64_t i = 0; i < dy.numel(); ++i) db[i] -= dy[i];
    }
  });
}

template <typename S>
VarT<S> mul(VarT<S> a, VarT<S> b) {
  GraphT<S>& g = *a.g;
  if (!a.val().same_shape(b.val())) throw ContractError("mul: shape mismatch");
  TensorT<S> out = TensorT<S>::uninitialized(a.val().shape);
  for (int64_t i = 0; i < out.numel(); ++i) out[i] = a.val()[i] * b.val()[i];
  int ai = a.id, bi = b.id;
  return g.op(std::move(out), {ai, bi}, [ai, bi](GraphT<S>& gr, int id) {
    const TensorT<S>& dy = gr.grad(id);
    const TensorT<S>& av = gr.value(ai);
    const TensorT<S>& bv = gr.value(bi);
    if (gr.node(ai).needs_grad) {
      TensorT<S>& da = gr.grad(ai);
      for (int64_t i = 0; i < dy.numel(); ++i) da[i] += dy[i] * bv[i];
    }
    if (gr.node(bi).needs_grad) {
      TensorT<S>& db = gr.grad(bi);
      for (int64_t i = 0; i < dy.numel(); ++i) db[i] += dy[i] * av[i];
    }
  });
}

// ---------------------------------------------------------------------------
// Shape ops
// ---------------------------------------------------------------------------

template <typename S>
VarT<S> reshape(VarT<S> x, std::vector<int> shape) {
  GraphT<S>& g = *x.g;
  if (TensorT<S>::numel_of(shape) != x.val().numel()) throw ContractError("reshape: numel mismatch");
  TensorT<S> out;
  out.shape = std::move(shape);
  out.v = x.val().v;
  int xid = x.id;
  return g.op(std::move(out), {xid}, [xid](GraphT<S>& gr, int id) {
    const TensorT<S>& dy = gr.grad(id);
    TensorT<S>& dx = gr.grad(xid);
    for (int64_t i = 0; i < dy.numel(); ++i) dx[i] += dy[i];
  });
}

// Concatenate along axis 0 (channels). All trailing dims must match.
template <typename S>
VarT<S> concat_ch(const std::vector<VarT<S>>& xs) {
  if (xs.empty()) throw ContractError("concat_ch: empty input");
  GraphT<S>& g = *xs[0].g;
  std::vector<int> shape = xs[0].val().shape;
  int64_t inner = xs[0].val().numel() / shape[0];
  int ctotal = 0;
  for (const auto& x : xs) {
    if (x.val().numel() / x.val().shape[0] != inner) throw ContractError("concat_ch: inner mismatch");
    ctotal += x.val().shape[0];
  }
  shape[0] = ctotal;
  TensorT<S> out = TensorT<S>::uninitialized(shape);
  std::vector<int> parents;
  std::vector<int> offsets;
  int64_t off = 0;
  for (const auto& x : xs) {
    std::copy(x.val().v.begin(), x.val().v.end(), out.v.begin() + off);
    parents.push_back(x.id);
    offsets.push_back(static_cast<int>(off));
    off += x.val().numel();
  }
  return g.op(std::move(out), parents, [parents, offsets](GraphT<S>& gr, int id) {
    const TensorT<S>& dy = gr.grad(id);
    for (size_t k = 0; k < parents.size(); ++k) {
      if (!gr.node(parents[k]).needs_grad) continue;
      TensorT<S>& dx = gr.grad(parents[k]);
      int64_t off2 = offsets[k];
      for (int64_t i = 0; i < dx.numel(); ++i) dx[i] += dy[off2 + i];
    }
  });
}

// Slice channels [begin, end) along axis 0.
template <typename S>
VarT<S> slice_ch(VarT<S> x, int begin, int end) {
  GraphT<S>& g = *x.g;
  const TensorT<S>& xv = x.val();
  std::vector<int> shape = xv.shape;
  int64_t inner = xv.numel() / shape[0];
  shape[0] = end - begin;
  TensorT<S> out = TensorT<S>::uninitialized(shape);
  std::copy(xv.v.begin() + begin * inner, xv.v.begin() + end * inner, out.v.begin());
  int xid = x.id;
  int64_t off = begin * inner;
  return g.op(std::move(out), {xid}, [xid, off](GraphT<S>& gr, int id) {
    const TensorT<S>& dy = gr.grad(id);
    TensorT<S>& dx = gr.grad(xid);
    for (int64_t i = 0; i < dy.numel(); ++i) dx[off + i] += dy[i];
  });
}

// (C, F, T) -> (C, 2F, T), rows repeated.
template <typename S>
VarT<S> upsample_freq2(VarT<S> x) {
  GraphT<S>& g = *x.g;
  const TensorT<S>& xv = x.val();
  int c = xv.dim(0), f = xv.dim(1), t = xv.dim(2);
  TensorT<S> out = TensorT<S>::uninitialized({c, 2 * f, t});
  for (int ci = 0; ci < c; ++ci)
    for (int fi = 0; fi < f; ++fi)
      for (int r = 0; r < 2; ++r)
        std::copy_n(&xv.v[(static_cast<int64_t>(ci) * f + fi) * t], t,
                    &out.v[(static_cast<int64_t>(ci) * 2 * f + 2 * fi + r) * t]);
  int xid = x.id;
  return g.op(std::move(out), {xid}, [xid, c, f, t](GraphT<S>& gr, int id) {
    const TensorT<S>& dy = gr.grad(id);
    TensorT<S>& dx = gr.grad(xid);
    for (int ci = 0; ci < c; ++ci)
      for (int fi = 0; fi < f; ++fi)
        for (int r = 0; r < 2; ++r) {
          const S* src = &dy.v[(static_cast<int64_t>(ci) * 2 * f + 2 * fi + r) * t];
          S* dst = &dx.v[(static_cast<int64_t>(ci) * f + fi) * t];
          for (int ti = 0; ti < t; ++ti) dst[ti] += src[ti];
        }
  });
}

// Keep frequency rows [0, new_f) of a (C, F, T) map.
template <typename S>
VarT<S> crop_freq(VarT<S> x, int new_f) {
  GraphT<S>& g = *x.g;
  const TensorT<S>& xv = x.val();
  int c = xv.dim(0), f = xv.dim(1), t = xv.dim(2);
  if (new_f > f) throw ContractError("crop_freq: target larger than input");
  TensorT<S> out = TensorT<S>::uninitialized({c, new_f, t});
  for (int ci = 0; ci < c; ++ci)
    std::copy_n(&xv.v[static_cast<int64_t>(ci) * f * t], static_cast<int64_t>(new_f) * t,
                &out.v[static_cast<int64_t>(ci) * new_f * t]);
  int xid = x.id;
  return g.op(std::move(out), {xid}, [xid, c, f, t, new_f](GraphT<S>& gr, int id) {
    const TensorT<S>& dy = gr.grad(id);
    TensorT<S>& dx = gr.grad(xid);
    for (int ci = 0; ci < c; ++ci) {
      const S* src = &dy.v[static_cast<int64_t>(ci) * new_f * t];
      S* dst = &dx.v[static_cast<int64_t>(ci) * f * t];
      for (int64_t i = 0; i < static_cast<int64_t>(new_f) * t; ++i) dst[i] += src[i];
    }
  });
}

// ---------------------------------------------------------------------------
// Reductions
// ---------------------------------------------------------------------------

template <typename S>
VarT<S> mean_all(VarT<S> x) {
  GraphT<S>& g = *x.g;
  const TensorT<S>& xv = x.val();
  S acc = S(0);
  for (int64_t i = 0; i < xv.numel(); ++i) acc += xv[i];
  S inv = S(1) / static_cast<S>(xv.numel());
  int xid = x.id;
  return g.op(TensorT<S>::scalar(acc * inv), {xid}, [xid, inv](GraphT<S>& gr, int id) {
    S dy = gr.grad(id)[0];
    TensorT<S>& dx = gr.grad(xid);
    for (int64_t i = 0; i < dx.numel(); ++i) dx[i] += dy * inv;
  });
}

template <typename S>
VarT<S> sum_all(VarT<S> x) {
  GraphT<S>& g = *x.g;
  S acc = S(0);
  for (int64_t i = 0; i < x.val().numel(); ++i) acc += x.val()[i];
  int xid = x.id;
  return g.op(TensorT<S>::scalar(acc), {xid}, [xid](GraphT<S>& gr, int id) {
    S dy = gr.grad(id)[0];
    TensorT<S>& dx = gr.grad(xid);
    for (int64_t i = 0; i < dx.numel(); ++i) dx[i] += dy;
  });
}

// (C, T) -> (C,), mean over the last axis.
template <typename S>
VarT<S> mean_last(VarT<S> x) {
  GraphT<S>& g = *x.g;
  const TensorT<S>& xv = x.val();
  if (xv.rank() != 2) throw ContractError("mean_last: rank-2 input expected");
  int c = xv.dim(0), t = xv.dim(1);
  TensorT<S> out = TensorT<S>::uninitialized({c});
  S inv = S(1) / static_cast<S>(t);
  for (int ci = 0; ci < c; ++ci) {
    S acc = S(0);
    for (int ti = 0; ti < t; ++ti) acc += xv.v[static_cast<int64_t>(ci) * t + ti];
    out[ci] = acc * inv;
  }
  int xid = x.id;
  return g.op(std::move(out), {xid}, [xid, c, t, inv](GraphT<S>& gr, int id) {
    const TensorT<S>& dy = gr.grad(id);
    TensorT<S>& dx = gr.grad(xid);
    for (int ci = 0; ci < c; ++ci)
      for (int ti = 0; ti < t; ++ti) dx.v[static_cast<int64_t>(ci) * t + ti] += dy[ci] * inv;
  });
}

// Per-channel unit normalization: y_c = x_c / sqrt(||x_c||^2 + kNormEps^2),
// the norm taken over all trailing axes.
inline constexpr double kChannelNormEps = 1e-6;

template <typename S>
VarT<S> channel_unit_normalize(VarT<S> x) {
  GraphT<S>& g = *x.g;
  const TensorT<S>& xv = x.val();
  int c = xv.dim(0);
  int64_t inner = xv.numel() / c;
  TensorT<S> out = TensorT<S>::uninitialized(xv.shape);
  std::vector<S> norms(static_cast<size_t>(c));
  for (int ci = 0; ci < c; ++ci) {
    const S* xp = &xv.v[ci * inner];
    S ss = S(0);
    for (int64_t i = 0; i < inner; ++i) ss += xp[i] * xp[i];
    S n = std::sqrt(ss + S(kChannelNormEps * kChannelNormEps));
    norms[static_cast<size_t>(ci)] = n;
    S invn = S(1) / n;
    S* yp = &out.v[ci * inner];
    for (int64_t i = 0; i < inner; ++i) yp[i] = xp[i] * invn;
  }
  int xid = x.id;
  return g.op(std::move(out), {xid}, [xid, c, inner, norms](GraphT<S>& gr, int id) {
    const TensorT<S>& dy = gr.grad(id);
    const TensorT<S>& y = gr.value(id);
    TensorT<S>& dx = gr.grad(xid);
    for (int ci = 0; ci < c; ++ci) {
      const S* dyp = &dy.v[ci * inner];
      const S* yp = &y.v[ci * inner];
      S* dxp = &dx.v[ci * inner];
      S dot = S(0);
      for (int64_t i = 0; i < inner; ++i) dot += dyp[i] * yp[i];
      S invn = S(1) / norms[static_cast<size_t>(ci)];
      for (int64_t i = 0; i < inner; ++i) dxp[i] += (dyp[i] - yp[i] * dot) * invn;
    }
  });
}

// ---------------------------------------------------------------------------
// Convolution ("same" padding; supports stride and dilation)
// ---------------------------------------------------------------------------

struct Conv2dOpts {
  int stride_f = 1;
  int stride_t = 1;
  int dil_f = 1;
  int dil_t = 1;
};

namespace detail {

struct Conv2dDims {
  int C, H, W, O, kh, kw, sh, sw, dh, dw, ph, pw, Ho, Wo, K;
};

inline Conv2dDims conv2d_dims(const std::vector<int>& xshape, const std::vector<int>& wshape,
                              const Conv2dOpts& o) {
  Conv2dDims d;
  d.C = xshape[0];
  d.H = xshape[1];
  d.W = xshape[2];
  d.O = wshape[0];
  d.kh = wshape[2];
  d.kw = wshape[3];
  d.sh = o.stride_f;
  d.sw = o.stride_t;
  d.dh = o.dil_f;
  d.dw = o.dil_t;
  if (wshape[1] != d.C) throw ContractError("conv2d: weight C_in mismatch");
  int ekh = (d.kh - 1) * d.dh + 1;
  int ekw = (d.kw - 1) * d.dw + 1;
  d.Ho = ceil_div(d.H, d.sh);
  d.Wo = ceil_div(d.W, d.sw);
  d.ph = std::max(0, (d.Ho - 1) * d.sh + ekh - d.H) / 2;
  d.pw = std::max(0, (d.Wo - 1) * d.sw + ekw - d.W) / 2;
  d.K = d.C * d.kh * d.kw;
  return d;
}

constexpr int kConvTile = 1536;

// Gather input patches for output pixels [p0, p1) into a (K x P) column-major
// buffer. Column layout matches the (C, kh, kw) flattening of the weights.
template <typename S>
void im2col(const S* x, const Conv2dDims& d, int p0, int p1, S* col) {
  for (int p = p0; p < p1; ++p) {
    const int ho = p / d.Wo, wo = p % d.Wo;
    const int hbase = ho * d.sh - d.ph;
    const int wbase = wo * d.sw - d.pw;
    const bool w_interior = d.dw == 1 && wbase >= 0 && wbase + d.kw <= d.W;
    S* cp = col + static_cast<int64_t>(p - p0) * d.K;
    int idx = 0;
    for (int c = 0; c < d.C; ++c) {
      const S* xc = x + static_cast<int64_t>(c) * d.H * d.W;
      for (int i = 0; i < d.kh; ++i) {
        const int hi = hbase + i * d.dh;
        if (hi < 0 || hi >= d.H) {
          std::fill_n(cp + idx, d.kw, S(0));
          idx += d.kw;
          continue;
        }
        const S* xrow = xc + static_cast<int64_t>(hi) * d.W;
        if (w_interior) {
          std::copy_n(xrow + wbase, d.kw, cp + idx);
          idx += d.kw;
        } else {
          for (int j = 0; j < d.kw; ++j) {
            const int wi = wbase + j * d.dw;
            cp[idx++] = (wi >= 0 && wi < d.W) ? xrow[wi] : S(0);
          }
        }
      }
    }
  }
}

// Scatter-add the (K x P) column gradients back into dx.
template <typename S>
void col2im_add(const S* col, const Conv2dDims& d, int p0, int p1, S* dx) {
  for (int p = p0; p < p1; ++p) {
    const int ho = p / d.Wo, wo = p % d.Wo;
    const int hbase = ho * d.sh - d.ph;
    const int wbase = wo * d.sw - d.pw;
    const S* cp = col + static_cast<int64_t>(p - p0) * d.K;
    int idx = 0;
    for (int c = 0; c < d.C; ++c) {
      S* xc = dx + static_cast<int64_t>(c) * d.H * d.W;
      for (int i = 0; i < d.kh; ++i) {
        const int hi = hbase + i * d.dh;
        if (hi < 0 || hi >= d.H) {
          idx += d.kw;
          continue;
        }
        S* xrow = xc + static_cast<int64_t>(hi) * d.W;
        for (int j = 0; j < d.kw; ++j) {
          const int wi = wbase + j * d.dw;
          if (wi >= 0 && wi < d.W) xrow[wi] += cp[idx];
          ++idx;
        }
      }
    }
  }
}

inline bool is_pointwise(const Conv2dDims& d) {
  return d.kh == 1 && d.kw == 1 && d.sh == 1 && d.sw == 1;
}

template <typename S>
void conv2d_forward(const S* x, const S* w, const S* b, S* y, const Conv2dDims& d) {
  const int Pall = d.Ho * d.Wo;
  if (is_pointwise(d)) {
    // pure GEMM: (O x C) * (C x N)
    CMapRM<S> wm(w, d.O, d.C);
    CMapRM<S> xm(x, d.C, Pall);
    MapRM<S> ym(y, d.O, Pall);
    ym.noalias() = wm * xm;
    if (b != nullptr)
      for (int o = 0; o < d.O; ++o) ym.row(o).array() += b[o];
    return;
  }
  std::vector<S> col(static_cast<size_t>(d.K) * std::min(Pall, kConvTile));
  MatCM<S> tmp(d.O, std::min(Pall, kConvTile));
  CMapRM<S> wm(w, d.O, d.K);
  for (int p0 = 0; p0 < Pall; p0 += kConvTile) {
    const int p1 = std::min(Pall, p0 + kConvTile);
    const int P = p1 - p0;
    im2col(x, d, p0, p1, col.data());
    Eigen::Map<MatCM<S>> colm(col.data(), d.K, P);
    tmp.leftCols(P).noalias() = wm * colm;
    for (int o = 0; o < d.O; ++o) {
      S* yrow = y + static_cast<int64_t>(o) * Pall + p0;
      const S bias = b != nullptr ? b[o] : S(0);
      for (int p = 0; p < P; ++p) yrow[p] = tmp(o, p) + bias;
    }
  }
}

template <typename S>
void conv2d_backward(const S* x, const S* w, const S* dy, S* dx, S* dw, S* db,
                     const Conv2dDims& d) {
  const int Pall = d.Ho * d.Wo;
  if (is_pointwise(d)) {
    CMapRM<S> wm(w, d.O, d.C);
    CMapRM<S> xm(x, d.C, Pall);
    CMapRM<S> dym(dy, d.O, Pall);
    if (db != nullptr)
      for (int o = 0; o < d.O; ++o) db[o] += dym.row(o).sum();
    if (dw != nullptr) {
      MapRM<S> dwm(dw, d.O, d.C);
      dwm.noalias() += dym * xm.transpose();
    }
    if (dx != nullptr) {
      MapRM<S> dxm(dx, d.C, Pall);
      dxm.noalias() += wm.transpose() * dym;
    }
    return;
  }
  const int tile = std::min(Pall, kConvTile);
  std::vector<S> col(static_cast<size_t>(d.K) * tile);
  std::vector<S> colg(dx != nullptr ? static_cast<size_t>(d.K) * tile : 0);
  MatCM<S> dyt(d.O, tile);
  CMapRM<S> wm(w, d.O, d.K);
  if (db != nullptr) {
    for (int o = 0; o < d.O; ++o) {
      const S* r = dy + static_cast<int64_t>(o) * Pall;
      S acc = S(0);
      for (int p = 0; p < Pall; ++p) acc += r[p];
      db[o] += acc;
    }
  }
  for (int p0 = 0; p0 < Pall; p0 += kConvTile) {
    const int p1 = std::min(Pall, p0 + kConvTile);
    const int P = p1 - p0;
    for (int o = 0; o < d.O; ++o)
      for (int p = 0; p < P; ++p) dyt(o, p) = dy[static_cast<int64_t>(o) * Pall + p0 + p];
    if (dw != nullptr) {
      im2col(x, d, p0, p1, col.data());
      Eigen::Map<MatCM<S>> colm(col.data(), d.K, P);
      MapRM<S> dwm(dw, d.O, d.K);
      dwm.noalias() += dyt.leftCols(P) * colm.transpose();
    }
    if (dx != nullptr) {
      Eigen::Map<MatCM<S>> colgm(colg.data(), d.K, P);
      colgm.noalias() = wm.transpose() * dyt.leftCols(P);
      col2im_add(colg.data(), d, p0, p1, dx);
    }
  }
}

}  // namespace detail

// x: (C, F, T), w: (O, C, kf, kt), b: (O) or invalid Var for no bias.
template <typename S>
VarT<S> conv2d(VarT<S> x, VarT<S> w, VarT<S> b, const Conv2dOpts& opts = {}) {
  GraphT<S>& g = *x.g;
  detail::Conv2dDims d = detail::conv2d_dims(x.val().shape, w.val().shape, opts);
  TensorT<S> out = TensorT<S>::uninitialized({d.O, d.Ho, d.Wo});
  detail::conv2d_forward(x.val().data(), w.val().data(),
                         b.valid() ? b.val().data() : nullptr, out.data(), d);
  int xid = x.id, wid = w.id, bid = b.valid() ? b.id : -1;
  std::vector<int> parents = {xid, wid};
  if (bid >= 0) parents.push_back(bid);
  return g.op(std::move(out), parents, [xid, wid, bid, d](GraphT<S>& gr, int id) {
    const TensorT<S>& dy = gr.grad(id);
    S* dxp = gr.node(xid).needs_grad ? gr.grad(xid).data() : nullptr;
    S* dwp = gr.node(wid).needs_grad ? gr.grad(wid).data() : nullptr;
    S* dbp = (bid >= 0 && gr.node(bid).needs_grad) ? gr.grad(bid).data() : nullptr;
    detail::conv2d_backward(gr.value(xid).data(), gr.value(wid).data(), dy.data(), dxp, dwp,
                            dbp, d);
  });
}

// Weight normalization: w_o = g_o * v_o / ||v_o||, norm over all non-output axes.
template <typename S>
VarT<S> weight_norm(VarT<S> v, VarT<S> gscale) {
  GraphT<S>& g = *v.g;
  const TensorT<S>& vv = v.val();
  int o = vv.dim(0);
  int64_t inner = vv.numel() / o;
  TensorT<S> out = TensorT<S>::uninitialized(vv.shape);
  for (int oi = 0; oi < o; ++oi) {
    const S* vp = &vv.v[oi * inner];
    S ss = S(0);
    for (int64_t i = 0; i < inner; ++i) ss += vp[i] * vp[i];
    S scale_i = gscale.val()[oi] / std::sqrt(ss + S(1e-24));
    S* wp = &out.v[oi * inner];
    for (int64_t i = 0; i < inner; ++i) wp[i] = vp[i] * scale_i;
  }
  int vid = v.id, gid = gscale.id;
  return g.op(std::move(out), {vid, gid}, [vid, gid, o, inner](GraphT<S>& gr, int id) {
    const TensorT<S>& dw = gr.grad(id);
    const TensorT<S>& vv2 = gr.value(vid);
    const TensorT<S>& gv = gr.value(gid);
    bool want_v = gr.node(vid).needs_grad;
    bool want_g = gr.node(gid).needs_grad;
    for (int oi = 0; oi < o; ++oi) {
      const S* vp = &vv2.v[oi * inner];
      const S* dwp = &dw.v[oi * inner];
      S ss = S(0), dot = S(0);
      for (int64_t i = 0; i < inner; ++i) {
        ss += vp[i] * vp[i];
        dot += dwp[i] * vp[i];
      }
      S n = std::sqrt(ss + S(1e-24));
      if (want_g) gr.grad(gid)[oi] += dot / n;
      if (want_v) {
        S* dvp = &gr.grad(vid).v[oi * inner];
        S gn = gv[oi] / n;
        S corr = dot / ss;
        for (int64_t i = 0; i < inner; ++i) dvp[i] += gn * (dwp[i] - vp[i] * corr);
      }
    }
  });
}

// ---------------------------------------------------------------------------
// Max pooling
// ---------------------------------------------------------------------------

struct MaxPool2dOpts {
  int kf = 3, kt = 3;
  int stride_f = 1, stride_t = 1;
  int pad_f = 1, pad_t = 1;
  bool ceil_mode = false;
};

template <typename S>
VarT<S> maxpool2d(VarT<S> x, const MaxPool2dOpts& o) {
  GraphT<S>& g = *x.g;
  const TensorT<S>& xv = x.val();
  int c = xv.dim(0), h = xv.dim(1), w = xv.dim(2);
  auto out_extent = [&](int in, int k, int s, int pad) {
    int num = in + 2 * pad - k;
    int e = o.ceil_mode ? detail::ceil_div(num, s) + 1 : num / s + 1;
    // last window must start inside the (padded-left) input
    while ((e - 1) * s - pad >= in) --e;
    return e;
  };
  const int ho = out_extent(h, o.kf, o.stride_f, o.pad_f);
  const int wo = out_extent(w, o.kt, o.stride_t, o.pad_t);
  TensorT<S> out = TensorT<S>::uninitialized({c, ho, wo});

  const bool same33 = o.kf == 3 && o.kt == 3 && o.stride_f == 1 && o.stride_t == 1 &&
                      o.pad_f == 1 && o.pad_t == 1;
  const bool freq21 = o.kf == 2 && o.kt == 1 && o.stride_f == 2 && o.stride_t == 1 &&
                      o.pad_f == 0 && o.pad_t == 0;
  if (same33) {
    // separable row/column maxima; picks the same values as a window scan
    std::vector<S> rowmax(static_cast<size_t>(h) * w);
    for (int ci = 0; ci < c; ++ci) {
      const S* xc = &xv.v[static_cast<int64_t>(ci) * h * w];
      for (int fi = 0; fi < h; ++fi) {
        const S* r = xc + static_cast<int64_t>(fi) * w;
        S* m = rowmax.data() + static_cast<int64_t>(fi) * w;
        m[0] = std::max(r[0], w > 1 ? r[1] : r[0]);
        for (int t = 1; t < w - 1; ++t) m[t] = std::max(std::max(r[t - 1], r[t]), r[t + 1]);
        if (w > 1) m[w - 1] = std::max(r[w - 2], r[w - 1]);
      }
      S* yc = &out.v[static_cast<int64_t>(ci) * h * w];
      for (int fi = 0; fi < h; ++fi) {
        const S* up = rowmax.data() + static_cast<int64_t>(std::max(0, fi - 1)) * w;
        const S* mid = rowmax.data() + static_cast<int64_t>(fi) * w;
        const S* dn = rowmax.data() + static_cast<int64_t>(std::min(h - 1, fi + 1)) * w;
        S* y = yc + static_cast<int64_t>(fi) * w;
        for (int t = 0; t < w; ++t) y[t] = std::max(std::max(up[t], mid[t]), dn[t]);
      }
    }
  } else if (freq21) {
    for (int ci = 0; ci < c; ++ci) {
      const S* xc = &xv.v[static_cast<int64_t>(ci) * h * w];
      S* yc = &out.v[static_cast<int64_t>(ci) * ho * wo];
      for (int fo = 0; fo < ho; ++fo) {
        const S* a = xc + static_cast<int64_t>(2 * fo) * w;
        const S* b = 2 * fo + 1 < h ? a + w : a;
        S* y = yc + static_cast<int64_t>(fo) * w;
        for (int t = 0; t < w; ++t) y[t] = std::max(a[t], b[t]);
      }
    }
  } else {
    for (int ci = 0; ci < c; ++ci) {
      const S* xc = &xv.v[static_cast<int64_t>(ci) * h * w];
      for (int i = 0; i < ho; ++i) {
        int h0 = std::max(0, i * o.stride_f - o.pad_f);
        int h1 = std::min(h, i * o.stride_f - o.pad_f + o.kf);
        for (int j = 0; j < wo; ++j) {
          int w0 = std::max(0, j * o.stride_t - o.pad_t);
          int w1 = std::min(w, j * o.stride_t - o.pad_t + o.kt);
          S best = xc[static_cast<int64_t>(h0) * w + w0];
          for (int hi = h0; hi < h1; ++hi)
            for (int wi = w0; wi < w1; ++wi)
              best = std::max(best, xc[static_cast<int64_t>(hi) * w + wi]);
          out.v[(static_cast<int64_t>(ci) * ho + i) * wo + j] = best;
        }
      }
    }
  }

  int xid = x.id;
  MaxPool2dOpts opts = o;
  // backward re-finds the max element per window (first hit in scan order)
  return g.op(std::move(out), {xid}, [xid, c, h, w, ho, wo, opts](GraphT<S>& gr, int id) {
    const TensorT<S>& dy = gr.grad(id);
    const TensorT<S>& y = gr.value(id);
    const TensorT<S>& xin = gr.value(xid);
    TensorT<S>& dx = gr.grad(xid);
    for (int ci = 0; ci < c; ++ci) {
      const S* xc = &xin.v[static_cast<int64_t>(ci) * h * w];
      S* dxc = &dx.v[static_cast<int64_t>(ci) * h * w];
      for (int i = 0; i < ho; ++i) {
        int h0 = std::max(0, i * opts.stride_f - opts.pad_f);
        int h1 = std::min(h, i * opts.stride_f - opts.pad_f + opts.kf);
        for (int j = 0; j < wo; ++j) {
          const int64_t oidx = (static_cast<int64_t>(ci) * ho + i) * wo + j;
          const S dyv = dy[oidx];
          if (dyv == S(0)) continue;
          const S target = y[oidx];
          int w0 = std::max(0, j * opts.stride_t - opts.pad_t);
          int w1 = std::min(w, j * opts.stride_t - opts.pad_t + opts.kt);
          for (int hi = h0; hi < h1; ++hi) {
            bool done = false;
            for (int wi = w0; wi < w1; ++wi)
              if (xc[static_cast<int64_t>(hi) * w + wi] == target) {
                dxc[static_cast<int64_t>(hi) * w + wi] += dyv;
                done = true;
                break;
              }
            if (done) break;
          }
        }
      }
    }
  });
}

// ---------------------------------------------------------------------------
// Classification losses over framewise logits
// ---------------------------------------------------------------------------

// logits: (C, T); label: length-C distribution. Returns the scalar mean over
// frames of EMD^2(softmax(logits[:, t]), label).
template <typename S>
VarT<S> emd2_softmax_timeavg(VarT<S> logits, std::vector<S> label) {
  GraphT<S>& g = *logits.g;
  const TensorT<S>& lv = logits.val();
  int c = lv.dim(0), t = lv.dim(1);
  if (static_cast<int>(label.size()) != c) throw ContractError("emd2 loss: label size mismatch");
  std::vector<S> column(static_cast<size_t>(c));
  S acc = S(0);
  for (int ti = 0; ti < t; ++ti) {
    for (int ci = 0; ci < c; ++ci) column[static_cast<size_t>(ci)] = lv.v[static_cast<int64_t>(ci) * t + ti];
    acc += loss::emd2_softmax(column.data(), label.data(), c, static_cast<S*>(nullptr));
  }
  acc /= static_cast<S>(t);
  int lid = logits.id;
  return g.op(TensorT<S>::scalar(acc), {lid}, [lid, c, t, label](GraphT<S>& gr, int id) {
    S dy = gr.grad(id)[0] / static_cast<S>(t);
    const TensorT<S>& lv2 = gr.value(lid);
    TensorT<S>& dl = gr.grad(lid);
    std::vector<S> col(static_cast<size_t>(c)), dcol(static_cast<size_t>(c));
    for (int ti = 0; ti < t; ++ti) {
      for (int ci = 0; ci < c; ++ci) col[static_cast<size_t>(ci)] = lv2.v[static_cast<int64_t>(ci) * t + ti];
      loss::emd2_softmax(col.data(), label.data(), c, dcol.data());
      for (int ci = 0; ci < c; ++ci) dl.v[static_cast<int64_t>(ci) * t + ti] += dy * dcol[static_cast<size_t>(ci)];
    }
  });
}

// Same reduction with soft-label cross entropy (ablation path).
template <typename S>
VarT<S> xent_softmax_timeavg(VarT<S> logits, std::vector<S> label) {
  GraphT<S>& g = *logits.g;
  const TensorT<S>& lv = logits.val();
  int c = lv.dim(0), t = lv.dim(1);
  if (static_cast<int>(label.size()) != c) throw ContractError("xent loss: label size mismatch");
  std::vector<S> column(static_cast<size_t>(c));
  S acc = S(0);
  for (int ti = 0; ti < t; ++ti) {
    for (int ci = 0; ci < c; ++ci) column[static_cast<size_t>(ci)] = lv.v[static_cast<int64_t>(ci) * t + ti];
    acc += loss::xent_softmax(column.data(), label.data(), c, static_cast<S*>(nullptr));
  }
  acc /= static_cast<S>(t);
  int lid = logits.id;
  return g.op(TensorT<S>::scalar(acc), {lid}, [lid, c, t, label](GraphT<S>& gr, int id) {
    S dy = gr.grad(id)[0] / static_cast<S>(t);
    const TensorT<S>& lv2 = gr.value(lid);
    TensorT<S>& dl = gr.grad(lid);
    std::vector<S> col(static_cast<size_t>(c)), dcol(static_cast<size_t>(c));
    for (int ti = 0; ti < t; ++ti) {
      for (int ci = 0; ci < c; ++ci) col[static_cast<size_t>(ci)] = lv2.v[static_cast<int64_t>(ci) * t + ti];
      loss::xent_softmax(col.data(), label.data(), c, dcol.data());
      for (int ci = 0; ci < c; ++ci) dl.v[static_cast<int64_t>(ci) * t + ti] += dy * dcol[static_cast<size_t>(ci)];
    }
  });
}

// ---------------------------------------------------------------------------
// Complex plane arithmetic on (4, F, T) = [re0, im0, re1, im1] layouts
// ---------------------------------------------------------------------------

template <typename S>
VarT<S> complex_mul(VarT<S> a, VarT<S> b) {
  GraphT<S>& g = *a.g;
  const TensorT<S>& av = a.val();
  const TensorT<S>& bv = b.val();
  if (!av.same_shape(bv) || av.dim(0) != 4) throw ContractError("complex_mul: expected (4,F,T) pair");
  int64_t plane = av.numel() / 4;
  TensorT<S> out = TensorT<S>::uninitialized(av.shape);
  for (int ch = 0; ch < 2; ++ch) {
    const S* ar = &av.v[(2 * ch) * plane];
    const S* ai = &av.v[(2 * ch + 1) * plane];
    const S* br = &bv.v[(2 * ch) * plane];
    const S* bi = &bv.v[(2 * ch + 1) * plane];
    S* yr = &out.v[(2 * ch) * plane];
    S* yi = &out.v[(2 * ch + 1) * plane];
    for (int64_t i = 0; i < plane; ++i) {
      yr[i] = ar[i] * br[i] - ai[i] * bi[i];
      yi[i] = ar[i] * bi[i] + ai[i] * br[i];
    }
  }
  int aid = a.id, bid = b.id;
  return g.op(std::move(out), {aid, bid}, [aid, bid, plane](GraphT<S>& gr, int id) {
    const TensorT<S>& dy = gr.grad(id);
    const TensorT<S>& av2 = gr.value(aid);
    const TensorT<S>& bv2 = gr.value(bid);
    for (int ch = 0; ch < 2; ++ch) {
      const S* dyr = &dy.v[(2 * ch) * plane];
      const S* dyi = &dy.v[(2 * ch + 1) * plane];
      const S* ar = &av2.v[(2 * ch) * plane];
      const S* ai = &av2.v[(2 * ch + 1) * plane];
      const S* br = &bv2.v[(2 * ch) * plane];
      const S* bi = &bv2.v[(2 * ch + 1) * plane];
      if (gr.node(aid).needs_grad) {
        S* dar = &gr.grad(aid).v[(2 * ch) * plane];
        S* dai = &gr.grad(aid).v[(2 * ch + 1) * plane];
        for (int64_t i = 0; i < plane; ++i) {
          dar[i] += dyr[i] * br[i] + dyi[i] * bi[i];
          dai[i] += -dyr[i] * bi[i] + dyi[i] * br[i];
        }
      }
      if (gr.node(bid).needs_grad) {
        S* dbr = &gr.grad(bid).v[(2 * ch) * plane];
        S* dbi = &gr.grad(bid).v[(2 * ch + 1) * plane];
        for (int64_t i = 0; i < plane; ++i) {
          dbr[i] += dyr[i] * ar[i] + dyi[i] * ai[i];
          dbi[i] += -dyr[i] * ai[i] + dyi[i] * ar[i];
        }
      }
    }
  });
}

}  // namespace saqam::nn

#endif  // SAQAM_NN_OPS_HPP_

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

#ifndef SAQAM_NN_SIGNAL_OPS_HPP_
#define SAQAM_NN_SIGNAL_OPS_HPP_

#include <Eigen/Dense>

#include "saqam/audio/stft.hpp"
#include "saqam/nn/graph.hpp"
#include "saqam/nn/ops.hpp"

namespace saqam::nn {

// Differentiable analysis: waveform (2, N) -> complex planes (4, F, T) laid
// out as [re_L, im_L, re_R, im_R]. The plan must outlive the graph.
template <typename S>
VarT<S> stft_complex(VarT<S> x, const audio::StftPlanT<S>& plan) {
  using Mat = typename audio::StftPlanT<S>::Mat;
  GraphT<S>& g = *x.g;
  const TensorT<S>& xv = x.val();
  if (xv.rank() != 2 || xv.dim(0) != 2) throw ContractError("stft_complex: expected (2, N)");
  const int64_t n_samples = xv.dim(1);
  const int t = static_cast<int>(plan.frame_count(n_samples));
  if (t < 1) throw DataError("stft_complex: signal shorter than one window");
  const int n = plan.fft_size, f = plan.bins();

  TensorT<S> out = TensorT<S>::uninitialized({4, f, t});
  Mat frames(n, t);
  for (int c = 0; c < 2; ++c) {
    const S* xc = &xv.v[static_cast<size_t>(c) * n_samples];
    for (int fr = 0; fr < t; ++fr)
      for (int i = 0; i < n; ++i) frames(i, fr) = xc[fr * plan.hop + i];
    Mat spec = plan.analysis * frames;
    for (int k = 0; k < f; ++k)
      for (int fr = 0; fr < t; ++fr) {
        out.v[((2 * static_cast<int64_t>(c)) * f + k) * t + fr] = spec(k, fr);
        out.v[((2 * static_cast<int64_t>(c) + 1) * f + k) * t + fr] = spec(f + k, fr);
      }
  }
  int xid = x.id;
  const audio::StftPlanT<S>* pl = &plan;
  return g.op(std::move(out), {xid}, [xid, pl, n_samples, t](GraphT<S>& gr, int id) {
    const int n = pl->fft_size, f = pl->bins();
    const TensorT<S>& dy = gr.grad(id);
    TensorT<S>& dx = gr.grad(xid);
    Mat dspec(2 * f, t);
    for (int c = 0; c < 2; ++c) {
      for (int k = 0; k < f; ++k)
        for (int fr = 0; fr < t; ++fr) {
          dspec(k, fr) = dy.v[((2 * static_cast<int64_t>(c)) * f + k) * t + fr];
          dspec(f + k, fr) = dy.v[((2 * static_cast<int64_t>(c) + 1) * f + k) * t + fr];
        }
      Mat dframes = pl->analysis.transpose() * dspec;
      S* dxc = &dx.v[static_cast<size_t>(c) * n_samples];
      for (int fr = 0; fr < t; ++fr)
        for (int i = 0; i < n; ++i) dxc[fr * pl->hop + i] += dframes(i, fr);
    }
  });
}

// (4, F, T) complex planes -> (2, F, T) magnitudes.
template <typename S>
VarT<S> mag_planes(VarT<S> c4) {
  GraphT<S>& g = *c4.g;
  const TensorT<S>& cv = c4.val();
  if (cv.dim(0) != 4) throw ContractError("mag_planes: expected (4, F, T)");
  const int64_t plane = cv.numel() / 4;
  TensorT<S> out = TensorT<S>::uninitialized({2, cv.dim(1), cv.dim(2)});
  for (int c = 0; c < 2; ++c) {
    const S* re = &cv.v[(2 * static_cast<int64_t>(c)) * plane];
    const S* im = &cv.v[(2 * static_cast<int64_t>(c) + 1) * plane];
    S* m = &out.v[static_cast<int64_t>(c) * plane];
    for (int64_t i = 0; i < plane; ++i) m[i] = std::sqrt(re[i] * re[i] + im[i] * im[i]);
  }
  int cid = c4.id;
  return g.op(std::move(out), {cid}, [cid, plane](GraphT<S>& gr, int id) {
    const TensorT<S>& dy = gr.grad(id);
    const TensorT<S>& y = gr.value(id);
    const TensorT<S>& cv2 = gr.value(cid);
    TensorT<S>& dc = gr.grad(cid);
    for (int c = 0; c < 2; ++c) {
      const S* re = &cv2.v[(2 * static_cast<int64_t>(c)) * plane];
      const S* im = &cv2.v[(2 * static_cast<int64_t>(c) + 1) * plane];
      const S* m = &y.v[static_cast<int64_t>(c) * plane];
      const S* dm = &dy.v[static_cast<int64_t>(c) * plane];
      S* dre = &dc.v[(2 * static_cast<int64_t>(c)) * plane];
      S* dim = &dc.v[(2 * static_cast<int64_t>(c) + 1) * plane];
      for (int64_t i = 0; i < plane; ++i) {
        if (m[i] < S(1e-12)) continue;
        dre[i] += dm[i] * re[i] / m[i];
        dim[i] += dm[i] * im[i] / m[i];
      }
    }
  });
}

// (4, F, T) complex planes -> (2, F, T) phases in (-pi, pi].
template <typename S>
VarT<S> phase_planes(VarT<S> c4) {
  GraphT<S>& g = *c4.g;
  const TensorT<S>& cv = c4.val();
  if (cv.dim(0) != 4) throw ContractError("phase_planes: expected (4, F, T)");
  const int64_t plane = cv.numel() / 4;
  const S pi = static_cast<S>(M_PI);
  TensorT<S> out = TensorT<S>::uninitialized({2, cv.dim(1), cv.dim(2)});
  for (int c = 0; c < 2; ++c) {
    const S* re = &cv.v[(2 * static_cast<int64_t>(c)) * plane];
    const S* im = &cv.v[(2 * static_cast<int64_t>(c) + 1) * plane];
    S* p = &out.v[static_cast<int64_t>(c) * plane];
    for (int64_t i = 0; i < plane; ++i) {
      S ph = std::atan2(im[i], re[i]);
      p[i] = ph <= -pi ? pi : ph;
    }
  }
  int cid = c4.id;
  return g.op(std::move(out), {cid}, [cid, plane](GraphT<S>& gr, int id) {
    const TensorT<S>& dy = gr.grad(id);
    const TensorT<S>& cv2 = gr.value(cid);
    TensorT<S>& dc = gr.grad(cid);
    for (int c = 0; c < 2; ++c) {
      const S* re = &cv2.v[(2 * static_cast<int64_t>(c)) * plane];
      const S* im = &cv2.v[(2 * static_cast<int64_t>(c) + 1) * plane];
      const S* dp = &dy.v[static_cast<int64_t>(c) * plane];
      S* dre = &dc.v[(2 * static_cast<int64_t>(c)) * plane];
      S* dim = &dc.v[(2 * static_cast<int64_t>(c) + 1) * plane];
      for (int64_t i = 0; i < plane; ++i) {
        S m2 = re[i] * re[i] + im[i] * im[i];
        if (m2 < S(1e-24)) continue;
        dre[i] += dp[i] * (-im[i] / m2);
        dim[i] += dp[i] * (re[i] / m2);
      }
    }
  });
}

// Differentiable weighted overlap-add synthesis: (4, F, T) -> (2, length).
template <typename S>
VarT<S> istft_waveform(VarT<S> c4, const audio::StftPlanT<S>& plan, int64_t length) {
  using Mat = typename audio::StftPlanT<S>::Mat;
  GraphT<S>& g = *c4.g;
  const TensorT<S>& cv = c4.val();
  if (cv.dim(0) != 4 || cv.dim(1) != plan.bins())
    throw ContractError("istft_waveform: planes do not match plan");
  const int f = plan.bins(), n = plan.fft_size, t = cv.dim(2);
  const std::vector<S> env = plan.wola_envelope(t);
  const auto extent = static_cast<int64_t>(env.size());

  TensorT<S> out({2, static_cast<int>(length)});
  Mat spec(2 * f, t);
  for (int c = 0; c < 2; ++c) {
    for (int k = 0; k < f; ++k)
      for (int fr = 0; fr < t; ++fr) {
        spec(k, fr) = cv.v[((2 * static_cast<int64_t>(c)) * f + k) * t + fr];
        spec(f + k, fr) = cv.v[((2 * static_cast<int64_t>(c) + 1) * f + k) * t + fr];
      }
    Mat frames = plan.synthesis * spec;
    std::vector<S> acc(static_cast<size_t>(extent), S(0));
    for (int fr = 0; fr < t; ++fr)
      for (int i = 0; i < n; ++i)
        acc[static_cast<size_t>(fr * plan.hop + i)] += plan.window[static_cast<size_t>(i)] * frames(i, fr);
    S* yc = &out.v[static_cast<size_t>(c) * length];
    for (int64_t i = 0; i < std::min(length, extent); ++i)
      yc[i] = acc[static_cast<size_t>(i)] / std::max(env[static_cast<size_t>(i)], S(1e-8));
  }
  int cid = c4.id;
  const audio::StftPlanT<S>* pl = &plan;
  return g.op(std::move(out), {cid}, [cid, pl, length, t](GraphT<S>& gr, int id) {
    const int f = pl->bins(), n = pl->fft_size;
    const std::vector<S> env = pl->wola_envelope(t);
    const auto extent = static_cast<int64_t>(env.size());
    const TensorT<S>& dy = gr.grad(id);
    TensorT<S>& dc = gr.grad(cid);
    Mat dframes(n, t);
    for (int c = 0; c < 2; ++c) {
      std::vector<S> dacc(static_cast<size_t>(extent), S(0));
      const S* dyc = &dy.v[static_cast<size_t>(c) * length];
      for (int64_t i = 0; i < std::min(length, extent); ++i)
        dacc[static_cast<size_t>(i)] = dyc[i] / std::max(env[static_cast<size_t>(i)], S(1e-8));
      for (int fr = 0; fr < t; ++fr)
        for (int i = 0; i < n; ++i)
          dframes(i, fr) = pl->window[static_cast<size_t>(i)] * dacc[static_cast<size_t>(fr * pl->hop + i)];
      Mat dspec = pl->synthesis.transpose() * dframes;
      for (int k = 0; k < f; ++k)
        for (int fr = 0; fr < t; ++fr) {
          dc.v[((2 * static_cast<int64_t>(c)) * f + k) * t + fr] += dspec(k, fr);
          dc.v[((2 * static_cast<int64_t>(c) + 1) * f + k) * t + fr] += dspec(f + k, fr);
        }
    }
  });
}

}  // namespace saqam::nn

#endif  // SAQAM_NN_SIGNAL_OPS_HPP_

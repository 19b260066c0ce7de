// Copyright 2026 The v1saliency Authors
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

#include <vector>

#include "v1sal/simd/kernels.hpp"

namespace v1sal::simd {
namespace {

void conv_rows(const double* src, double* dst, int w, int h, const double* taps, int ntaps,
               int dilation, Boundary b) {
  const int half = ntaps / 2;
  std::vector<int> idx(static_cast<std::size_t>(ntaps));
  for (int x = 0; x < w; ++x) {
    for (int k = 0; k < ntaps; ++k) idx[k] = boundary_index(x + (k - half) * dilation, w, b);
    for (int y = 0; y < h; ++y) {
      const double* s = src + static_cast<std::size_t>(y) * w;
      double acc = 0.0;
      for (int k = 0; k < ntaps; ++k) acc += taps[k] * s[idx[k]];
      dst[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
}

void conv_cols(const double* src, double* dst, int w, int h, const double* taps, int ntaps,
               int dilation, Boundary b) {
  const int half = ntaps / 2;
  for (int y = 0; y < h; ++y) {
    double* d = dst + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) d[x] = 0.0;
    for (int k = 0; k < ntaps; ++k) {
      const double* s = src + static_cast<std::size_t>(boundary_index(y + (k - half) * dilation, h, b)) * w;
      const double t = taps[k];
      for (int x = 0; x < w; ++x) d[x] += t * s[x];
    }
  }
}

void activate(const double* v, double* out, std::size_t n, const PiecewiseLinear& f) {
  for (std::size_t i = 0; i < n; ++i) out[i] = f(v[i]);
}

void hypercolumn_rhs(const RhsArgs& a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double dx = -a.alpha_x * a.x[i] - a.gy[i];
    for (int k = 0; k < a.neighbors; ++k) dx -= a.neighbor_weight[k] * a.neighbor_gy[k][i];
    dx += a.j0 * a.gx[i];
    if (a.exc) dx += a.exc[i];
    if (a.input) dx += a.input[i];
    dx += a.i0;

    double dy = -a.alpha_y * a.y[i] + a.y_self_sign * a.gx[i];
    if (a.inh) dy += a.inh[i];
    dy += a.ic;
    if (a.noise) dy += a.noise[i];

    a.dx[i] = dx;
    a.dy[i] = dy;
  }
}

void rk4_stage(const RhsArgs& a, const Rk4Stage& st, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double dx = -a.alpha_x * a.x[i] - a.gy[i];
    for (int k = 0; k < a.neighbors; ++k) dx -= a.neighbor_weight[k] * a.neighbor_gy[k][i];
    dx += a.j0 * a.gx[i];
    if (a.exc) dx += a.exc[i];
    if (a.input) dx += a.input[i];
    dx += a.i0;

    double dy = -a.alpha_y * a.y[i] + a.y_self_sign * a.gx[i];
    if (a.inh) dy += a.inh[i];
    dy += a.ic;
    if (a.noise) dy += a.noise[i];

    st.acc_x[i] += st.w_acc * dx;
    st.acc_y[i] += st.w_acc * dy;
    if (st.next_x) {
      st.next_x[i] = st.base_x[i] + st.w_next * dx;
      st.next_y[i] = st.base_y[i] + st.w_next * dy;
    }
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpay(const double* x, double a, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + a * y[i];
}

void spectral_mac(double* acc, const double* kernel, const double* src, std::size_t bins) {
  for (std::size_t k = 0; k < bins; ++k) {
    acc[2 * k] += kernel[k] * src[2 * k];
    acc[2 * k + 1] += kernel[k] * src[2 * k + 1];
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", conv_rows, conv_cols, activate,    hypercolumn_rhs,
                                 rk4_stage, axpy,     xpay,      spectral_mac};
  return table;
}

}  // namespace v1sal::simd

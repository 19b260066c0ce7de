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

// AVX2 + FMA variants. This translation unit is the only one built with
// -mavx2 -mfma; nothing here may run before dispatch checks the CPU.

#include "v1sal/simd/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <vector>

namespace v1sal::simd {
namespace {

void conv_rows(const double* src, double* dst, int w, int h, const double* taps, int ntaps,
               int dilation, Boundary b) {
  const int half = ntaps / 2;
  const int reach = half * dilation;
  const int lo = reach;
  const int hi = w - reach;  // interior is [lo, hi)
  std::vector<int> idx(static_cast<std::size_t>(ntaps));
  for (int y = 0; y < h; ++y) {
    const double* s = src + static_cast<std::size_t>(y) * w;
    double* d = dst + static_cast<std::size_t>(y) * w;
    auto edge = [&](int x) {
      double acc = 0.0;
      for (int k = 0; k < ntaps; ++k) acc += taps[k] * s[boundary_index(x + (k - half) * dilation, w, b)];
      d[x] = acc;
    };
    if (hi <= lo) {
      for (int x = 0; x < w; ++x) edge(x);
      continue;
    }
    for (int x = 0; x < lo; ++x) edge(x);
    int x = lo;
    for (; x + 4 <= hi; x += 4) {
      __m256d acc = _mm256_setzero_pd();
      const double* base = s + x - reach;
      for (int k = 0; k < ntaps; ++k) {
        acc = _mm256_fmadd_pd(_mm256_set1_pd(taps[k]), _mm256_loadu_pd(base + k * dilation), acc);
      }
      _mm256_storeu_pd(d + x, acc);
    }
    for (; x < w; ++x) edge(x);
  }
}

void conv_cols(const double* src, double* dst, int w, int h, const double* taps, int ntaps,
               int dilation, Boundary b) {
  const int half = ntaps / 2;
  for (int y = 0; y < h; ++y) {
    double* d = dst + static_cast<std::size_t>(y) * w;
    int x = 0;
    for (; x + 4 <= w; x += 4) _mm256_storeu_pd(d + x, _mm256_setzero_pd());
    for (; x < w; ++x) d[x] = 0.0;
    for (int k = 0; k < ntaps; ++k) {
      const double* s = src + static_cast<std::size_t>(boundary_index(y + (k - half) * dilation, h, b)) * w;
      const __m256d t = _mm256_set1_pd(taps[k]);
      x = 0;
      for (; x + 4 <= w; x += 4) {
        _mm256_storeu_pd(d + x, _mm256_fmadd_pd(t, _mm256_loadu_pd(s + x), _mm256_loadu_pd(d + x)));
      }
      for (; x < w; ++x) d[x] += taps[k] * s[x];
    }
  }
}

// No FMA here: activations stay bit-identical to the scalar reference.
void activate(const double* v, double* out, std::size_t n, const PiecewiseLinear& f) {
  const __m256d thr = _mm256_set1_pd(f.threshold);
  const __m256d s1 = _mm256_set1_pd(f.slope1);
  const __m256d s2 = _mm256_set1_pd(f.slope2);
  const __m256d knee = _mm256_set1_pd(f.knee);
  const __m256d ceil = _mm256_set1_pd(f.ceiling);
  const __m256d at_knee = _mm256_set1_pd(f.slope1 * (f.knee - f.threshold));
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    const __m256d lin = _mm256_mul_pd(s1, _mm256_sub_pd(x, thr));
    const __m256d upper = _mm256_add_pd(at_knee, _mm256_mul_pd(s2, _mm256_sub_pd(x, knee)));
    __m256d r = _mm256_blendv_pd(upper, lin, _mm256_cmp_pd(x, knee, _CMP_LE_OQ));
    r = _mm256_blendv_pd(ceil, r, _mm256_cmp_pd(r, ceil, _CMP_LT_OQ));
    r = _mm256_blendv_pd(r, zero, _mm256_cmp_pd(x, thr, _CMP_LT_OQ));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = f(v[i]);
}

void hypercolumn_rhs(const RhsArgs& a, std::size_t n) {
  const __m256d ax = _mm256_set1_pd(-a.alpha_x);
  const __m256d ay = _mm256_set1_pd(-a.alpha_y);
  const __m256d j0 = _mm256_set1_pd(a.j0);
  const __m256d i0 = _mm256_set1_pd(a.i0);
  const __m256d ic = _mm256_set1_pd(a.ic);
  const __m256d sign = _mm256_set1_pd(a.y_self_sign);
  __m256d nw[RhsArgs::kMaxNeighbors];
  for (int k = 0; k < a.neighbors; ++k) nw[k] = _mm256_set1_pd(-a.neighbor_weight[k]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gx = _mm256_loadu_pd(a.gx + i);
    __m256d dx = _mm256_sub_pd(_mm256_mul_pd(ax, _mm256_loadu_pd(a.x + i)), _mm256_loadu_pd(a.gy + i));
    for (int k = 0; k < a.neighbors; ++k) dx = _mm256_fmadd_pd(nw[k], _mm256_loadu_pd(a.neighbor_gy[k] + i), dx);
    dx = _mm256_fmadd_pd(j0, gx, dx);
    if (a.exc) dx = _mm256_add_pd(dx, _mm256_loadu_pd(a.exc + i));
    if (a.input) dx = _mm256_add_pd(dx, _mm256_loadu_pd(a.input + i));
    dx = _mm256_add_pd(dx, i0);

    __m256d dy = _mm256_fmadd_pd(ay, _mm256_loadu_pd(a.y + i), _mm256_mul_pd(sign, gx));
    if (a.inh) dy = _mm256_add_pd(dy, _mm256_loadu_pd(a.inh + i));
    dy = _mm256_add_pd(dy, ic);
    if (a.noise) dy = _mm256_add_pd(dy, _mm256_loadu_pd(a.noise + i));

    _mm256_storeu_pd(a.dx + i, dx);
    _mm256_storeu_pd(a.dy + i, dy);
  }
  if (i < n) {
    RhsArgs tail = a;
    tail.x += i;
    tail.y += i;
    tail.gx += i;
    tail.gy += i;
    for (int k = 0; k < a.neighbors; ++k) tail.neighbor_gy[k] += i;
    if (tail.exc) tail.exc += i;
    if (tail.inh) tail.inh += i;
    if (tail.input) tail.input += i;
    if (tail.noise) tail.noise += i;
    tail.dx += i;
    tail.dy += i;
    scalar_kernels().hypercolumn_rhs(tail, n - i);
  }
}

void rk4_stage(const RhsArgs& a, const Rk4Stage& st, std::size_t n) {
  const __m256d ax = _mm256_set1_pd(-a.alpha_x);
  const __m256d ay = _mm256_set1_pd(-a.alpha_y);
  const __m256d j0 = _mm256_set1_pd(a.j0);
  const __m256d i0 = _mm256_set1_pd(a.i0);
  const __m256d ic = _mm256_set1_pd(a.ic);
  const __m256d sign = _mm256_set1_pd(a.y_self_sign);
  const __m256d wa = _mm256_set1_pd(st.w_acc);
  const __m256d wn = _mm256_set1_pd(st.w_next);
  __m256d nw[RhsArgs::kMaxNeighbors];
  for (int k = 0; k < a.neighbors; ++k) nw[k] = _mm256_set1_pd(-a.neighbor_weight[k]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gx = _mm256_loadu_pd(a.gx + i);
    __m256d dx = _mm256_sub_pd(_mm256_mul_pd(ax, _mm256_loadu_pd(a.x + i)), _mm256_loadu_pd(a.gy + i));
    for (int k = 0; k < a.neighbors; ++k) dx = _mm256_fmadd_pd(nw[k], _mm256_loadu_pd(a.neighbor_gy[k] + i), dx);
    dx = _mm256_fmadd_pd(j0, gx, dx);
    if (a.exc) dx = _mm256_add_pd(dx, _mm256_loadu_pd(a.exc + i));
    if (a.input) dx = _mm256_add_pd(dx, _mm256_loadu_pd(a.input + i));
    dx = _mm256_add_pd(dx, i0);

    __m256d dy = _mm256_fmadd_pd(ay, _mm256_loadu_pd(a.y + i), _mm256_mul_pd(sign, gx));
    if (a.inh) dy = _mm256_add_pd(dy, _mm256_loadu_pd(a.inh + i));
    dy = _mm256_add_pd(dy, ic);
    if (a.noise) dy = _mm256_add_pd(dy, _mm256_loadu_pd(a.noise + i));

    _mm256_storeu_pd(st.acc_x + i, _mm256_fmadd_pd(wa, dx, _mm256_loadu_pd(st.acc_x + i)));
    _mm256_storeu_pd(st.acc_y + i, _mm256_fmadd_pd(wa, dy, _mm256_loadu_pd(st.acc_y + i)));
    if (st.next_x) {
      _mm256_storeu_pd(st.next_x + i, _mm256_fmadd_pd(wn, dx, _mm256_loadu_pd(st.base_x + i)));
      _mm256_storeu_pd(st.next_y + i, _mm256_fmadd_pd(wn, dy, _mm256_loadu_pd(st.base_y + i)));
    }
  }
  if (i < n) {
    RhsArgs tail = a;
    tail.x += i;
    tail.y += i;
    tail.gx += i;
    tail.gy += i;
    for (int k = 0; k < a.neighbors; ++k) tail.neighbor_gy[k] += i;
    if (tail.exc) tail.exc += i;
    if (tail.inh) tail.inh += i;
    if (tail.input) tail.input += i;
    if (tail.noise) tail.noise += i;
    Rk4Stage rest = st;
    rest.base_x += i;
    rest.base_y += i;
    rest.acc_x += i;
    rest.acc_y += i;
    if (rest.next_x) {
      rest.next_x += i;
      rest.next_y += i;
    }
    scalar_kernels().rk4_stage(tail, rest, n - i);
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpay(const double* x, double a, const double* y, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = x[i] + a * y[i];
}

void spectral_mac(double* acc, const double* kernel, const double* src, std::size_t bins) {
  std::size_t k = 0;
  // Two complex bins per vector: kernel (k0, k0, k1, k1).
  for (; k + 2 <= bins; k += 2) {
    const __m128d kk = _mm_loadu_pd(kernel + k);
    const __m256d kv = _mm256_permute4x64_pd(_mm256_castpd128_pd256(kk), 0b01010000);
    _mm256_storeu_pd(acc + 2 * k, _mm256_fmadd_pd(kv, _mm256_loadu_pd(src + 2 * k), _mm256_loadu_pd(acc + 2 * k)));
  }
  for (; k < bins; ++k) {
    acc[2 * k] += kernel[k] * src[2 * k];
    acc[2 * k + 1] += kernel[k] * src[2 * k + 1];
  }
}

}  // namespace

const KernelTable* avx2_kernels_impl() {
  static const KernelTable table{"avx2",    conv_rows, conv_cols, activate,    hypercolumn_rhs,
                                 rk4_stage, axpy,      xpay,      spectral_mac};
  return &table;
}

}  // namespace v1sal::simd

#else

namespace v1sal::simd {
const KernelTable* avx2_kernels_impl() { return nullptr; }
}  // namespace v1sal::simd

#endif

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

// Data-parallel inner loops. Every kernel has a portable scalar reference
// and, where the CPU supports it, an AVX2+FMA variant. The variants agree to
// rounding (FMA contraction), which the equivalence tests pin.

#pragma once

#include <cstddef>
#include <string_view>

#include "v1sal/plane.hpp"

namespace v1sal::simd {

/// 0 below `threshold`, slope1 up to `knee`, slope2 beyond, clamped at `ceiling`.
struct PiecewiseLinear {
  double threshold = 0.0;
  double slope1 = 1.0;
  double knee = 1.0;
  double slope2 = 0.0;
  double ceiling = 1.0;

  double operator()(double v) const {
    if (v < threshold) return 0.0;
    double r = v <= knee ? slope1 * (v - threshold) : slope1 * (knee - threshold) + slope2 * (v - knee);
    return r < ceiling ? r : ceiling;
  }
};

/// Arguments for the per-plane hypercolumn right-hand side:
///   dx = -ax*x - gy - sum_k w_k*gy_k + j0*gx + exc + input + i0
///   dy = -ay*y + sign*gx + inh + ic + noise
struct RhsArgs {
  static constexpr int kMaxNeighbors = 6;
  const double* x = nullptr;
  const double* y = nullptr;
  const double* gx = nullptr;
  const double* gy = nullptr;
  const double* neighbor_gy[kMaxNeighbors] = {};
  double neighbor_weight[kMaxNeighbors] = {};
  int neighbors = 0;
  const double* exc = nullptr;    // lateral J input (may be null)
  const double* inh = nullptr;    // lateral W input (may be null)
  const double* input = nullptr;  // feedforward drive (may be null)
  const double* noise = nullptr;  // additive y noise (may be null)
  double alpha_x = 1.0;
  double alpha_y = 1.0;
  double j0 = 0.0;
  double i0 = 0.0;
  double ic = 0.0;
  double y_self_sign = 1.0;
  double* dx = nullptr;
  double* dy = nullptr;
};

/// Fused Runge-Kutta stage on top of RhsArgs (whose dx/dy are ignored):
///   acc += w_acc * d;  next = base + w_next * d   (next may alias RhsArgs x/y)
struct Rk4Stage {
  const double* base_x = nullptr;
  const double* base_y = nullptr;
  double* acc_x = nullptr;
  double* acc_y = nullptr;
  double* next_x = nullptr;  // null on the last stage
  double* next_y = nullptr;
  double w_acc = 0.0;
  double w_next = 0.0;
};

struct KernelTable {
  std::string_view name;

  /// dst(x, y) = sum_k taps[k] * src(x + (k - ntaps/2) * dilation, y)
  void (*conv_rows)(const double* src, double* dst, int w, int h, const double* taps, int ntaps,
                    int dilation, Boundary b);
  /// dst(x, y) = sum_k taps[k] * src(x, y + (k - ntaps/2) * dilation)
  void (*conv_cols)(const double* src, double* dst, int w, int h, const double* taps, int ntaps,
                    int dilation, Boundary b);
  void (*activate)(const double* v, double* out, std::size_t n, const PiecewiseLinear& f);
  void (*hypercolumn_rhs)(const RhsArgs& a, std::size_t n);
  void (*rk4_stage)(const RhsArgs& a, const Rk4Stage& st, std::size_t n);
  /// y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  /// out = x + a * y
  void (*xpay)(const double* x, double a, const double* y, double* out, std::size_t n);
  /// acc[k] += kernel[k] * src[k]; acc/src interleaved complex, kernel real.
  void (*spectral_mac)(double* acc, const double* kernel, const double* src, std::size_t bins);
};

const KernelTable& scalar_kernels();
/// Null when the binary or the CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels();
/// The table used by the library: AVX2 when available unless the
/// environment variable V1SAL_SIMD=scalar forces the reference path.
const KernelTable& kernels();

}  // namespace v1sal::simd

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

#include "v1sal/integrate.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

#include "v1sal/error.hpp"
#include "v1sal/simd/kernels.hpp"

namespace v1sal {

namespace {

void check_planes(std::span<const Plane> planes, const Plane& residual) {
  for (const Plane& p : planes) {
    if (!p.same_shape(residual)) throw ValidationError("conspicuity planes and residual differ in shape");
  }
}

}  // namespace

std::string to_string(Fusion f) {
  switch (f) {
    case Fusion::kInverse: return "inverse";
    case Fusion::kMax: return "max";
    case Fusion::kArgmax: return "argmax";
  }
  return "?";
}

std::string to_string(ChannelCombine c) { return c == ChannelCombine::kSqrtSum ? "sqrt_sum" : "l2"; }

Fusion parse_fusion(const std::string& s) {
  if (s == "inverse" || s == "sum" || s == "inverse_sum") return Fusion::kInverse;
  if (s == "max") return Fusion::kMax;
  if (s == "argmax") return Fusion::kArgmax;
  throw ValidationError("unknown fusion mode '" + s + "'");
}

ChannelCombine parse_channel_combine(const std::string& s) {
  if (s == "sqrt_sum") return ChannelCombine::kSqrtSum;
  if (s == "l2") return ChannelCombine::kL2;
  throw ValidationError("unknown channel_combine '" + s + "'");
}

Plane fuse_inverse(std::span<const Plane> planes, const Plane& residual) {
  check_planes(planes, residual);
  Plane out = residual;
  for (const Plane& p : planes) out += p;
  return out;
}

Plane fuse_max(std::span<const Plane> planes, const Plane& residual) {
  check_planes(planes, residual);
  if (planes.empty()) return residual;
  Plane out = planes[0];
  for (std::size_t k = 1; k < planes.size(); ++k) {
    const Plane& p = planes[k];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], p[i]);
  }
  return out += residual;
}

Plane fuse_argmax(std::span<const Plane> planes, const Plane& residual, std::size_t* selected) {
  check_planes(planes, residual);
  if (planes.empty()) return residual;
  std::size_t best = 0;
  double best_value = max_value(planes[0]);
  for (std::size_t k = 1; k < planes.size(); ++k) {
    const double v = max_value(planes[k]);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  if (selected) *selected = best;
  return planes[best] + residual;
}

Plane fuse(Fusion mode, std::span<const Plane> planes, const Plane& residual) {
  switch (mode) {
    case Fusion::kInverse: return fuse_inverse(planes, residual);
    case Fusion::kMax: return fuse_max(planes, residual);
    case Fusion::kArgmax: return fuse_argmax(planes, residual);
  }
  throw ValidationError("unknown fusion mode");
}

Plane shift_nonnegative(const Plane& p) {
  const double lo = min_value(p);
  Plane out = p;
  if (lo < 0.0) {
    for (double& v : out.values()) v -= lo;
  }
  return out;
}

Plane combine_channels(const Plane& rg, const Plane& by, const Plane& l, ChannelCombine mode,
                       CombineStats* stats) {
  if (!rg.same_shape(by) || !rg.same_shape(l)) throw ValidationError("channel maps differ in shape");
  Plane out(rg.width(), rg.height());
  std::size_t clamped = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    double r = mode == ChannelCombine::kSqrtSum ? rg[i] + by[i] + l[i]
                                                : rg[i] * rg[i] + by[i] * by[i] + l[i] * l[i];
    if (r < 0.0) {
      r = 0.0;
      ++clamped;
    }
    out[i] = std::sqrt(r);
  }
  if (clamped > 0) spdlog::warn("combine_channels: clamped {} negative radicands to 0", clamped);
  if (stats) stats->clamped += clamped;
  return out;
}

Plane znorm(const Plane& p, bool* degenerate) {
  const double mu = mean(p);
  const double sd = stddev(p);
  Plane out(p.width(), p.height());
  const bool constant = !(sd > 0.0);
  if (degenerate) *degenerate = constant;
  if (constant) {
    spdlog::warn("znorm: constant map, returning zeros");
    return out;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (p[i] - mu) / sd;
  return out;
}

std::vector<double> gaussian_taps(double sigma_px) {
  if (!(sigma_px > 0.0)) throw ValidationError("gaussian sigma must be positive");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma_px));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double v = std::exp(-0.5 * k * k / (sigma_px * sigma_px));
    taps[static_cast<std::size_t>(k + radius)] = v;
    total += v;
  }
  for (double& v : taps) v /= total;
  return taps;
}

Plane gaussian_blur(const Plane& p, double sigma_px, bool* applied) {
  if (sigma_px < 0.5) {
    spdlog::warn("smoothing sigma {:.3f} px < 0.5 px, skipped", sigma_px);
    if (applied) *applied = false;
    return p;
  }
  const auto taps = gaussian_taps(sigma_px);
  const auto& k = simd::kernels();
  Plane tmp(p.width(), p.height());
  Plane out(p.width(), p.height());
  k.conv_rows(p.data(), tmp.data(), p.width(), p.height(), taps.data(), static_cast<int>(taps.size()), 1,
              Boundary::kMirror);
  k.conv_cols(tmp.data(), out.data(), p.width(), p.height(), taps.data(), static_cast<int>(taps.size()), 1,
              Boundary::kMirror);
  if (applied) *applied = true;
  return out;
}

SaliencyMap smooth(const Plane& p, double sigma_deg, double ppd, double working_scale, Fusion fusion) {
  if (!(sigma_deg > 0.0) || !(ppd > 0.0) || !(working_scale > 0.0)) {
    throw ValidationError("smooth needs positive sigma_deg, ppd and scale");
  }
  SaliencyMap m;
  m.fusion = fusion;
  m.sigma_deg = sigma_deg;
  bool applied = false;
  m.values = gaussian_blur(p, sigma_deg * ppd * working_scale, &applied);
  m.smoothed = applied;
  return m;
}

}  // namespace v1sal

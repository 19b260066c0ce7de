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

// Fusion of per-(scale, orientation) conspicuity into channel maps, channel
// combination, normalization and smoothing.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "v1sal/plane.hpp"

namespace v1sal {

enum class Fusion { kInverse, kMax, kArgmax };
enum class ChannelCombine { kSqrtSum, kL2 };

std::string to_string(Fusion f);
std::string to_string(ChannelCombine c);
Fusion parse_fusion(const std::string& s);
ChannelCombine parse_channel_combine(const std::string& s);

/// Planes are ordered by scale, then orientation (h, v, d).
Plane fuse_inverse(std::span<const Plane> planes, const Plane& residual);
Plane fuse_max(std::span<const Plane> planes, const Plane& residual);
/// The whole plane holding the single largest response; ties go to the
/// lowest index. `selected` receives that index when non-null.
Plane fuse_argmax(std::span<const Plane> planes, const Plane& residual, std::size_t* selected = nullptr);
Plane fuse(Fusion mode, std::span<const Plane> planes, const Plane& residual);

/// Adds -min when the plane has negative values, so the result is >= 0.
Plane shift_nonnegative(const Plane& p);

struct CombineStats {
  std::size_t clamped = 0;  // pixels whose radicand was negative
};

/// sqrt(rg + by + L) (kSqrtSum) or sqrt(rg^2 + by^2 + L^2) (kL2).
Plane combine_channels(const Plane& rg, const Plane& by, const Plane& l,
                       ChannelCombine mode = ChannelCombine::kSqrtSum, CombineStats* stats = nullptr);

/// (p - mean) / std. A constant plane yields zeros and sets `degenerate`.
Plane znorm(const Plane& p, bool* degenerate = nullptr);

/// Normalized Gaussian taps exp(-k^2 / 2 sigma^2) for |k| <= ceil(3 sigma).
std::vector<double> gaussian_taps(double sigma_px);

/// Separable Gaussian blur with mirror boundary. Returns the input unchanged
/// (and `applied` false) when sigma_px < 0.5.
Plane gaussian_blur(const Plane& p, double sigma_px, bool* applied = nullptr);

struct SaliencyMap {
  Plane values;
  Fusion fusion = Fusion::kInverse;
  bool smoothed = false;
  double sigma_deg = 1.0;
  int width() const { return values.width(); }
  int height() const { return values.height(); }
};

/// Blur with sigma = sigma_deg * ppd * working_scale pixels, where
/// working_scale maps original-image pixels to the plane's pixels.
SaliencyMap smooth(const Plane& p, double sigma_deg, double ppd, double working_scale = 1.0,
                   Fusion fusion = Fusion::kInverse);

}  // namespace v1sal

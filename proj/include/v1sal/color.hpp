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

#pragma once

#include <array>
#include <string_view>

#include "v1sal/plane.hpp"

namespace v1sal {

/// Three planes with samples in [0, 1].
struct RgbImage {
  Plane r, g, b;

  RgbImage() = default;
  RgbImage(int width, int height, double fill = 0.0)
      : r(width, height, fill), g(width, height, fill), b(width, height, fill) {}

  int width() const { return r.width(); }
  int height() const { return r.height(); }
};

/// Throws ValidationError unless the planes agree in size and every sample is
/// a finite value in [0, 1].
void validate(const RgbImage& img);

enum class Channel { kL = 0, kRg = 1, kBy = 2 };
inline constexpr std::array<Channel, 3> kChannels{Channel::kL, Channel::kRg, Channel::kBy};
std::string_view channel_name(Channel c);

/// Luminance L = R+G+B and the opponent planes rg = (R-G)/L, by = (R+G-2B)/L.
struct OpponentImage {
  Plane L, rg, by;

  const Plane& channel(Channel c) const;
  int width() const { return L.width(); }
  int height() const { return L.height(); }
};

inline constexpr double kDefaultGamma = 1.0 / 2.2;
inline constexpr double kOpponentEpsilon = 1e-6;

RgbImage gamma_correct(const RgbImage& img, double gamma = kDefaultGamma);

/// Pixels with L below `epsilon` carry no opponency: rg = by = 0 there.
OpponentImage to_opponent(const RgbImage& img, double epsilon = kOpponentEpsilon);

/// Bilinear resampling. When shrinking, the triangle kernel is widened by the
/// reduction factor so every source pixel contributes (no aliasing).
Plane resize_bilinear(const Plane& src, int width, int height);
RgbImage resize_bilinear(const RgbImage& src, int width, int height);

struct ResizedImage {
  RgbImage image;
  int original_width = 0;
  int original_height = 0;
  /// working size / original size; 1 when no resize happened.
  double scale = 1.0;
};

/// Downscales so the larger side equals `limit` when it exceeds it.
ResizedImage resize_max_side(const RgbImage& img, int limit);

}  // namespace v1sal

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

// Undecimated ("a trous") oriented wavelet analysis.
//
// At scale s the approximation c_{s-1} is filtered along rows with h_s and
// along columns with h_s' (same taps, transposed):
//
//   w_h = c_{s-1} - c_{s-1} * h_s           (row filtering: responds to vertical structure)
//   w_v = c_{s-1} - c_{s-1} * h_s'          (column filtering: responds to horizontal structure)
//   w_d = c_{s-1} - (c_{s-1} * h_s * h_s' + w_h + w_v)
//   c_s = c_{s-1} - (w_h + w_v + w_d)
//
// h_1 = [1 4 6 4 1] / 16 and h_s is h_{s-1} with zeros inserted between taps.
// All planes stay at full resolution; the sum of every detail plane and the
// last residual telescopes back to the input.

#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "v1sal/plane.hpp"

namespace v1sal {

enum class Orientation { kH = 0, kV = 1, kD = 2 };
inline constexpr std::array<Orientation, 3> kOrientations{Orientation::kH, Orientation::kV, Orientation::kD};
std::string_view orientation_name(Orientation o);

/// Odd-length, symmetric low-pass taps summing to one.
struct ScalingFilter {
  std::vector<double> taps;
  int scale = 1;
};

/// h_1 = [1 4 6 4 1] / 16.
ScalingFilter base_filter();
/// Zero insertion: a length-L filter becomes length 2L-1, original taps at even offsets.
ScalingFilter dilate_filter(const ScalingFilter& f);

/// floor(log2(n / 8)) + 2 for the larger image side n >= 8.
int num_scales(int n);

struct WaveletPyramid {
  int width = 0;
  int height = 0;
  /// omega[s - 1][orientation], s in 1..scales.
  std::vector<std::array<Plane, 3>> omega;
  Plane residual;

  int scales() const { return static_cast<int>(omega.size()); }
  const Plane& plane(int s, Orientation o) const { return omega[s - 1][static_cast<int>(o)]; }
  Plane& plane(int s, Orientation o) { return omega[s - 1][static_cast<int>(o)]; }
};

/// `scales` <= 0 picks num_scales(max(width, height)).
WaveletPyramid decompose(const Plane& plane, Boundary boundary = Boundary::kMirror, int scales = 0);

/// Sum of all detail planes plus the residual.
Plane synthesize(const WaveletPyramid& p);

struct OnOffPlanes {
  Plane on;   // max(v, 0)
  Plane off;  // max(-v, 0)
};
OnOffPlanes split_on_off(const Plane& plane);

}  // namespace v1sal

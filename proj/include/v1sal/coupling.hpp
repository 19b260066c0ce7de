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

// Tabulated lateral-connection weights on a periodic lattice.
//
// A node at scale s connects to nodes at pixel offsets 2^(s-1) * k for integer
// vectors k; the kernel geometry uses d = |k| (scale-adjusted distance), so the
// same weight pattern covers a receptive field that doubles with each scale.
// Cross-scale pairs reuse the target scale's spacing and are attenuated by
// lambda(|s - s'|). Offsets are kept only inside the lattice's minimal-image
// window so every pair of nodes is connected at most once.

#pragma once

#include <array>
#include <vector>

#include "v1sal/geometry.hpp"
#include "v1sal/wavelet.hpp"

namespace v1sal {

struct KernelParams {
  JGate j_gate = JGate::kStrict;
  WGate w_gate{};
  /// lambda[|s - s'|]; missing entries are 0.
  std::vector<double> lambda{1.0, 0.5};

  double lambda_at(int dscale) const;
};

/// Preferred edge orientation of a wavelet plane: w_h responds to vertical
/// structure (pi/2), w_v to horizontal (0). w_d mixes pi/4 and 3pi/4.
std::vector<double> preferred_angles(Orientation o);

struct Tap {
  int kx = 0;  // offset in units of the scale's spacing
  int ky = 0;
  double j = 0.0;  // without lambda
  double w = 0.0;
};

class CouplingKernels {
 public:
  CouplingKernels(const KernelParams& params, int scales, int width, int height);

  int scales() const { return scales_; }
  int width() const { return width_; }
  int height() const { return height_; }
  const KernelParams& params() const { return params_; }

  static int spacing(int s) { return 1 << (s - 1); }

  /// Nonzero taps for target scale s and orientation pair (target, source).
  const std::vector<Tap>& taps(int s, Orientation target, Orientation source) const {
    return taps_[static_cast<std::size_t>(s - 1)][index(target, source)];
  }

  /// Weights for the spec-style index (pixel offset, s, theta, s', theta').
  /// Zero for offsets off the scale's grid or outside the lattice window.
  double J(int dx, int dy, int s, Orientation theta, int s_prime, Orientation theta_prime) const;
  double W(int dx, int dy, int s, Orientation theta, int s_prime, Orientation theta_prime) const;

  /// Every grid offset considered for scale s (nonzero or not), for
  /// exhaustive gate checks.
  std::vector<std::array<int, 2>> window_offsets(int s) const;

  /// Sum of all tabulated J and W weights with lambda applied over every
  /// source scale; used for determinism checks.
  double total_mass() const;

  /// Raw (gated) weight for one orientation pair at grid offset k.
  static Tap weight_at(int kx, int ky, Orientation target, Orientation source, const KernelParams& p);

 private:
  static std::size_t index(Orientation a, Orientation b) {
    return static_cast<std::size_t>(a) * 3 + static_cast<std::size_t>(b);
  }
  bool in_window(int px, int py) const;

  KernelParams params_;
  int scales_;
  int width_;
  int height_;
  std::vector<std::array<std::vector<Tap>, 9>> taps_;
};

}  // namespace v1sal

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

// Image to saliency map: resize, gamma, opponent channels, wavelet
// decomposition, ON/OFF lattice dynamics per channel, fusion, channel
// combination, normalization, smoothing and upsampling.

#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "v1sal/color.hpp"
#include "v1sal/coupling.hpp"
#include "v1sal/integrate.hpp"
#include "v1sal/lattice.hpp"
#include "v1sal/wavelet.hpp"

namespace v1sal {

struct PipelineConfig {
  LatticeParams lattice;
  KernelParams kernels;
  Fusion fusion = Fusion::kInverse;
  ChannelCombine combine = ChannelCombine::kSqrtSum;
  int max_side = 128;
  double gamma = kDefaultGamma;
  double ppd = 32.0;
  double sigma_deg = 1.0;
  /// Multiplies the wavelet coefficients before they drive the lattice.
  double input_gain = 10.0;
  Boundary wavelet_boundary = Boundary::kMirror;

  void validate() const;
};

/// Coupling tables keyed by lattice shape, built once and shared read-only.
class KernelCache {
 public:
  explicit KernelCache(KernelParams params) : params_(std::move(params)) {}
  std::shared_ptr<const CouplingKernels> get(int scales, int width, int height);

 private:
  KernelParams params_;
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, std::shared_ptr<const CouplingKernels>> tables_;
};

struct ChannelConspicuity {
  Channel channel = Channel::kL;
  /// Conspicuity per (scale, orientation), ordered as the fusion functions expect.
  std::vector<Plane> planes;
  Plane residual;
};

struct Conspicuity {
  int width = 0;  // working resolution
  int height = 0;
  int original_width = 0;
  int original_height = 0;
  double scale = 1.0;
  std::array<ChannelConspicuity, 3> channels;
};

/// Channel-level trace callback: (channel, time, state, polarity).
using ChannelTraceFn = std::function<void(Channel, double, const LatticeState&, int)>;

/// Everything up to and including the lattice dynamics.
Conspicuity compute_conspicuity(const RgbImage& img, const PipelineConfig& cfg, KernelCache& cache,
                                const ChannelTraceFn& trace = {});

struct SaliencyResult {
  SaliencyMap map;                  // original resolution
  Plane working;                    // normalized and smoothed, working resolution
  std::array<Plane, 3> channel_maps;  // z-normalized per-channel maps, working resolution
  bool degenerate = false;
  std::size_t clamped = 0;
};

/// Fusion through upsampling.
SaliencyResult integrate_conspicuity(const Conspicuity& c, const PipelineConfig& cfg, Fusion fusion);

SaliencyResult compute_saliency(const RgbImage& img, const PipelineConfig& cfg, KernelCache& cache,
                                const ChannelTraceFn& trace = {});

}  // namespace v1sal

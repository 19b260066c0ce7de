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

#include "v1sal/pipeline.hpp"

#include <spdlog/spdlog.h>

#include "v1sal/error.hpp"

namespace v1sal {

void PipelineConfig::validate() const {
  lattice.validate();
  if (max_side < 8) throw ValidationError("max_side must be at least 8");
  if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");
  if (!(ppd > 0.0)) throw ValidationError("ppd must be positive");
  if (!(sigma_deg > 0.0)) throw ValidationError("sigma_deg must be positive");
  if (!(input_gain > 0.0)) throw ValidationError("input_gain must be positive");
}

std::shared_ptr<const CouplingKernels> KernelCache::get(int scales, int width, int height) {
  std::lock_guard lock(mutex_);
  auto& slot = tables_[{scales, width, height}];
  if (!slot) slot = std::make_shared<const CouplingKernels>(params_, scales, width, height);
  return slot;
}

Conspicuity compute_conspicuity(const RgbImage& img, const PipelineConfig& cfg, KernelCache& cache,
                                const ChannelTraceFn& trace) {
  cfg.validate();
  validate(img);
  const ResizedImage resized = resize_max_side(img, cfg.max_side);
  const OpponentImage opp = to_opponent(gamma_correct(resized.image, cfg.gamma));

  Conspicuity out;
  out.width = opp.width();
  out.height = opp.height();
  out.original_width = resized.original_width;
  out.original_height = resized.original_height;
  out.scale = resized.scale;

  for (Channel c : kChannels) {
    WaveletPyramid pyr = decompose(opp.channel(c), cfg.wavelet_boundary);
    ChannelConspicuity& cc = out.channels[static_cast<std::size_t>(c)];
    cc.channel = c;
    cc.residual = pyr.residual;
    if (cfg.input_gain != 1.0) {
      for (auto& level : pyr.omega)
        for (Plane& p : level) p *= cfg.input_gain;
    }
    auto [on, off] = on_off_inputs(pyr);
    auto kernels = cache.get(pyr.scales(), pyr.width, pyr.height);
    TraceFn tf;
    if (trace) tf = [&, c](double t, const LatticeState& s, int polarity) { trace(c, t, s, polarity); };
    const ConspicuityResponse resp = simulate_channel(on, off, kernels, cfg.lattice, c, tf);
    const std::vector<double> sh = conspicuity(resp);
    ConspicuityResponse view = resp;
    for (int s = 1; s <= pyr.scales(); ++s)
      for (Orientation o : kOrientations) cc.planes.push_back(view.plane(sh, s, o));
  }
  return out;
}

SaliencyResult integrate_conspicuity(const Conspicuity& c, const PipelineConfig& cfg, Fusion fusion) {
  SaliencyResult r;
  std::array<Plane, 3> fused;
  for (std::size_t k = 0; k < 3; ++k) {
    const ChannelConspicuity& ch = c.channels[k];
    fused[k] = shift_nonnegative(fuse(fusion, ch.planes, ch.residual));
    // Silent channels (achromatic input) are routine; skip the warning.
    r.channel_maps[k] = stddev(fused[k]) > 0.0 ? znorm(fused[k]) : Plane(fused[k].width(), fused[k].height());
  }
  CombineStats stats;
  const Plane combined = combine_channels(fused[static_cast<std::size_t>(Channel::kRg)],
                                          fused[static_cast<std::size_t>(Channel::kBy)],
                                          fused[static_cast<std::size_t>(Channel::kL)], cfg.combine, &stats);
  r.clamped = stats.clamped;
  const Plane z = znorm(combined, &r.degenerate);
  SaliencyMap smoothed = smooth(z, cfg.sigma_deg, cfg.ppd, c.scale, fusion);
  r.working = smoothed.values;
  r.map = smoothed;
  if (c.original_width != c.width || c.original_height != c.height) {
    r.map.values = resize_bilinear(smoothed.values, c.original_width, c.original_height);
  }
  return r;
}

SaliencyResult compute_saliency(const RgbImage& img, const PipelineConfig& cfg, KernelCache& cache,
                                const ChannelTraceFn& trace) {
  return integrate_conspicuity(compute_conspicuity(img, cfg, cache, trace), cfg, cfg.fusion);
}

}  // namespace v1sal

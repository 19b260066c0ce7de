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

#include "v1sal/wavelet.hpp"

#include <algorithm>
#include <cmath>

#include "v1sal/error.hpp"
#include "v1sal/simd/kernels.hpp"

namespace v1sal {

std::string_view orientation_name(Orientation o) {
  switch (o) {
    case Orientation::kH: return "h";
    case Orientation::kV: return "v";
    case Orientation::kD: return "d";
  }
  return "?";
}

ScalingFilter base_filter() {
  return ScalingFilter{{1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16}, 1};
}

ScalingFilter dilate_filter(const ScalingFilter& f) {
  ScalingFilter out;
  out.scale = f.scale + 1;
  if (f.taps.empty()) return out;
  out.taps.assign(2 * f.taps.size() - 1, 0.0);
  for (std::size_t i = 0; i < f.taps.size(); ++i) out.taps[2 * i] = f.taps[i];
  return out;
}

int num_scales(int n) {
  if (n < 8) throw ValidationError("wavelet analysis needs a side of at least 8 pixels");
  // Exact integer floor(log2(n / 8)).
  int s = 0;
  while ((8LL << (s + 1)) <= n) ++s;
  return s + 2;
}

WaveletPyramid decompose(const Plane& plane, Boundary boundary, int scales) {
  const int w = plane.width(), h = plane.height();
  if (scales <= 0) scales = num_scales(std::max(w, h));
  if (!all_finite(plane)) throw ValidationError("wavelet input contains non-finite values");

  const auto& k = simd::kernels();
  const ScalingFilter h1 = base_filter();
  const int ntaps = static_cast<int>(h1.taps.size());

  WaveletPyramid p;
  p.width = w;
  p.height = h;
  p.omega.resize(static_cast<std::size_t>(scales));

  Plane prev = plane;
  Plane ch(w, h), cv(w, h), chv(w, h);
  for (int s = 1; s <= scales; ++s) {
    // h_s is h_1 dilated 2^(s-1) times; convolve with the compact taps.
    const int dilation = 1 << (s - 1);
    k.conv_rows(prev.data(), ch.data(), w, h, h1.taps.data(), ntaps, dilation, boundary);
    k.conv_cols(prev.data(), cv.data(), w, h, h1.taps.data(), ntaps, dilation, boundary);
    k.conv_cols(ch.data(), chv.data(), w, h, h1.taps.data(), ntaps, dilation, boundary);

    auto& level = p.omega[static_cast<std::size_t>(s - 1)];
    Plane& wh = level[0];
    Plane& wv = level[1];
    Plane& wd = level[2];
    wh = Plane(w, h);
    wv = Plane(w, h);
    wd = Plane(w, h);
    Plane next(w, h);
    for (std::size_t i = 0; i < prev.size(); ++i) {
      wh[i] = prev[i] - ch[i];
      wv[i] = prev[i] - cv[i];
      wd[i] = prev[i] - (chv[i] + wh[i] + wv[i]);
      next[i] = prev[i] - (wh[i] + wv[i] + wd[i]);
    }
    prev = std::move(next);
  }
  p.residual = std::move(prev);
  return p;
}

Plane synthesize(const WaveletPyramid& p) {
  Plane out = p.residual;
  for (const auto& level : p.omega) {
    for (const Plane& w : level) out += w;
  }
  return out;
}

OnOffPlanes split_on_off(const Plane& plane) {
  OnOffPlanes r{Plane(plane.width(), plane.height()), Plane(plane.width(), plane.height())};
  for (std::size_t i = 0; i < plane.size(); ++i) {
    r.on[i] = std::max(plane[i], 0.0);
    r.off[i] = std::max(-plane[i], 0.0);
  }
  return r;
}

}  // namespace v1sal

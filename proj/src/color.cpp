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

#include "v1sal/color.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "v1sal/error.hpp"

namespace v1sal {

void validate(const RgbImage& img) {
  if (!img.r.same_shape(img.g) || !img.r.same_shape(img.b)) {
    throw ValidationError("RGB planes differ in size");
  }
  for (const Plane* p : {&img.r, &img.g, &img.b}) {
    for (double v : p->values()) {
      if (!std::isfinite(v)) throw ValidationError("non-finite RGB sample");
      if (v < 0.0 || v > 1.0) throw ValidationError("RGB sample outside [0, 1]");
    }
  }
}

std::string_view channel_name(Channel c) {
  switch (c) {
    case Channel::kL: return "L";
    case Channel::kRg: return "rg";
    case Channel::kBy: return "by";
  }
  return "?";
}

const Plane& OpponentImage::channel(Channel c) const {
  switch (c) {
    case Channel::kL: return L;
    case Channel::kRg: return rg;
    case Channel::kBy: return by;
  }
  return L;
}

RgbImage gamma_correct(const RgbImage& img, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("gamma must be positive");
  validate(img);
  RgbImage out = img;
  for (Plane* p : {&out.r, &out.g, &out.b}) {
    for (double& v : p->values()) v = std::pow(v, gamma);
  }
  return out;
}

OpponentImage to_opponent(const RgbImage& img, double epsilon) {
  const int w = img.width(), h = img.height();
  OpponentImage o{Plane(w, h), Plane(w, h), Plane(w, h)};
  for (std::size_t i = 0; i < img.r.size(); ++i) {
    const double r = img.r[i], g = img.g[i], b = img.b[i];
    const double l = r + g + b;
    o.L[i] = l;
    if (l >= epsilon) {
      o.rg[i] = (r - g) / l;
      o.by[i] = (r + g - 2.0 * b) / l;
    }
  }
  return o;
}

namespace {

struct Contribution {
  int first = 0;
  std::vector<double> weights;
};

// Per-output-sample weights along one axis: triangle kernel centred on the
// mapped source coordinate, radius max(1, 1/scale), normalized, edges clamped.
std::vector<Contribution> axis_weights(int in, int out) {
  const double scale = static_cast<double>(out) / in;
  const double support = scale < 1.0 ? 1.0 / scale : 1.0;
  std::vector<Contribution> table(static_cast<std::size_t>(out));
  for (int o = 0; o < out; ++o) {
    const double center = (o + 0.5) / scale - 0.5;
    const int lo = std::max(0, static_cast<int>(std::floor(center - support)) + 1);
    const int hi = std::min(in - 1, static_cast<int>(std::ceil(center + support)) - 1);
    Contribution c;
    c.first = lo;
    double total = 0.0;
    for (int i = lo; i <= hi; ++i) {
      const double wgt = std::max(0.0, 1.0 - std::abs(i - center) / support);
      c.weights.push_back(wgt);
      total += wgt;
    }
    if (total <= 0.0) {
      // Degenerate mapping at the border: nearest sample.
      c.first = std::clamp(static_cast<int>(std::lround(center)), 0, in - 1);
      c.weights.assign(1, 1.0);
    } else {
      for (double& wgt : c.weights) wgt /= total;
    }
    table[o] = std::move(c);
  }
  return table;
}

}  // namespace

Plane resize_bilinear(const Plane& src, int width, int height) {
  if (src.empty()) throw ValidationError("cannot resize an empty plane");
  if (width <= 0 || height <= 0) throw ValidationError("resize target must be positive");
  if (width == src.width() && height == src.height()) return src;

  const auto wx = axis_weights(src.width(), width);
  const auto wy = axis_weights(src.height(), height);

  Plane tmp(width, src.height());
  for (int y = 0; y < src.height(); ++y) {
    const double* s = src.row(y);
    for (int x = 0; x < width; ++x) {
      const Contribution& c = wx[x];
      double acc = 0.0;
      for (std::size_t k = 0; k < c.weights.size(); ++k) acc += c.weights[k] * s[c.first + k];
      tmp(x, y) = acc;
    }
  }
  Plane out(width, height);
  for (int y = 0; y < height; ++y) {
    const Contribution& c = wy[y];
    double* d = out.row(y);
    for (std::size_t k = 0; k < c.weights.size(); ++k) {
      const double* s = tmp.row(c.first + static_cast<int>(k));
      const double wgt = c.weights[k];
      for (int x = 0; x < width; ++x) d[x] += wgt * s[x];
    }
  }
  return out;
}

RgbImage resize_bilinear(const RgbImage& src, int width, int height) {
  RgbImage out;
  out.r = resize_bilinear(src.r, width, height);
  out.g = resize_bilinear(src.g, width, height);
  out.b = resize_bilinear(src.b, width, height);
  return out;
}

ResizedImage resize_max_side(const RgbImage& img, int limit) {
  if (limit < 8) throw ValidationError("resize limit must be at least 8");
  if (img.width() <= 0 || img.height() <= 0) throw ValidationError("zero-size image");
  ResizedImage r;
  r.original_width = img.width();
  r.original_height = img.height();
  const int side = std::max(img.width(), img.height());
  if (side <= limit) {
    r.image = img;
    return r;
  }
  r.scale = static_cast<double>(limit) / side;
  const int w = img.width() >= img.height() ? limit
                                            : std::max(1, static_cast<int>(std::lround(img.width() * r.scale)));
  const int h = img.height() > img.width() ? limit
                                           : std::max(1, static_cast<int>(std::lround(img.height() * r.scale)));
  r.image = resize_bilinear(img, w, h);
  // Interpolation weights are convex, but rounding can graze the bounds.
  for (Plane* p : {&r.image.r, &r.image.g, &r.image.b}) {
    for (double& v : p->values()) v = std::clamp(v, 0.0, 1.0);
  }
  return r;
}

}  // namespace v1sal

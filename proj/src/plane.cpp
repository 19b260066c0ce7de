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

#include "v1sal/plane.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "v1sal/error.hpp"

namespace v1sal {

Plane::Plane(int width, int height, double fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw ValidationError("negative plane dimensions");
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

Plane& Plane::operator+=(const Plane& o) {
  assert(same_shape(o));
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Plane& Plane::operator-=(const Plane& o) {
  assert(same_shape(o));
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Plane& Plane::operator*=(double k) {
  for (double& v : data_) v *= k;
  return *this;
}

int boundary_index(int i, int n, Boundary b) {
  if (i >= 0 && i < n) return i;
  if (b == Boundary::kPeriodic) {
    int r = i % n;
    return r < 0 ? r + n : r;
  }
  // Half-sample symmetric extension has period 2n.
  const int period = 2 * n;
  int r = i % period;
  if (r < 0) r += period;
  return r < n ? r : period - 1 - r;
}

double min_value(const Plane& p) { return *std::min_element(p.values().begin(), p.values().end()); }
double max_value(const Plane& p) { return *std::max_element(p.values().begin(), p.values().end()); }

double sum(const Plane& p) { return std::accumulate(p.values().begin(), p.values().end(), 0.0); }

double mean(const Plane& p) { return p.empty() ? 0.0 : sum(p) / static_cast<double>(p.size()); }

double stddev(const Plane& p) {
  if (p.empty()) return 0.0;
  const double mu = mean(p);
  double acc = 0.0;
  for (double v : p.values()) acc += (v - mu) * (v - mu);
  return std::sqrt(acc / static_cast<double>(p.size()));
}

bool all_finite(const Plane& p) {
  return std::all_of(p.values().begin(), p.values().end(), [](double v) { return std::isfinite(v); });
}

double max_abs_diff(const Plane& a, const Plane& b) {
  if (!a.same_shape(b)) throw ValidationError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Plane circular_shift(const Plane& p, int dx, int dy) {
  Plane out(p.width(), p.height());
  for (int y = 0; y < p.height(); ++y) {
    const int ty = boundary_index(y + dy, p.height(), Boundary::kPeriodic);
    for (int x = 0; x < p.width(); ++x) {
      out(boundary_index(x + dx, p.width(), Boundary::kPeriodic), ty) = p(x, y);
    }
  }
  return out;
}

}  // namespace v1sal

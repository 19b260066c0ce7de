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

#include <cstddef>
#include <span>
#include <vector>

namespace v1sal {

/// Row-major 2-D grid of doubles. Index (x, y) with x the column.
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  double operator()(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_; }
  const double* row(int y) const { return data_.data() + static_cast<std::size_t>(y) * width_; }

  bool same_shape(const Plane& o) const { return width_ == o.width_ && height_ == o.height_; }

  Plane& operator+=(const Plane& o);
  Plane& operator-=(const Plane& o);
  Plane& operator*=(double k);
  friend Plane operator+(Plane a, const Plane& b) { return a += b; }
  friend Plane operator-(Plane a, const Plane& b) { return a -= b; }
  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

enum class Boundary {
  kMirror,    // half-sample symmetric: ... c b a | a b c ... c b a | a b ...
  kPeriodic,
};

/// Maps an out-of-range index into [0, n) under the given boundary rule.
int boundary_index(int i, int n, Boundary b);

double min_value(const Plane& p);
double max_value(const Plane& p);
double sum(const Plane& p);
double mean(const Plane& p);
/// Population standard deviation (divides by N).
double stddev(const Plane& p);
bool all_finite(const Plane& p);
double max_abs_diff(const Plane& a, const Plane& b);

/// Circular shift by (dx, dy): out(x + dx, y + dy) = in(x, y).
Plane circular_shift(const Plane& p, int dx, int dy);

}  // namespace v1sal

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

#include "v1sal/coupling.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "v1sal/error.hpp"

namespace v1sal {

using std::numbers::pi;

double KernelParams::lambda_at(int dscale) const {
  if (dscale < 0 || dscale >= static_cast<int>(lambda.size())) return 0.0;
  return lambda[static_cast<std::size_t>(dscale)];
}

std::vector<double> preferred_angles(Orientation o) {
  switch (o) {
    case Orientation::kH: return {pi / 2};
    case Orientation::kV: return {0.0};
    case Orientation::kD: return {pi / 4, 3 * pi / 4};
  }
  return {};
}

Tap CouplingKernels::weight_at(int kx, int ky, Orientation target, Orientation source, const KernelParams& p) {
  Tap t{kx, ky, 0.0, 0.0};
  const auto ta = preferred_angles(target);
  const auto sa = preferred_angles(source);
  // Combined-diagonal nodes average over their constituent angles; two
  // diagonal nodes pair matched angles only.
  int n = 0;
  auto add = [&](double a, double b) {
    const KernelGeometry g = geometry(kx, ky, a, b, 1, 1);
    t.j += j_weight(g, 1.0, p.j_gate);
    t.w += w_weight(g, 1.0, p.w_gate);
    ++n;
  };
  if (ta.size() == 2 && sa.size() == 2) {
    add(ta[0], sa[0]);
    add(ta[1], sa[1]);
  } else {
    for (double a : ta)
      for (double b : sa) add(a, b);
  }
  t.j /= n;
  t.w /= n;
  return t;
}

CouplingKernels::CouplingKernels(const KernelParams& params, int scales, int width, int height)
    : params_(params), scales_(scales), width_(width), height_(height) {
  if (scales < 1) throw ValidationError("coupling kernels need at least one scale");
  if (width < 1 || height < 1) throw ValidationError("lattice dimensions must be positive");
  const int reach = static_cast<int>(kMaxCouplingDistance);
  taps_.resize(static_cast<std::size_t>(scales));
  for (int s = 1; s <= scales; ++s) {
    const int sp = spacing(s);
    for (Orientation a : kOrientations) {
      for (Orientation b : kOrientations) {
        auto& list = taps_[static_cast<std::size_t>(s - 1)][index(a, b)];
        for (int ky = -reach; ky <= reach; ++ky) {
          for (int kx = -reach; kx <= reach; ++kx) {
            if (!in_window(kx * sp, ky * sp)) continue;
            Tap t = weight_at(kx, ky, a, b, params_);
            if (t.j != 0.0 || t.w != 0.0) list.push_back(t);
          }
        }
      }
    }
  }
}

bool CouplingKernels::in_window(int px, int py) const {
  // Strict minimal-image window: |offset| < size/2 along each axis.
  return 2 * std::abs(px) < width_ && 2 * std::abs(py) < height_;
}

std::vector<std::array<int, 2>> CouplingKernels::window_offsets(int s) const {
  const int reach = static_cast<int>(kMaxCouplingDistance) + 1;
  const int sp = spacing(s);
  std::vector<std::array<int, 2>> out;
  for (int ky = -reach; ky <= reach; ++ky)
    for (int kx = -reach; kx <= reach; ++kx)
      if (in_window(kx * sp, ky * sp)) out.push_back({kx, ky});
  return out;
}

double CouplingKernels::J(int dx, int dy, int s, Orientation theta, int s_prime, Orientation theta_prime) const {
  const int sp = spacing(s);
  if (dx % sp != 0 || dy % sp != 0 || !in_window(dx, dy)) return 0.0;
  const double lambda = params_.lambda_at(std::abs(s - s_prime));
  if (lambda == 0.0) return 0.0;
  return lambda * weight_at(dx / sp, dy / sp, theta, theta_prime, params_).j;
}

double CouplingKernels::W(int dx, int dy, int s, Orientation theta, int s_prime, Orientation theta_prime) const {
  const int sp = spacing(s);
  if (dx % sp != 0 || dy % sp != 0 || !in_window(dx, dy)) return 0.0;
  const double lambda = params_.lambda_at(std::abs(s - s_prime));
  if (lambda == 0.0) return 0.0;
  return lambda * weight_at(dx / sp, dy / sp, theta, theta_prime, params_).w;
}

double CouplingKernels::total_mass() const {
  double m = 0.0;
  for (int s = 1; s <= scales_; ++s) {
    double lam = 0.0;
    for (int sp = 1; sp <= scales_; ++sp) lam += params_.lambda_at(std::abs(s - sp));
    for (const auto& list : taps_[static_cast<std::size_t>(s - 1)])
      for (const Tap& t : list) m += lam * (t.j + t.w);
  }
  return m;
}

}  // namespace v1sal

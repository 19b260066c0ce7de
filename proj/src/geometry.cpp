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

#include "v1sal/geometry.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

namespace v1sal {

using std::numbers::pi;

double fold_orientation(double angle) {
  double a = std::fmod(angle, pi);
  if (a <= -pi / 2) a += pi;
  if (a > pi / 2) a -= pi;
  return a;
}

KernelGeometry geometry(double dx, double dy, double theta, double theta_prime, int s, int s_prime) {
  KernelGeometry g;
  g.d = std::hypot(dx, dy);
  g.dscale = std::abs(s - s_prime);
  g.dtheta = fold_orientation(theta - theta_prime);
  if (g.d == 0.0) {
    // No connecting line: measure both orientations against the horizontal.
    g.theta1 = fold_orientation(theta);
    g.theta2 = fold_orientation(theta_prime);
  } else {
    const double line = std::atan2(dy, dx);
    g.theta1 = fold_orientation(theta - line);
    g.theta2 = fold_orientation(theta_prime - line);
  }
  if (std::abs(g.theta1) > std::abs(g.theta2)) std::swap(g.theta1, g.theta2);
  g.beta = 2.0 * std::abs(g.theta1) + 2.0 * std::sin(std::abs(g.theta1 + g.theta2));
  return g;
}

bool j_applies(const KernelGeometry& g, JGate gate) {
  const bool in_range = g.d > 0.0 && g.d <= kMaxCouplingDistance;
  if (!in_range) return false;
  const bool aligned = std::abs(g.theta1) < pi / 5.9 && std::abs(g.theta2) < pi / 5.9;
  if (gate == JGate::kExtended) return g.beta < pi / 2.69 || (g.beta < pi / 1.1 && aligned);
  return g.beta < pi / 2.69;
}

bool w_excluded(const KernelGeometry& g, const WGate& gate) {
  if (g.d == 0.0 || g.d >= kMaxCouplingDistance) return true;
  if (gate.exclude_low_beta ? g.beta < pi / 1.1 : g.beta >= pi / 1.1) return true;
  if (std::abs(g.dtheta) >= pi / 3) return true;
  if (std::abs(g.theta1) < gate.theta1_min) return true;
  return false;
}

double j_weight(const KernelGeometry& g, double lambda, JGate gate) {
  if (!j_applies(g, gate)) return 0.0;
  const double r = g.beta / g.d;
  return lambda * 0.126 * std::exp(-r * r - 2.0 * std::pow(r, 7) - g.d * g.d / 90.0);
}

double w_weight(const KernelGeometry& g, double lambda, const WGate& gate) {
  if (w_excluded(g, gate)) return 0.0;
  const double r = g.beta / g.d;
  return lambda * 0.14 * (1.0 - std::exp(-0.4 * std::pow(r, 1.5))) *
         std::exp(-std::pow(std::abs(g.dtheta) / (pi / 4), 1.5));
}

}  // namespace v1sal

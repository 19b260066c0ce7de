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

// Relative geometry of two oriented lattice nodes and the excitatory (J) and
// inhibitory (W) lateral weights defined on it.

#pragma once

#include <numbers>

namespace v1sal {

/// Geometry of the pair (i, j). `d` is measured in scale-adjusted lattice
/// units. theta1/theta2 are the node orientations relative to the line i->j,
/// folded into (-pi/2, pi/2] and ordered so |theta1| <= |theta2|.
struct KernelGeometry {
  double d = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double beta = 0.0;    // 2|theta1| + 2 sin|theta1 + theta2|
  double dtheta = 0.0;  // orientation difference folded into (-pi/2, pi/2]
  int dscale = 0;       // |s - s'|
};

/// Folds an orientation angle (period pi) into (-pi/2, pi/2].
double fold_orientation(double angle);

/// `dx`, `dy`: offset from node i to node j in scale-adjusted lattice units.
/// `theta`, `theta_prime`: preferred orientations of i and j (radians).
KernelGeometry geometry(double dx, double dy, double theta, double theta_prime, int s, int s_prime);

enum class JGate {
  kStrict,    // 0<d<=10 and beta<pi/2.69
  kExtended,  // also beta<pi/1.1 when |theta1|,|theta2|<pi/5.9
};

struct WGate {
  /// Exclusion |theta1| < theta1_min. kWideTheta1Min exceeds pi/2 and so
  /// excludes every geometry.
  double theta1_min = std::numbers::pi / 11.999;
  /// true: exclude beta < pi/1.1. false: exclude beta >= pi/1.1.
  bool exclude_low_beta = true;
};

inline constexpr double kWideTheta1Min = std::numbers::pi / 1.99;
inline constexpr double kMaxCouplingDistance = 10.0;

bool j_applies(const KernelGeometry& g, JGate gate = JGate::kStrict);
bool w_excluded(const KernelGeometry& g, const WGate& gate = {});

/// lambda * 0.126 * exp(-(beta/d)^2 - 2 (beta/d)^7 - d^2/90) where the gate applies, else 0.
double j_weight(const KernelGeometry& g, double lambda, JGate gate = JGate::kStrict);
/// lambda * 0.14 * (1 - exp(-0.4 (beta/d)^1.5)) * exp(-(|dtheta|/(pi/4))^1.5) unless excluded.
double w_weight(const KernelGeometry& g, double lambda, const WGate& gate = {});

}  // namespace v1sal

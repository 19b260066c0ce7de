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

// Excitatory/inhibitory firing-rate lattice over (position, scale, orientation).
//
//   dx/dt = -ax x - gy(y) - sum_psi psi * gy(y') + J0 gx(x) + sum_j J gx(x_j) + I + I0
//   dy/dt = -ay y + gx(x) + sum_j W gx(x_j) + Ic + noise
//
// x' and y' range over the other orientations at the same scale and the same
// orientation at neighbouring scales (the hypercolumn). The lateral sums run
// over the periodic lattice through CouplingKernels.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "v1sal/color.hpp"
#include "v1sal/coupling.hpp"
#include "v1sal/plane.hpp"
#include "v1sal/simd/kernels.hpp"
#include "v1sal/wavelet.hpp"

namespace v1sal {

enum class Integrator {
  kSplitRk4,  // RK4 on the hypercolumn dynamics, lateral input held over each step
  kRk4,       // classical RK4, lateral input re-evaluated at every stage
  kEuler,     // explicit Euler
};

enum class LateralMethod {
  kSpectral,  // FFT convolution on the torus
  kDirect,    // spatial sum over taps; reference route
};

std::string to_string(Integrator i);
std::string to_string(LateralMethod m);
Integrator parse_integrator(const std::string& s);
LateralMethod parse_lateral_method(const std::string& s);

struct LatticeParams {
  double alpha_x = 1.0;
  double alpha_y = 1.0;
  double j0 = 0.8;
  double i0 = 0.85;
  double ic = 1.0;
  double noise_sd = 0.1;  // Gaussian noise on the inhibitory input
  /// Threshold 1, unit slope, saturates at rate 1 for x in [1, 2].
  simd::PiecewiseLinear gx{1.0, 1.0, 2.0, 0.0, 1.0};
  /// Threshold 0, slope 0.21 up to 1.2, slope 2.5 beyond.
  simd::PiecewiseLinear gy{0.0, 0.21, 1.2, 2.5, 1e300};
  double psi_orientation = 0.8;  // same scale, other orientation
  double psi_scale = 0.5;        // same orientation, adjacent scale
  double y_self_sign = 1.0;
  double dt = 0.1;
  double t_total = 10.0;
  double avg_start = 5.0;  // temporal mean over [avg_start, t_total)
  double membrane_ms = 10.0;
  Integrator integrator = Integrator::kSplitRk4;
  LateralMethod lateral = LateralMethod::kSpectral;
  std::uint64_t seed = 1;

  void validate() const;
  int steps() const;
};

/// Node values stored plane-major: plane (s, theta) at index (s-1)*3 + theta.
struct LatticeState {
  int width = 0;
  int height = 0;
  int scales = 0;
  std::vector<double> x;
  std::vector<double> y;
  double t = 0.0;

  LatticeState() = default;
  LatticeState(int w, int h, int s);
  std::size_t nodes_per_plane() const { return static_cast<std::size_t>(width) * height; }
  int planes() const { return 3 * scales; }
  static int plane_index(int s, Orientation o) { return (s - 1) * 3 + static_cast<int>(o); }
};

/// Feedforward drive I for every (s, theta) plane, same layout as the state.
struct LatticeInput {
  int width = 0;
  int height = 0;
  int scales = 0;
  std::vector<double> values;
};

/// Nonnegative parts of the detail planes: (ON, OFF).
std::pair<LatticeInput, LatticeInput> on_off_inputs(const WaveletPyramid& p);
LatticeInput to_input(const WaveletPyramid& p);

class Lattice {
 public:
  Lattice(std::shared_ptr<const CouplingKernels> kernels, LatticeParams params,
          const simd::KernelTable& simd = simd::kernels());
  ~Lattice();
  Lattice(const Lattice&) = delete;
  Lattice& operator=(const Lattice&) = delete;

  const LatticeParams& params() const { return params_; }
  const CouplingKernels& kernels() const { return *kernels_; }

  /// One integration step of length dt. `noise` (one value per node, may be
  /// empty) is added to the inhibitory drive and held over the step.
  /// Throws DivergenceError on a non-finite result.
  void step(LatticeState& state, const LatticeInput& input, std::span<const double> noise) const;

  /// Lateral sums for rates `gx`: exc = J (x) gx, inh = W (x) gx.
  void lateral(const double* gx, double* exc, double* inh) const;

 private:
  static constexpr std::size_t kTile = 128;
  struct Tile;
  struct Workspace;
  // Planes are `stride` apart; each holds `n` nodes.
  void local_rhs(const double* x, const double* y, const double* gx, const double* exc,
                 const double* inh, const double* input, const double* noise, double* dx,
                 double* dy, double* gy, std::size_t stride, std::size_t n,
                 const simd::Rk4Stage* stage = nullptr) const;
  void lateral_direct(const double* gx, double* exc, double* inh) const;
  void lateral_spectral(const double* gx, double* exc, double* inh) const;

  std::shared_ptr<const CouplingKernels> kernels_;
  LatticeParams params_;
  const simd::KernelTable& simd_;
  int width_, height_, scales_;
  std::size_t plane_size_;
  std::unique_ptr<Workspace> ws_;
  struct Spectral;
  std::unique_ptr<Spectral> spectral_;
};

/// Seeded standard-normal noise field scaled by `sd`, one value per node.
class NoiseSource {
 public:
  NoiseSource(std::uint64_t seed, double sd);
  void fill(std::span<double> out);

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

struct ConspicuityResponse {
  Channel channel = Channel::kL;
  int width = 0;
  int height = 0;
  int scales = 0;
  /// Temporal mean of gx(x) per node, plane-major.
  std::vector<double> mean_rate_on;
  std::vector<double> mean_rate_off;

  Plane plane(const std::vector<double>& v, int s, Orientation o) const;
};

/// Observer invoked after each step: (time, state, polarity 0=ON 1=OFF).
using TraceFn = std::function<void(double, const LatticeState&, int)>;

/// Runs the ON and OFF lattices of one channel side by side, sharing the
/// noise stream seeded by (params.seed, channel), and returns the temporal
/// mean rates over [avg_start, t_total).
ConspicuityResponse simulate_channel(const LatticeInput& on, const LatticeInput& off,
                                     std::shared_ptr<const CouplingKernels> kernels,
                                     const LatticeParams& params, Channel channel,
                                     const TraceFn& trace = {});

/// Per-node conspicuity: mean ON rate + mean OFF rate, plane-major. The
/// undefined additive term of the readout is taken as 0; the wavelet residual
/// enters at integration instead.
std::vector<double> conspicuity(const ConspicuityResponse& r);

std::uint64_t channel_seed(std::uint64_t seed, Channel c);

}  // namespace v1sal

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

#include "doctest.h"

#include <array>
#include <cmath>
#include <random>

#include "v1sal/error.hpp"
#include "v1sal/lattice.hpp"

using namespace v1sal;

namespace {

LatticeParams quiet(Integrator integ) {
  LatticeParams p;
  p.noise_sd = 0.0;
  p.integrator = integ;
  return p;
}

// One isolated hypercolumn with three orientation nodes, integrated in plain
// scalar code. Lateral terms vanish on a 1x1 lattice.
struct Hypercolumn {
  LatticeParams p;
  std::array<double, 3> in{};

  void rhs(const std::array<double, 6>& s, std::array<double, 6>& d) const {
    for (int o = 0; o < 3; ++o) {
      const double x = s[o], y = s[3 + o];
      double inh = p.gy(y);
      for (int k = 0; k < 3; ++k)
        if (k != o) inh += p.psi_orientation * p.gy(s[3 + k]);
      d[o] = -p.alpha_x * x - inh + p.j0 * p.gx(x) + in[o] + p.i0;
      d[3 + o] = -p.alpha_y * y + p.y_self_sign * p.gx(x) + p.ic;
    }
  }
  void euler(std::array<double, 6>& s, double dt) const {
    std::array<double, 6> d{};
    rhs(s, d);
    for (int i = 0; i < 6; ++i) s[i] += dt * d[i];
  }
  void rk4(std::array<double, 6>& s, double dt) const {
    std::array<double, 6> k1{}, k2{}, k3{}, k4{}, t{};
    rhs(s, k1);
    for (int i = 0; i < 6; ++i) t[i] = s[i] + 0.5 * dt * k1[i];
    rhs(t, k2);
    for (int i = 0; i < 6; ++i) t[i] = s[i] + 0.5 * dt * k2[i];
    rhs(t, k3);
    for (int i = 0; i < 6; ++i) t[i] = s[i] + dt * k3[i];
    rhs(t, k4);
    for (int i = 0; i < 6; ++i) s[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
};

LatticeInput constant_input(int w, int h, int scales, const std::array<double, 3>& v) {
  LatticeInput in{w, h, scales, {}};
  const std::size_t n = static_cast<std::size_t>(w) * h;
  in.values.resize(n * 3 * scales);
  for (int s = 1; s <= scales; ++s)
    for (Orientation o : kOrientations)
      for (std::size_t i = 0; i < n; ++i)
        in.values[LatticeState::plane_index(s, o) * n + i] = v[static_cast<std::size_t>(o)];
  return in;
}

LatticeInput random_input(int w, int h, int scales, unsigned seed, double hi) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, hi);
  LatticeInput in{w, h, scales, std::vector<double>(static_cast<std::size_t>(w) * h * 3 * scales)};
  for (double& v : in.values) v = u(rng);
  return in;
}

}  // namespace

TEST_CASE("activation profiles") {
  const LatticeParams p;
  CHECK(p.gx(0.5) == 0.0);
  CHECK(p.gx(1.5) == 0.5);
  CHECK(p.gx(2.0) == 1.0);
  CHECK(p.gx(7.0) == 1.0);
  CHECK(p.gy(-1.0) == 0.0);
  CHECK(p.gy(0.6) == doctest::Approx(0.21 * 0.6));
  CHECK(p.gy(2.0) == doctest::Approx(0.21 * 1.2 + 2.5 * 0.8));
}

TEST_CASE("isolated hypercolumn matches a scalar integration") {
  const std::array<double, 3> drive{0.4, 1.7, 3.0};
  for (Integrator integ : {Integrator::kEuler, Integrator::kRk4, Integrator::kSplitRk4}) {
    const LatticeParams p = quiet(integ);
    auto k = std::make_shared<CouplingKernels>(KernelParams{}, 1, 1, 1);
    const Lattice lat(k, p);
    LatticeState st(1, 1, 1);
    const LatticeInput in = constant_input(1, 1, 1, drive);
    Hypercolumn ref{p, drive};
    std::array<double, 6> s{};
    for (int n = 0; n < 60; ++n) {
      lat.step(st, in, {});
      if (integ == Integrator::kEuler) {
        ref.euler(s, p.dt);
      } else {
        ref.rk4(s, p.dt);
      }
    }
    for (int o = 0; o < 3; ++o) {
      CHECK(st.x[static_cast<std::size_t>(o)] == doctest::Approx(s[o]).epsilon(1e-12));
      CHECK(st.y[static_cast<std::size_t>(o)] == doctest::Approx(s[3 + o]).epsilon(1e-12));
    }
    CHECK(st.t == doctest::Approx(6.0));
  }
}

TEST_CASE("zero input settles below threshold") {
  const LatticeParams p = quiet(Integrator::kSplitRk4);
  auto k = std::make_shared<CouplingKernels>(KernelParams{}, 2, 8, 8);
  const Lattice lat(k, p);
  LatticeState st(8, 8, 2);
  const LatticeInput in = constant_input(8, 8, 2, {0, 0, 0});
  for (int n = 0; n < 200; ++n) lat.step(st, in, {});
  const double bound = (p.j0 * 1.0 + p.i0) / p.alpha_x;
  for (double x : st.x) {
    CHECK(std::abs(x) <= bound);
    CHECK(x == doctest::Approx(st.x[0]).epsilon(1e-12));
  }
  CHECK(p.gx(st.x[0]) == 0.0);
}

TEST_CASE("spectral and direct lateral sums agree with a brute-force sum") {
  const int w = 16, h = 12, scales = 2;
  auto k = std::make_shared<CouplingKernels>(KernelParams{}, scales, w, h);
  LatticeParams ps = quiet(Integrator::kSplitRk4);
  LatticeParams pd = ps;
  pd.lateral = LateralMethod::kDirect;
  const Lattice spectral(k, ps), direct(k, pd);
  const std::size_t n = static_cast<std::size_t>(w) * h, total = n * 3 * scales;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> gx(total);
  for (double& v : gx) v = u(rng);
  std::vector<double> e1(total), i1(total), e2(total), i2(total);
  spectral.lateral(gx.data(), e1.data(), i1.data());
  direct.lateral(gx.data(), e2.data(), i2.data());

  auto wrap = [](int d, int size) {
    d %= size;
    if (2 * d >= size) d -= size;
    if (2 * d < -size) d += size;
    return d;
  };
  double max_err = 0.0;
  for (int s = 1; s <= scales; ++s)
    for (Orientation a : kOrientations)
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          double exc = 0.0, inh = 0.0;
          for (int s2 = 1; s2 <= scales; ++s2)
            for (Orientation b : kOrientations)
              for (int y2 = 0; y2 < h; ++y2)
                for (int x2 = 0; x2 < w; ++x2) {
                  const int dx = wrap(x2 - x, w), dy = wrap(y2 - y, h);
                  const double g = gx[LatticeState::plane_index(s2, b) * n + static_cast<std::size_t>(y2) * w + x2];
                  exc += k->J(dx, dy, s, a, s2, b) * g;
                  inh += k->W(dx, dy, s, a, s2, b) * g;
                }
          const std::size_t i = LatticeState::plane_index(s, a) * n + static_cast<std::size_t>(y) * w + x;
          max_err = std::max({max_err, std::abs(e2[i] - exc), std::abs(i2[i] - inh), std::abs(e1[i] - exc),
                              std::abs(i1[i] - inh)});
        }
  CHECK(max_err < 1e-12);
}

TEST_CASE("silent planes contribute nothing") {
  auto k = std::make_shared<CouplingKernels>(KernelParams{}, 3, 16, 16);
  const Lattice lat(k, quiet(Integrator::kSplitRk4));
  const std::size_t total = 16 * 16 * 9;
  std::vector<double> gx(total, 0.0), e(total, 1.0), i(total, 1.0);
  lat.lateral(gx.data(), e.data(), i.data());
  for (std::size_t q = 0; q < total; ++q) {
    CHECK(e[q] == 0.0);
    CHECK(i[q] == 0.0);
  }
}

TEST_CASE("divergence is reported") {
  LatticeParams p = quiet(Integrator::kEuler);
  p.dt = 1e3;
  p.t_total = 1e5;
  p.avg_start = 0.0;
  auto k = std::make_shared<CouplingKernels>(KernelParams{}, 1, 4, 4);
  const Lattice lat(k, p);
  LatticeState st(4, 4, 1);
  const LatticeInput in = constant_input(4, 4, 1, {3, 3, 3});
  CHECK_THROWS_AS(
      [&]() -> void {
        for (int n = 0; n < 200; ++n) lat.step(st, in, {});
      }(),
      DivergenceError);
}

TEST_CASE("parameter validation") {
  LatticeParams p;
  p.dt = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = LatticeParams{};
  p.avg_start = 10.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  CHECK(LatticeParams{}.steps() == 100);
  CHECK(parse_integrator("split_rk4") == Integrator::kSplitRk4);
  CHECK_THROWS_AS(parse_integrator("midpoint"), ValidationError);
}

TEST_CASE("noise source") {
  NoiseSource a(5, 0.1), b(5, 0.1), z(5, 0.0);
  std::vector<double> va(1000), vb(1000), vz(1000, 1.0);
  a.fill(va);
  b.fill(vb);
  z.fill(vz);
  CHECK(va == vb);
  for (double v : vz) CHECK(v == 0.0);
  double m = 0.0, s2 = 0.0;
  for (double v : va) {
    m += v;
    s2 += v * v;
  }
  m /= 1000.0;
  CHECK(std::abs(m) < 0.02);
  CHECK(std::sqrt(s2 / 1000.0 - m * m) == doctest::Approx(0.1).epsilon(0.1));
  CHECK(channel_seed(1, Channel::kL) != channel_seed(1, Channel::kRg));
}

TEST_CASE("channel simulation: polarity swap and determinism") {
  const int w = 16, h = 16, scales = 2;
  auto k = std::make_shared<CouplingKernels>(KernelParams{}, scales, w, h);
  LatticeParams p;
  p.t_total = 3.0;
  p.avg_start = 1.0;
  const LatticeInput a = random_input(w, h, scales, 1, 3.0);
  const LatticeInput b = random_input(w, h, scales, 2, 3.0);
  const auto r1 = simulate_channel(a, b, k, p, Channel::kL);
  const auto r2 = simulate_channel(b, a, k, p, Channel::kL);
  const auto r3 = simulate_channel(a, b, k, p, Channel::kL);
  CHECK(conspicuity(r1) == conspicuity(r2));
  CHECK(r1.mean_rate_on == r3.mean_rate_on);
  CHECK(r1.mean_rate_on == r2.mean_rate_off);
  double active = 0.0;
  for (double v : conspicuity(r1)) active = std::max(active, v);
  CHECK(active > 0.0);
  CHECK(active <= 2.0);

  int calls = 0;
  simulate_channel(a, b, k, p, Channel::kL, [&](double, const LatticeState&, int) { ++calls; });
  CHECK(calls == 2 * p.steps());
}

TEST_CASE("sub-threshold channels are skipped without changing the result") {
  const int w = 16, h = 16, scales = 2;
  auto k = std::make_shared<CouplingKernels>(KernelParams{}, scales, w, h);
  LatticeParams p;
  p.t_total = 4.0;
  p.avg_start = 1.0;
  p.noise_sd = 0.5;
  const LatticeInput weak = random_input(w, h, scales, 3, 0.1);  // max + i0 below threshold
  const LatticeInput strong = random_input(w, h, scales, 4, 3.0);
  auto noop = [](double, const LatticeState&, int) {};

  const auto skipped = simulate_channel(weak, weak, k, p, Channel::kRg);
  const auto full = simulate_channel(weak, weak, k, p, Channel::kRg, noop);
  CHECK(skipped.mean_rate_on == full.mean_rate_on);
  CHECK(skipped.mean_rate_off == full.mean_rate_off);
  for (double v : full.mean_rate_on) CHECK(v == 0.0);

  const auto mixed = simulate_channel(strong, weak, k, p, Channel::kL);
  const auto mixed_full = simulate_channel(strong, weak, k, p, Channel::kL, noop);
  CHECK(mixed.mean_rate_on == mixed_full.mean_rate_on);
  CHECK(mixed.mean_rate_off == mixed_full.mean_rate_off);
}

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

#include <cmath>
#include <random>
#include <vector>

#include "v1sal/lattice.hpp"
#include "v1sal/simd/kernels.hpp"

using namespace v1sal;

namespace {

std::vector<double> random_vec(std::size_t n, unsigned seed, double lo = -2.0, double hi = 3.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("dispatch") {
  const auto& k = simd::kernels();
  CHECK(!k.name.empty());
  CHECK(simd::scalar_kernels().name == "scalar");
}

TEST_CASE("vector kernels match the scalar reference") {
  const simd::KernelTable* avx = simd::avx2_kernels();
  if (!avx) {
    MESSAGE("AVX2 unavailable; only the scalar path is exercised");
    return;
  }
  const simd::KernelTable& ref = simd::scalar_kernels();
  // Odd lengths exercise the scalar tails.
  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 131u}) {
    const auto x = random_vec(n, 1), y = random_vec(n, 2);

    const simd::PiecewiseLinear profiles[] = {LatticeParams{}.gx, LatticeParams{}.gy, {0.5, 2.0, 1.0, 0.5, 3.0}};
    for (const auto& f : profiles) {
      std::vector<double> a(n), b(n);
      ref.activate(x.data(), a.data(), n, f);
      avx->activate(x.data(), b.data(), n, f);
      CHECK(max_diff(a, b) < 1e-14);
    }

    auto a = y, b = y;
    ref.axpy(0.37, x.data(), a.data(), n);
    avx->axpy(0.37, x.data(), b.data(), n);
    CHECK(max_diff(a, b) < 1e-14);

    std::vector<double> c(n), d(n);
    ref.xpay(x.data(), -1.3, y.data(), c.data(), n);
    avx->xpay(x.data(), -1.3, y.data(), d.data(), n);
    CHECK(max_diff(c, d) < 1e-14);

    const auto kern = random_vec(n, 3);
    const auto src = random_vec(2 * n, 4);
    auto acc1 = random_vec(2 * n, 5), acc2 = acc1;
    ref.spectral_mac(acc1.data(), kern.data(), src.data(), n);
    avx->spectral_mac(acc2.data(), kern.data(), src.data(), n);
    CHECK(max_diff(acc1, acc2) < 1e-14);
  }
}

TEST_CASE("vector convolutions match the scalar reference") {
  const simd::KernelTable* avx = simd::avx2_kernels();
  if (!avx) return;
  const simd::KernelTable& ref = simd::scalar_kernels();
  const std::vector<double> taps{0.0625, 0.25, 0.375, 0.25, 0.0625};
  for (auto [w, h] : {std::pair{5, 3}, std::pair{13, 9}, std::pair{64, 17}}) {
    const auto src = random_vec(static_cast<std::size_t>(w) * h, 9);
    for (Boundary bnd : {Boundary::kMirror, Boundary::kPeriodic})
      for (int dil : {1, 2, 8}) {
        std::vector<double> a(src.size()), b(src.size());
        ref.conv_rows(src.data(), a.data(), w, h, taps.data(), 5, dil, bnd);
        avx->conv_rows(src.data(), b.data(), w, h, taps.data(), 5, dil, bnd);
        CHECK(max_diff(a, b) < 1e-14);
        ref.conv_cols(src.data(), a.data(), w, h, taps.data(), 5, dil, bnd);
        avx->conv_cols(src.data(), b.data(), w, h, taps.data(), 5, dil, bnd);
        CHECK(max_diff(a, b) < 1e-14);
      }
  }
}

TEST_CASE("vector right-hand side and fused stage match the scalar reference") {
  const simd::KernelTable* avx = simd::avx2_kernels();
  if (!avx) return;
  const simd::KernelTable& ref = simd::scalar_kernels();
  const std::size_t n = 37;
  const auto x = random_vec(n, 11), y = random_vec(n, 12), gx = random_vec(n, 13, 0, 1), gy = random_vec(n, 14, 0, 2);
  const auto n1 = random_vec(n, 15, 0, 2), n2 = random_vec(n, 16, 0, 2), exc = random_vec(n, 17, 0, 1);
  const auto inh = random_vec(n, 18, 0, 1), in = random_vec(n, 19, 0, 4), noise = random_vec(n, 20, -0.3, 0.3);
  simd::RhsArgs a;
  a.x = x.data();
  a.y = y.data();
  a.gx = gx.data();
  a.gy = gy.data();
  a.neighbor_gy[0] = n1.data();
  a.neighbor_gy[1] = n2.data();
  a.neighbor_weight[0] = 0.8;
  a.neighbor_weight[1] = 0.5;
  a.neighbors = 2;
  a.exc = exc.data();
  a.inh = inh.data();
  a.input = in.data();
  a.noise = noise.data();
  a.j0 = 0.8;
  a.i0 = 0.85;
  a.ic = 1.0;
  std::vector<double> dx1(n), dy1(n), dx2(n), dy2(n);
  a.dx = dx1.data();
  a.dy = dy1.data();
  ref.hypercolumn_rhs(a, n);
  a.dx = dx2.data();
  a.dy = dy2.data();
  avx->hypercolumn_rhs(a, n);
  CHECK(max_diff(dx1, dx2) < 1e-13);
  CHECK(max_diff(dy1, dy2) < 1e-13);

  // Optional inputs may be absent.
  simd::RhsArgs bare = a;
  bare.exc = bare.inh = bare.input = bare.noise = nullptr;
  bare.neighbors = 0;
  bare.dx = dx1.data();
  bare.dy = dy1.data();
  ref.hypercolumn_rhs(bare, n);
  bare.dx = dx2.data();
  bare.dy = dy2.data();
  avx->hypercolumn_rhs(bare, n);
  CHECK(max_diff(dx1, dx2) < 1e-13);

  for (bool last : {false, true}) {
    auto ax1 = random_vec(n, 30), ay1 = random_vec(n, 31), ax2 = ax1, ay2 = ay1;
    std::vector<double> nx1(n), ny1(n), nx2(n), ny2(n);
    simd::Rk4Stage st{x.data(), y.data(), ax1.data(), ay1.data(), last ? nullptr : nx1.data(),
                      last ? nullptr : ny1.data(), 0.1 / 3, 0.05};
    ref.rk4_stage(a, st, n);
    st.acc_x = ax2.data();
    st.acc_y = ay2.data();
    st.next_x = last ? nullptr : nx2.data();
    st.next_y = last ? nullptr : ny2.data();
    avx->rk4_stage(a, st, n);
    CHECK(max_diff(ax1, ax2) < 1e-13);
    CHECK(max_diff(ay1, ay2) < 1e-13);
    CHECK(max_diff(nx1, nx2) < 1e-13);
    CHECK(max_diff(ny1, ny2) < 1e-13);
  }
}

TEST_CASE("lattice trajectories agree across kernel tables") {
  const simd::KernelTable* avx = simd::avx2_kernels();
  if (!avx) return;
  auto k = std::make_shared<CouplingKernels>(KernelParams{}, 2, 16, 16);
  LatticeParams p;
  const Lattice a(k, p, simd::scalar_kernels()), b(k, p, *avx);
  LatticeState sa(16, 16, 2), sb(16, 16, 2);
  LatticeInput in{16, 16, 2, random_vec(16 * 16 * 6, 40, 0.0, 3.0)};
  const auto noise = random_vec(16 * 16 * 6, 41, -0.1, 0.1);
  for (int n = 0; n < 30; ++n) {
    a.step(sa, in, noise);
    b.step(sb, in, noise);
  }
  CHECK(max_diff(sa.x, sb.x) < 1e-9);
  CHECK(max_diff(sa.y, sb.y) < 1e-9);
}

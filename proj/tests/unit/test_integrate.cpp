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

#include "v1sal/error.hpp"
#include "v1sal/integrate.hpp"

using namespace v1sal;

namespace {

Plane random_plane(int w, int h, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Plane p(w, h);
  for (double& v : p.values()) v = u(rng);
  return p;
}

std::vector<Plane> planes(int count, int w, int h, unsigned seed) {
  std::vector<Plane> out;
  for (int i = 0; i < count; ++i) out.push_back(random_plane(w, h, seed + i, 0.0, 1.0));
  return out;
}

}  // namespace

TEST_CASE("inverse fusion sums planes and residual") {
  const Plane res = random_plane(6, 5, 1);
  std::vector<Plane> zero(6, Plane(6, 5));
  CHECK(fuse_inverse(zero, res) == res);
  zero[4] = random_plane(6, 5, 2);
  CHECK(max_abs_diff(fuse_inverse(zero, res), zero[4] + res) < 1e-15);
  const auto ps = planes(9, 6, 5, 3);
  Plane expect = res;
  for (const Plane& p : ps) expect += p;
  CHECK(max_abs_diff(fuse_inverse(ps, res), expect) < 1e-12);
}

TEST_CASE("max fusion") {
  const Plane res = random_plane(4, 4, 4);
  const Plane one = random_plane(4, 4, 5, 0, 1);
  const std::vector<Plane> same(3, one);
  CHECK(max_abs_diff(fuse_max(same, res), one + res) == 0.0);
  const auto ps = planes(6, 4, 4, 6);
  const Plane m = fuse_max(ps, Plane(4, 4));
  for (const Plane& p : ps)
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(m[i] >= p[i]);
  std::vector<Plane> dom = ps;
  dom[2] *= 100.0;
  CHECK(max_abs_diff(fuse_max(dom, res), dom[2] + res) == 0.0);
}

TEST_CASE("argmax fusion picks the plane holding the global maximum") {
  const Plane res = random_plane(5, 5, 7);
  auto ps = planes(6, 5, 5, 8);  // two scales x three orientations
  ps[4](2, 3) = 5.0;               // scale 2, orientation v
  std::size_t sel = 99;
  CHECK(fuse_argmax(ps, res, &sel) == ps[4] + res);
  CHECK(sel == 4);
  const std::vector<Plane> tie(4, Plane(5, 5, 1.0));
  fuse_argmax(tie, res, &sel);
  CHECK(sel == 0);
  CHECK(fuse(Fusion::kArgmax, ps, res) == ps[4] + res);
}

TEST_CASE("fusion names") {
  CHECK(parse_fusion("inverse") == Fusion::kInverse);
  CHECK(parse_fusion("max") == Fusion::kMax);
  CHECK(parse_fusion("argmax") == Fusion::kArgmax);
  CHECK_THROWS_AS(parse_fusion("mean"), ValidationError);
  CHECK(to_string(Fusion::kArgmax) == "argmax");
}

TEST_CASE("shift to nonnegative") {
  Plane p(3, 1);
  p[0] = -2.0;
  p[1] = 1.0;
  p[2] = 0.5;
  const Plane q = shift_nonnegative(p);
  CHECK(q[0] == 0.0);
  CHECK(q[1] == 3.0);
  const Plane pos(3, 1, 0.4);
  CHECK(shift_nonnegative(pos) == pos);
}

TEST_CASE("channel combination") {
  const Plane z(2, 2), four(2, 2, 4.0), one(2, 2, 1.0);
  CHECK(combine_channels(z, z, z) == z);
  CHECK(combine_channels(four, z, z)[0] == 2.0);
  CHECK(combine_channels(one, one, one)[3] == doctest::Approx(std::sqrt(3.0)));
  CHECK(combine_channels(one, one, four, ChannelCombine::kL2)[0] == doctest::Approx(std::sqrt(18.0)));
  Plane neg(2, 2, -5.0);
  CombineStats st;
  const Plane c = combine_channels(neg, one, one, ChannelCombine::kSqrtSum, &st);
  CHECK(st.clamped == 4);
  CHECK(c[0] == 0.0);
}

TEST_CASE("z-normalization") {
  const Plane p = random_plane(9, 7, 10);
  Plane q = p;
  q *= 3.5;
  for (double& v : q.values()) v -= 2.0;
  const Plane a = znorm(p), b = znorm(q);
  CHECK(max_abs_diff(a, b) < 1e-12);
  CHECK(mean(a) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(stddev(a) == doctest::Approx(1.0));
  bool degenerate = false;
  CHECK(znorm(Plane(3, 3, 2.0), &degenerate) == Plane(3, 3));
  CHECK(degenerate);
  // The location of the maximum survives.
  std::size_t ia = 0, ip = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (a[i] > a[ia]) ia = i;
    if (p[i] > p[ip]) ip = i;
  }
  CHECK(ia == ip);
}

TEST_CASE("gaussian blur") {
  const auto taps = gaussian_taps(2.0);
  REQUIRE(taps.size() == 13);
  double s = 0.0;
  for (double t : taps) s += t;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(taps[6] / taps[8] == doctest::Approx(std::exp(4.0 / 8.0)));

  Plane imp(31, 31);
  imp(15, 15) = 1.0;
  const Plane g = gaussian_blur(imp, 2.0);
  for (int y = 0; y < 31; ++y)
    for (int x = 0; x < 31; ++x) {
      const int dx = x - 15, dy = y - 15;
      const double expect = std::abs(dx) <= 6 && std::abs(dy) <= 6 ? taps[dx + 6] * taps[dy + 6] : 0.0;
      CHECK(g(x, y) == doctest::Approx(expect).epsilon(1e-12));
    }
  const Plane c(10, 8, 0.3);
  CHECK(max_abs_diff(gaussian_blur(c, 3.0), c) < 1e-15);
  bool applied = true;
  const Plane r = random_plane(5, 5, 11);
  CHECK(gaussian_blur(r, 0.3, &applied) == r);
  CHECK_FALSE(applied);
}

TEST_CASE("smoothing scale follows the viewing geometry") {
  Plane imp(41, 41);
  imp(20, 20) = 1.0;
  // 1 deg at 32 ppd, working scale 1/8 -> 4 px.
  const SaliencyMap m = smooth(imp, 1.0, 32.0, 0.125);
  CHECK(m.smoothed);
  CHECK(max_abs_diff(m.values, gaussian_blur(imp, 4.0)) < 1e-15);
}

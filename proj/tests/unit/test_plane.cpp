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
#include <limits>

#include "v1sal/plane.hpp"

using namespace v1sal;

TEST_CASE("boundary_index mirror and periodic") {
  CHECK(boundary_index(-1, 5, Boundary::kMirror) == 0);
  CHECK(boundary_index(-2, 5, Boundary::kMirror) == 1);
  CHECK(boundary_index(5, 5, Boundary::kMirror) == 4);
  CHECK(boundary_index(6, 5, Boundary::kMirror) == 3);
  CHECK(boundary_index(-1, 5, Boundary::kPeriodic) == 4);
  CHECK(boundary_index(7, 5, Boundary::kPeriodic) == 2);
  CHECK(boundary_index(-12, 5, Boundary::kPeriodic) == 3);
  // Offsets far beyond one period still land inside.
  for (int i = -40; i < 40; ++i) {
    const int m = boundary_index(i, 3, Boundary::kMirror);
    CHECK(m >= 0);
    CHECK(m < 3);
  }
}

TEST_CASE("plane statistics") {
  Plane p(2, 2);
  p(0, 0) = 1;
  p(1, 0) = 2;
  p(0, 1) = 3;
  p(1, 1) = 6;
  CHECK(sum(p) == 12);
  CHECK(mean(p) == 3);
  CHECK(min_value(p) == 1);
  CHECK(max_value(p) == 6);
  CHECK(stddev(p) == doctest::Approx(std::sqrt((4 + 1 + 0 + 9) / 4.0)));
  CHECK(all_finite(p));
  p(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(all_finite(p));
}

TEST_CASE("circular shift moves samples and wraps") {
  Plane p(4, 3);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 4; ++x) p(x, y) = 10 * y + x;
  const Plane s = circular_shift(p, 1, 2);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 4; ++x) CHECK(s((x + 1) % 4, (y + 2) % 3) == p(x, y));
  CHECK(circular_shift(s, -1, -2) == p);
}

TEST_CASE("plane arithmetic") {
  Plane a(3, 1, 2.0), b(3, 1, 0.5);
  CHECK((a + b)[1] == 2.5);
  CHECK((a - b)[2] == 1.5);
  a *= 3.0;
  CHECK(a[0] == 6.0);
  CHECK(max_abs_diff(a, Plane(3, 1, 5.0)) == 1.0);
}

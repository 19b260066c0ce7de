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

#include <span>
#include <vector>

namespace v1sal {

/// 1-based ranks; tied values share their average rank.
std::vector<double> average_ranks(std::span<const double> v);
double pearson(std::span<const double> a, std::span<const double> b);
/// Pearson correlation of the average ranks. 0 when either side is constant.
double spearman(std::span<const double> a, std::span<const double> b);

}  // namespace v1sal

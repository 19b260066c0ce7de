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

// Raw float maps: "V1SF", u32 version, u32 width, u32 height, then
// width*height little-endian float32 samples in row-major order.

#pragma once

#include <string>

#include "v1sal/plane.hpp"

namespace v1sal {

void write_float_map(const Plane& p, const std::string& path);
Plane read_float_map(const std::string& path);

}  // namespace v1sal

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

// PNG/JPEG reading and writing. Samples are doubles in [0, 1].

#pragma once

#include <string>

#include "v1sal/color.hpp"
#include "v1sal/metrics.hpp"

namespace v1sal {

/// Any format the codec library reads; grayscale inputs are replicated.
RgbImage read_rgb(const std::string& path);
Plane read_gray(const std::string& path);

void write_rgb_png(const RgbImage& img, const std::string& path);
/// Values clamped to [0, 1] and quantized to 8 bits.
void write_gray_png(const Plane& p, const std::string& path);
/// Min-max scaled to [0, 255] first; a constant plane is written as 0.
void write_display_png(const Plane& p, const std::string& path);

/// Nonzero pixels of a fixation-map image become fixations.
FixationSet fixations_from_png(const std::string& path, const std::string& image_id);

}  // namespace v1sal

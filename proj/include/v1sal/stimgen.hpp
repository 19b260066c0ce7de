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

// Parametric search displays with a marked singleton: brightness, colour,
// size and orientation contrast among 34 randomly placed items, and the
// barred-circle search asymmetry on a regular grid.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "v1sal/color.hpp"

namespace v1sal {

enum class StimulusKind { kBrightness, kColor, kSize, kOrientation, kAsymmetry };
enum class Background { kBright, kDark, kAchromatic, kSaturatedRed };
enum class TargetHue { kRed, kBlue };
enum class AsymmetryVariant { kBarAmongCircles, kCircleAmongBarred };

std::string to_string(StimulusKind k);
std::string to_string(Background b);
std::string to_string(TargetHue h);
std::string to_string(AsymmetryVariant v);
StimulusKind parse_stimulus_kind(const std::string& s);
Background parse_background(const std::string& s);
TargetHue parse_target_hue(const std::string& s);
AsymmetryVariant parse_asymmetry_variant(const std::string& s);

/// Contrast levels per kind, lowest (no contrast) first, except size, where
/// 2.5 deg matches the distractors.
const std::vector<double>& brightness_levels();   // delta lightness
const std::vector<double>& color_levels();        // delta saturation
const std::vector<double>& size_levels();         // target diameter, deg
const std::vector<double>& orientation_levels();  // delta angle, deg
const std::vector<double>& asymmetry_scales();    // item scale, deg
const std::vector<double>& levels(StimulusKind k);

/// Grid rows x columns for an asymmetry scale.
std::array<int, 2> asymmetry_grid(double scale_deg);

inline constexpr int kItemCount = 34;
inline constexpr double kItemDiameterDeg = 2.5;

struct StimulusSpec {
  StimulusKind kind = StimulusKind::kBrightness;
  double level = 0.0;
  Background background = Background::kDark;
  TargetHue hue = TargetHue::kRed;
  AsymmetryVariant variant = AsymmetryVariant::kBarAmongCircles;
  int canvas = 1024;  // square side, pixels (asymmetry grids set their own)
  double ppd = 32.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Placed glyph. Disks and rings use `size` as diameter; bars use it as
/// length. Angles in degrees, counterclockwise from horizontal.
struct Item {
  int cx = 0;
  int cy = 0;
  double size = 0.0;  // pixels
  double angle = 0.0;
  bool barred = false;
  bool target = false;
};

struct Stimulus {
  RgbImage image;
  Plane target_mask;  // 1 inside the singleton, else 0
  StimulusSpec spec;
  std::vector<Item> items;
};

/// HSL with hue in degrees; the standard hexcone model.
std::array<double, 3> hsl_to_rgb(double h, double s, double l);
std::array<double, 3> rgb_to_hsl(double r, double g, double b);

Stimulus brightness_stimulus(double delta, Background bg, std::uint64_t seed, int canvas = 1024, double ppd = 32.0);
Stimulus color_stimulus(double delta, TargetHue hue, Background bg, std::uint64_t seed, int canvas = 1024,
                        double ppd = 32.0);
Stimulus size_stimulus(double target_deg, std::uint64_t seed, int canvas = 1024, double ppd = 32.0);
Stimulus orientation_stimulus(double delta_deg, std::uint64_t seed, int canvas = 1024, double ppd = 32.0);
Stimulus asymmetry_stimulus(AsymmetryVariant v, double scale_deg, std::uint64_t seed, double ppd = 32.0);
Stimulus generate(const StimulusSpec& spec);

/// Union of the glyph footprints of the non-target items.
Plane distractor_mask(const Stimulus& s);
/// Footprint of item `index`.
Plane item_mask(const Stimulus& s, std::size_t index);
/// The same footprint as (x, y) pixel coordinates in row-major order.
std::vector<std::array<int, 2>> item_pixels(const Stimulus& s, std::size_t index);

/// Writes <stem>.png, <stem>_mask.png and <stem>.json into `dir`.
void write_stimulus(const Stimulus& s, const std::string& dir, const std::string& stem);
std::string spec_json(const Stimulus& s);

}  // namespace v1sal

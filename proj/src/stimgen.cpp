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

#include "v1sal/stimgen.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>

#include "v1sal/error.hpp"
#include "v1sal/image_io.hpp"

namespace v1sal {

namespace {

using Rgb = std::array<double, 3>;

constexpr double kGapDeg = 0.5;       // minimum free space between items and to the border
constexpr double kBarAspect = 5.0;    // bar length / width
constexpr double kGridFill = 0.75;    // glyph diameter / grid pitch
constexpr double kStrokeFrac = 0.1;   // ring and crossing-bar width / glyph diameter
constexpr int kMaxRetries = 1000;
constexpr int kSuper = 4;             // supersampling per axis

bool close_to(double a, double b) { return std::abs(a - b) < 1e-9; }

void check_level(const std::vector<double>& allowed, double v, const char* what) {
  for (double a : allowed)
    if (close_to(a, v)) return;
  throw ValidationError(std::string("unsupported ") + what + " level " + std::to_string(v));
}

Rgb gray(double l) { return {l, l, l}; }

std::mt19937_64 make_rng(std::uint64_t seed, StimulusKind kind) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(kind)};
  return std::mt19937_64(seq);
}

struct Glyph {
  enum Shape { kDisk, kBar, kRing } shape = kDisk;
  double radius = 0.0;  // bounding radius, pixels
};

Glyph glyph_of(const Item& it, StimulusKind kind) {
  if (kind == StimulusKind::kOrientation) return {Glyph::kBar, 0.5 * it.size};
  if (kind == StimulusKind::kAsymmetry) return {Glyph::kRing, 0.5 * it.size};
  return {Glyph::kDisk, 0.5 * it.size};
}

bool covers(const Item& it, StimulusKind kind, double px, double py) {
  const double dx = px - it.cx, dy = py - it.cy;
  const double r = 0.5 * it.size;
  switch (glyph_of(it, kind).shape) {
    case Glyph::kDisk: return dx * dx + dy * dy <= r * r;
    case Glyph::kBar: {
      // Image y grows downward; rotate counterclockwise on screen.
      const double a = it.angle * std::numbers::pi / 180.0;
      const double u = dx * std::cos(a) - dy * std::sin(a);
      const double v = dx * std::sin(a) + dy * std::cos(a);
      return std::abs(u) <= r && std::abs(v) <= 0.5 * it.size / kBarAspect;
    }
    case Glyph::kRing: {
      const double half = 0.5 * kStrokeFrac * it.size;
      const double d = std::sqrt(dx * dx + dy * dy);
      if (std::abs(d - (r - half)) <= half) return true;
      return it.barred && std::abs(dx) <= half && std::abs(dy) <= r;
    }
  }
  return false;
}

// Fraction of supersamples of pixel (x, y) covered by the item.
double coverage(const Item& it, StimulusKind kind, int x, int y) {
  int hits = 0;
  for (int j = 0; j < kSuper; ++j)
    for (int i = 0; i < kSuper; ++i)
      if (covers(it, kind, x + (i + 0.5) / kSuper - 0.5, y + (j + 0.5) / kSuper - 0.5)) ++hits;
  return static_cast<double>(hits) / (kSuper * kSuper);
}

template <class F>
void for_footprint(const Item& it, StimulusKind kind, int w, int h, F&& f) {
  const int reach = static_cast<int>(std::ceil(glyph_of(it, kind).radius)) + 1;
  for (int y = std::max(0, it.cy - reach); y <= std::min(h - 1, it.cy + reach); ++y)
    for (int x = std::max(0, it.cx - reach); x <= std::min(w - 1, it.cx + reach); ++x) {
      const double c = coverage(it, kind, x, y);
      if (c > 0.0) f(x, y, c);
    }
}

Stimulus render(const StimulusSpec& spec, int w, int h, const Rgb& bg, std::vector<Item> items,
                const std::function<Rgb(const Item&)>& colour) {
  Stimulus s;
  s.spec = spec;
  s.image = RgbImage(w, h);
  s.image.r = Plane(w, h, bg[0]);
  s.image.g = Plane(w, h, bg[1]);
  s.image.b = Plane(w, h, bg[2]);
  s.target_mask = Plane(w, h);
  for (const Item& it : items) {
    const Rgb fg = colour(it);
    for_footprint(it, spec.kind, w, h, [&](int x, int y, double c) {
      s.image.r(x, y) = (1.0 - c) * s.image.r(x, y) + c * fg[0];
      s.image.g(x, y) = (1.0 - c) * s.image.g(x, y) + c * fg[1];
      s.image.b(x, y) = (1.0 - c) * s.image.b(x, y) + c * fg[2];
      if (it.target && c >= 0.5) s.target_mask(x, y) = 1.0;
    });
  }
  s.items = std::move(items);
  return s;
}

// Random non-overlapping placement; the target (first size) goes first.
std::vector<Item> place(const std::vector<double>& sizes, StimulusKind kind, int canvas, double ppd,
                        std::mt19937_64& rng) {
  const double gap = kGapDeg * ppd;
  std::vector<Item> items;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    Item it;
    it.size = sizes[k];
    it.target = k == 0;
    const double r = glyph_of(it, kind).radius;
    const int lo = static_cast<int>(std::ceil(r + gap));
    const int hi = canvas - 1 - lo;
    if (hi < lo) throw ValidationError("canvas too small for the items");
    std::uniform_int_distribution<int> pos(lo, hi);
    bool placed = false;
    for (int attempt = 0; attempt < kMaxRetries && !placed; ++attempt) {
      it.cx = pos(rng);
      it.cy = pos(rng);
      placed = std::all_of(items.begin(), items.end(), [&](const Item& o) {
        const double need = r + glyph_of(o, kind).radius + gap;
        const double dx = it.cx - o.cx, dy = it.cy - o.cy;
        return dx * dx + dy * dy > need * need;
      });
    }
    if (!placed) {
      throw ValidationError("item placement failed after " + std::to_string(kMaxRetries) + " retries (item " +
                            std::to_string(k) + " of " + std::to_string(sizes.size()) + ")");
    }
    items.push_back(it);
  }
  return items;
}

StimulusSpec base_spec(StimulusKind kind, double level, std::uint64_t seed, int canvas, double ppd) {
  StimulusSpec s;
  s.kind = kind;
  s.level = level;
  s.seed = seed;
  s.canvas = canvas;
  s.ppd = ppd;
  return s;
}

}  // namespace

std::string to_string(StimulusKind k) {
  switch (k) {
    case StimulusKind::kBrightness: return "brightness";
    case StimulusKind::kColor: return "color";
    case StimulusKind::kSize: return "size";
    case StimulusKind::kOrientation: return "orientation";
    case StimulusKind::kAsymmetry: return "asymmetry";
  }
  return "?";
}

std::string to_string(Background b) {
  switch (b) {
    case Background::kBright: return "bright";
    case Background::kDark: return "dark";
    case Background::kAchromatic: return "achromatic";
    case Background::kSaturatedRed: return "saturated_red";
  }
  return "?";
}

std::string to_string(TargetHue h) { return h == TargetHue::kRed ? "red" : "blue"; }

std::string to_string(AsymmetryVariant v) {
  return v == AsymmetryVariant::kBarAmongCircles ? "bar_among_circles" : "circle_among_barred";
}

StimulusKind parse_stimulus_kind(const std::string& s) {
  for (auto k : {StimulusKind::kBrightness, StimulusKind::kColor, StimulusKind::kSize, StimulusKind::kOrientation,
                 StimulusKind::kAsymmetry})
    if (to_string(k) == s) return k;
  throw ValidationError("unknown stimulus kind '" + s + "'");
}

Background parse_background(const std::string& s) {
  for (auto b : {Background::kBright, Background::kDark, Background::kAchromatic, Background::kSaturatedRed})
    if (to_string(b) == s) return b;
  throw ValidationError("unknown background '" + s + "'");
}

TargetHue parse_target_hue(const std::string& s) {
  if (s == "red") return TargetHue::kRed;
  if (s == "blue") return TargetHue::kBlue;
  throw ValidationError("unknown target hue '" + s + "'");
}

AsymmetryVariant parse_asymmetry_variant(const std::string& s) {
  if (s == to_string(AsymmetryVariant::kBarAmongCircles)) return AsymmetryVariant::kBarAmongCircles;
  if (s == to_string(AsymmetryVariant::kCircleAmongBarred)) return AsymmetryVariant::kCircleAmongBarred;
  throw ValidationError("unknown asymmetry variant '" + s + "'");
}

const std::vector<double>& brightness_levels() {
  static const std::vector<double> v{0.0, 0.08, 0.17, 0.25, 0.33, 0.41, 0.5};
  return v;
}
const std::vector<double>& color_levels() {
  static const std::vector<double> v{0.0, 0.121, 0.246, 0.368, 0.528, 0.728, 1.0};
  return v;
}
const std::vector<double>& size_levels() {
  static const std::vector<double> v{1.25, 1.67, 2.08, 2.5, 3.34, 4.17, 5.0};
  return v;
}
const std::vector<double>& orientation_levels() {
  static const std::vector<double> v{0.0, 10.0, 20.0, 30.0, 42.0, 56.0, 90.0};
  return v;
}
const std::vector<double>& asymmetry_scales() {
  static const std::vector<double> v{1.25, 1.67, 2.08, 2.5, 3.33, 4.17, 5.0};
  return v;
}

const std::vector<double>& levels(StimulusKind k) {
  switch (k) {
    case StimulusKind::kBrightness: return brightness_levels();
    case StimulusKind::kColor: return color_levels();
    case StimulusKind::kSize: return size_levels();
    case StimulusKind::kOrientation: return orientation_levels();
    case StimulusKind::kAsymmetry: return asymmetry_scales();
  }
  throw ValidationError("unknown stimulus kind");
}

std::array<int, 2> asymmetry_grid(double scale_deg) {
  static const std::array<std::array<int, 2>, 7> grids{
      {{20, 26}, {15, 20}, {12, 16}, {10, 13}, {8, 10}, {6, 8}, {5, 7}}};
  const auto& s = asymmetry_scales();
  for (std::size_t i = 0; i < s.size(); ++i)
    if (close_to(s[i], scale_deg)) return grids[i];
  throw ValidationError("unsupported asymmetry scale " + std::to_string(scale_deg));
}

void StimulusSpec::validate() const {
  if (!(ppd > 0.0)) throw ValidationError("ppd must be positive");
  if (kind != StimulusKind::kAsymmetry && canvas < 16) throw ValidationError("canvas too small");
  switch (kind) {
    case StimulusKind::kBrightness:
      check_level(brightness_levels(), level, "brightness");
      if (background != Background::kBright && background != Background::kDark) {
        throw ValidationError("brightness stimuli need a bright or dark background");
      }
      break;
    case StimulusKind::kColor:
      check_level(color_levels(), level, "color");
      if (background != Background::kAchromatic && background != Background::kSaturatedRed) {
        throw ValidationError("color stimuli need an achromatic or saturated_red background");
      }
      break;
    case StimulusKind::kSize: check_level(size_levels(), level, "size"); break;
    case StimulusKind::kOrientation: check_level(orientation_levels(), level, "orientation"); break;
    case StimulusKind::kAsymmetry: check_level(asymmetry_scales(), level, "asymmetry scale"); break;
  }
}

std::array<double, 3> hsl_to_rgb(double h, double s, double l) {
  h = std::fmod(std::fmod(h, 360.0) + 360.0, 360.0);
  const double c = (1.0 - std::abs(2.0 * l - 1.0)) * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = c, g = x; break;
    case 1: r = x, g = c; break;
    case 2: g = c, b = x; break;
    case 3: g = x, b = c; break;
    case 4: r = x, b = c; break;
    default: r = c, b = x; break;
  }
  const double m = l - 0.5 * c;
  return {r + m, g + m, b + m};
}

std::array<double, 3> rgb_to_hsl(double r, double g, double b) {
  const double hi = std::max({r, g, b}), lo = std::min({r, g, b});
  const double l = 0.5 * (hi + lo);
  const double c = hi - lo;
  if (c == 0.0) return {0.0, 0.0, l};
  const double s = c / (1.0 - std::abs(2.0 * l - 1.0));
  double h = 0.0;
  if (hi == r) {
    h = 60.0 * std::fmod((g - b) / c + 6.0, 6.0);
  } else if (hi == g) {
    h = 60.0 * ((b - r) / c + 2.0);
  } else {
    h = 60.0 * ((r - g) / c + 4.0);
  }
  return {h, s, l};
}

Stimulus brightness_stimulus(double delta, Background bg, std::uint64_t seed, int canvas, double ppd) {
  StimulusSpec spec = base_spec(StimulusKind::kBrightness, delta, seed, canvas, ppd);
  spec.background = bg;
  spec.validate();
  auto rng = make_rng(seed, spec.kind);
  const double d = kItemDiameterDeg * ppd;
  auto items = place(std::vector<double>(kItemCount, d), spec.kind, canvas, ppd, rng);
  const bool bright = bg == Background::kBright;
  const double lb = bright ? 1.0 : 0.0;
  const double ld = bright ? 0.5 + delta : 0.5 - delta;
  return render(spec, canvas, canvas, gray(lb), std::move(items),
                [&](const Item& it) { return gray(it.target ? 0.5 : ld); });
}

Stimulus color_stimulus(double delta, TargetHue hue, Background bg, std::uint64_t seed, int canvas, double ppd) {
  StimulusSpec spec = base_spec(StimulusKind::kColor, delta, seed, canvas, ppd);
  spec.background = bg;
  spec.hue = hue;
  spec.validate();
  auto rng = make_rng(seed, spec.kind);
  const double d = kItemDiameterDeg * ppd;
  auto items = place(std::vector<double>(kItemCount, d), spec.kind, canvas, ppd, rng);
  const double h = hue == TargetHue::kRed ? 0.0 : 240.0;
  const Rgb back = bg == Background::kAchromatic ? hsl_to_rgb(0.0, 0.0, 0.75) : hsl_to_rgb(0.0, 1.0, 0.75);
  const Rgb target = hsl_to_rgb(h, 1.0, 0.5);
  const Rgb distractor = hsl_to_rgb(h, 1.0 - delta, 0.5);
  return render(spec, canvas, canvas, back, std::move(items),
                [&](const Item& it) { return it.target ? target : distractor; });
}

Stimulus size_stimulus(double target_deg, std::uint64_t seed, int canvas, double ppd) {
  StimulusSpec spec = base_spec(StimulusKind::kSize, target_deg, seed, canvas, ppd);
  spec.validate();
  auto rng = make_rng(seed, spec.kind);
  std::vector<double> sizes(kItemCount, kItemDiameterDeg * ppd);
  sizes[0] = target_deg * ppd;
  auto items = place(sizes, spec.kind, canvas, ppd, rng);
  return render(spec, canvas, canvas, gray(1.0), std::move(items), [](const Item&) { return gray(0.0); });
}

Stimulus orientation_stimulus(double delta_deg, std::uint64_t seed, int canvas, double ppd) {
  StimulusSpec spec = base_spec(StimulusKind::kOrientation, delta_deg, seed, canvas, ppd);
  spec.validate();
  auto rng = make_rng(seed, spec.kind);
  auto items = place(std::vector<double>(kItemCount, kItemDiameterDeg * ppd), spec.kind, canvas, ppd, rng);
  items[0].angle = delta_deg;
  return render(spec, canvas, canvas, gray(1.0), std::move(items), [](const Item&) { return gray(0.0); });
}

Stimulus asymmetry_stimulus(AsymmetryVariant v, double scale_deg, std::uint64_t seed, double ppd) {
  StimulusSpec spec = base_spec(StimulusKind::kAsymmetry, scale_deg, seed, 0, ppd);
  spec.variant = v;
  spec.validate();
  const auto [rows, cols] = asymmetry_grid(scale_deg);
  const double pitch = scale_deg * ppd;
  const int w = static_cast<int>(std::lround(cols * pitch));
  const int h = static_cast<int>(std::lround(rows * pitch));
  spec.canvas = std::max(w, h);
  auto rng = make_rng(seed, spec.kind);
  std::uniform_int_distribution<int> cell(0, rows * cols - 1);
  const int target = cell(rng);
  const bool target_barred = v == AsymmetryVariant::kBarAmongCircles;
  std::vector<Item> items;
  items.reserve(static_cast<std::size_t>(rows * cols));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      Item it;
      it.cx = static_cast<int>(std::lround((c + 0.5) * pitch));
      it.cy = static_cast<int>(std::lround((r + 0.5) * pitch));
      it.size = kGridFill * pitch;
      it.target = r * cols + c == target;
      it.barred = it.target ? target_barred : !target_barred;
      items.push_back(it);
    }
  return render(spec, w, h, gray(1.0), std::move(items), [](const Item&) { return gray(0.0); });
}

Stimulus generate(const StimulusSpec& spec) {
  switch (spec.kind) {
    case StimulusKind::kBrightness: return brightness_stimulus(spec.level, spec.background, spec.seed, spec.canvas, spec.ppd);
    case StimulusKind::kColor:
      return color_stimulus(spec.level, spec.hue, spec.background, spec.seed, spec.canvas, spec.ppd);
    case StimulusKind::kSize: return size_stimulus(spec.level, spec.seed, spec.canvas, spec.ppd);
    case StimulusKind::kOrientation: return orientation_stimulus(spec.level, spec.seed, spec.canvas, spec.ppd);
    case StimulusKind::kAsymmetry: return asymmetry_stimulus(spec.variant, spec.level, spec.seed, spec.ppd);
  }
  throw ValidationError("unknown stimulus kind");
}

Plane item_mask(const Stimulus& s, std::size_t index) {
  if (index >= s.items.size()) throw ValidationError("item index out of range");
  Plane m(s.image.width(), s.image.height());
  for_footprint(s.items[index], s.spec.kind, m.width(), m.height(), [&](int x, int y, double c) {
    if (c >= 0.5) m(x, y) = 1.0;
  });
  return m;
}

std::vector<std::array<int, 2>> item_pixels(const Stimulus& s, std::size_t index) {
  if (index >= s.items.size()) throw ValidationError("item index out of range");
  std::vector<std::array<int, 2>> out;
  for_footprint(s.items[index], s.spec.kind, s.image.width(), s.image.height(), [&](int x, int y, double c) {
    if (c >= 0.5) out.push_back({x, y});
  });
  return out;
}

Plane distractor_mask(const Stimulus& s) {
  Plane m(s.image.width(), s.image.height());
  for (const Item& it : s.items) {
    if (it.target) continue;
    for_footprint(it, s.spec.kind, m.width(), m.height(), [&](int x, int y, double c) {
      if (c >= 0.5) m(x, y) = 1.0;
    });
  }
  return m;
}

std::string spec_json(const Stimulus& s) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(s.spec.kind);
  j["level"] = s.spec.level;
  if (s.spec.kind == StimulusKind::kBrightness || s.spec.kind == StimulusKind::kColor) {
    j["background"] = to_string(s.spec.background);
  }
  if (s.spec.kind == StimulusKind::kColor) j["target_hue"] = to_string(s.spec.hue);
  if (s.spec.kind == StimulusKind::kAsymmetry) j["variant"] = to_string(s.spec.variant);
  j["width"] = s.image.width();
  j["height"] = s.image.height();
  j["ppd"] = s.spec.ppd;
  j["seed"] = s.spec.seed;
  j["items"] = nlohmann::ordered_json::array();
  for (const Item& it : s.items) {
    j["items"].push_back({{"cx", it.cx},
                          {"cy", it.cy},
                          {"size_px", it.size},
                          {"angle_deg", it.angle},
                          {"barred", it.barred},
                          {"target", it.target}});
  }
  return j.dump(2);
}

void write_stimulus(const Stimulus& s, const std::string& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  write_rgb_png(s.image, (base / (stem + ".png")).string());
  write_gray_png(s.target_mask, (base / (stem + "_mask.png")).string());
  std::ofstream out(base / (stem + ".json"));
  if (!out) throw IoError("cannot write stimulus sidecar in '" + dir + "'");
  out << spec_json(s) << '\n';
}

}  // namespace v1sal

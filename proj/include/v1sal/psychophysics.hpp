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

// Contrast-response experiments: saliency of a marked singleton across the
// contrast levels of a stimulus condition.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "v1sal/metrics.hpp"
#include "v1sal/pipeline.hpp"
#include "v1sal/stimgen.hpp"

namespace v1sal {

struct Condition {
  std::string name;
  StimulusKind kind = StimulusKind::kBrightness;
  Background background = Background::kDark;
  TargetHue hue = TargetHue::kRed;
  AsymmetryVariant variant = AsymmetryVariant::kBarAmongCircles;
};

/// brightness_dark, brightness_bright, color_{red,blue}_{achromatic,saturated},
/// size, orientation, asymmetry_bar, asymmetry_circle.
const std::vector<Condition>& all_conditions();
const Condition& find_condition(const std::string& name);

StimulusSpec condition_spec(const Condition& c, double level, std::uint64_t seed, int canvas, double ppd);

/// Index of the level at which target and distractors are identical, or -1.
int null_level_index(const Condition& c);

struct PsychoRow {
  std::string condition;
  std::uint64_t seed = 0;
  int level_index = 0;
  double level = 0.0;
  double in_mask = 0.0;      // mean saliency inside the target
  double out_mask = 0.0;     // mean saliency everywhere else
  double distractors = 0.0;  // mean saliency inside the other items
  /// Fraction of pixels strictly above the best in-mask value (0 = global peak).
  double peak_rank = 0.0;
  double sauc = 0.0;  // target pixels against distractor-item pixels
};

struct PsychoCurve {
  std::string condition;
  std::uint64_t seed = 0;
  double spearman = 0.0;  // level vs in_mask
};

struct PsychoReport {
  std::vector<PsychoRow> rows;
  std::vector<PsychoCurve> curves;

  void write_csv(std::ostream& os) const;
  std::string to_json() const;
};

/// Observer called after each stimulus: (row, stimulus, saliency map).
using PsychoObserver = std::function<void(const PsychoRow&, const Stimulus&, const SaliencyMap&)>;

struct PsychoOptions {
  std::vector<std::uint64_t> seeds{1, 2, 3};
  int canvas = 1024;
  int workers = 1;
  int sauc_trials = 10;
  PsychoObserver observer;
};

/// Runs every (condition, seed, level). The lattice seed follows the
/// stimulus seed so repeated seeds are independent runs.
PsychoReport run_psychophysics(const std::vector<Condition>& conditions, const PipelineConfig& cfg,
                               KernelCache& cache, const PsychoOptions& opt);

/// Row measurements for one stimulus. The sAUC negatives are the
/// footprints of the distractor items.
PsychoRow measure_stimulus(const Stimulus& s, const Plane& map, int sauc_trials);

/// Target pixels as a fixation set.
FixationSet mask_fixations(const Plane& mask, const std::string& id);

/// Runs f(i) for i in [0, n) on up to `workers` threads. The first exception
/// is rethrown after all workers stop.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& f);

}  // namespace v1sal

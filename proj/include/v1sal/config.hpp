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

// Run configuration: INI-style sections per module, overridable from the
// command line.
//
//   [model]    ppd sigma_deg fusion channel_combine max_side gamma input_gain
//   [lattice]  alpha_x alpha_y j0 i0 ic noise_sd psi_orientation psi_scale
//              y_self_sign dt t_total avg_start integrator lateral lambda
//              j_gate w_theta1_min w_exclude_low_beta
//   [run]      seed workers out write_channels trace trace_nodes
//   [dataset]  root images fixations fixation_maps masks
//   [metrics]  sigma_deg sauc_trials
//   [psychophysics] seeds canvas conditions
//   [stimgen]  set count canvas

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "v1sal/pipeline.hpp"

namespace v1sal {

struct RunConfig {
  PipelineConfig pipeline;

  std::string dataset;  // root holding images/, fixations.csv or maps/, masks/
  std::string images_dir;
  std::string fixations_csv;
  std::string fixation_maps_dir;
  std::string masks_dir;
  std::string maps_dir;  // evaluate input; defaults to <out>/maps

  std::string out = "out";
  int workers = 1;
  std::uint64_t seed = 1;
  bool write_channels = false;
  std::string trace;                  // CSV path, empty = off
  std::string trace_nodes = "center";  // center | all

  double metric_sigma_deg = 1.0;
  int sauc_trials = 10;

  std::vector<std::uint64_t> psycho_seeds{1, 2, 3};
  int canvas = 1024;
  std::vector<std::string> conditions;  // empty = all

  std::string stimgen_set = "levels";  // levels | dataset
  int stimgen_count = 10;

  /// `need_dataset` requires the dataset root and its images to exist.
  void validate(bool need_dataset) const;
  /// Canonical key=value dump of every setting.
  std::string serialize() const;
  std::string hash() const;

  std::string resolved_images_dir() const;
  std::string resolved_maps_dir() const;
};

/// Reads an INI file over the defaults. Unknown keys are rejected.
RunConfig load_config(const std::string& path);
/// Applies one "section.key = value" setting.
void set_option(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& value);

}  // namespace v1sal

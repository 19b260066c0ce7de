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

// Batch commands behind the command-line tool. Each returns a process exit
// code: 0 on success, 1 when some inputs failed but outputs were written.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "v1sal/config.hpp"
#include "v1sal/metrics.hpp"

namespace v1sal {

struct DatasetImage {
  std::string id;  // file stem
  std::string path;
};

/// Image files (png, jpg, jpeg, bmp, ppm, tif, tiff) sorted by id.
std::vector<DatasetImage> scan_images(const std::string& dir);

/// Fixations per image id from the CSV or, failing that, the binary
/// fixation-map PNGs. CSV sets carry no dimensions.
std::map<std::string, FixationSet> load_fixations(const RunConfig& cfg);

int cmd_saliency(const RunConfig& cfg);
int cmd_evaluate(const RunConfig& cfg);
int cmd_psychophysics(const RunConfig& cfg);
int cmd_ablation(const RunConfig& cfg);
int cmd_stimgen(const RunConfig& cfg);

/// Summary of an ablation run, also written to <out>/ablation.json.
struct AblationResult {
  MetricReport report;  // model_id = fusion name
  std::vector<std::string> images;
  /// Per image: the three fusion maps differ pairwise.
  std::vector<bool> distinct;
  std::size_t distinct_count() const;
};
AblationResult run_ablation(const RunConfig& cfg);

}  // namespace v1sal

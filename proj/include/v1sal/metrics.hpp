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

// Fixation-based saliency metrics.
//
// AUC is the Judd variant: thresholds are the saliency values at the fixated
// pixels, the ROC is closed with (0,0) and (1,1), and the area comes from the
// trapezoid rule. Positives are the distinct fixated pixels; negatives are
// every other pixel. Shuffled AUC replaces the negatives with the fixations of
// another image of the dataset and sweeps every positive or negative value.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "v1sal/plane.hpp"

namespace v1sal {

struct Fixation {
  int x = 0;
  int y = 0;
  friend bool operator==(const Fixation&, const Fixation&) = default;
};

struct FixationSet {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::vector<Fixation> points;

  /// Throws ValidationError for out-of-bounds points or bad dimensions.
  void validate() const;
  /// Distinct fixated pixel indices (y * width + x), ascending.
  std::vector<std::size_t> unique_indices() const;
};

/// Nonnegative plane summing to 1.
struct DensityMap {
  Plane values;
  void validate() const;
};

/// Impulses at the fixations, Gaussian-blurred (mirror boundary), renormalized.
DensityMap density_from_fixations(const FixationSet& f, double sigma_deg, double ppd);

/// Every fixation of every set, rescaled to width x height, in one density.
DensityMap pooled_density(std::span<const FixationSet> sets, int width, int height, double sigma_deg, double ppd);

/// Shift by -min when negative, then divide by the sum. A zero-sum plane
/// becomes uniform.
Plane to_distribution(const Plane& p);

/// Judd AUC from positive and negative scores.
double auc_judd(std::span<const double> positives, std::span<const double> negatives);
/// AUC with thresholds at every distinct positive or negative score.
double auc_all_thresholds(std::span<const double> positives, std::span<const double> negatives);

double auc(const Plane& sal, const FixationSet& f);

struct ShuffleOptions {
  int trials = 10;
  std::uint64_t seed = 0;
};
/// `pool` must not contain `f` itself; fixations of other images are
/// rescaled to this map's size.
double sauc(const Plane& sal, const FixationSet& f, std::span<const FixationSet> pool,
            const ShuffleOptions& opt = {});

double nss(const Plane& sal, const FixationSet& f);
double cc(const Plane& sal, const DensityMap& d);
double sim(const Plane& sal, const DensityMap& d);

inline constexpr double kMetricEpsilon = 1e-7;
double kl(const Plane& sal, const DensityMap& d, double eps = kMetricEpsilon);
double infogain(const Plane& sal, const FixationSet& f, const DensityMap& baseline, double eps = kMetricEpsilon);

inline const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{"AUC", "sAUC", "NSS", "CC", "SIM", "KL", "InfoGain"};
  return names;
}

struct MetricRow {
  std::string image_id;
  std::string model_id;
  std::map<std::string, double> values;
};

struct MetricReport {
  std::vector<MetricRow> rows;
  /// Images that could not be scored, with the reason.
  std::vector<std::pair<std::string, std::string>> exceptions;

  /// Mean of each metric over rows of `model_id` (all rows when empty).
  std::map<std::string, double> means(const std::string& model_id = {}) const;
  void write_csv(std::ostream& os) const;
  std::string to_json() const;
};

/// Reads `image_id,x,y` rows (an optional header is skipped). Dimensions are
/// left at 0 for the caller to fill.
std::map<std::string, FixationSet> read_fixations_csv(const std::string& path);

/// All seven metrics for one map. `pool` feeds sAUC.
MetricRow evaluate_map(const Plane& sal, const FixationSet& f, std::span<const FixationSet> pool,
                       const DensityMap& baseline, double sigma_deg, double ppd, const ShuffleOptions& opt);

}  // namespace v1sal

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

#include "v1sal/psychophysics.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "v1sal/error.hpp"
#include "v1sal/stats.hpp"

namespace v1sal {

const std::vector<Condition>& all_conditions() {
  using K = StimulusKind;
  using B = Background;
  using H = TargetHue;
  using V = AsymmetryVariant;
  static const std::vector<Condition> list{
      {"brightness_dark", K::kBrightness, B::kDark, H::kRed, V::kBarAmongCircles},
      {"brightness_bright", K::kBrightness, B::kBright, H::kRed, V::kBarAmongCircles},
      {"color_red_achromatic", K::kColor, B::kAchromatic, H::kRed, V::kBarAmongCircles},
      {"color_blue_achromatic", K::kColor, B::kAchromatic, H::kBlue, V::kBarAmongCircles},
      {"color_red_saturated", K::kColor, B::kSaturatedRed, H::kRed, V::kBarAmongCircles},
      {"color_blue_saturated", K::kColor, B::kSaturatedRed, H::kBlue, V::kBarAmongCircles},
      {"size", K::kSize, B::kBright, H::kRed, V::kBarAmongCircles},
      {"orientation", K::kOrientation, B::kBright, H::kRed, V::kBarAmongCircles},
      {"asymmetry_bar", K::kAsymmetry, B::kBright, H::kRed, V::kBarAmongCircles},
      {"asymmetry_circle", K::kAsymmetry, B::kBright, H::kRed, V::kCircleAmongBarred},
  };
  return list;
}

const Condition& find_condition(const std::string& name) {
  for (const Condition& c : all_conditions())
    if (c.name == name) return c;
  std::string known;
  for (const Condition& c : all_conditions()) known += (known.empty() ? "" : ", ") + c.name;
  throw ValidationError("unknown condition '" + name + "' (known: " + known + ")");
}

StimulusSpec condition_spec(const Condition& c, double level, std::uint64_t seed, int canvas, double ppd) {
  StimulusSpec s;
  s.kind = c.kind;
  s.level = level;
  s.background = c.background;
  s.hue = c.hue;
  s.variant = c.variant;
  s.canvas = canvas;
  s.ppd = ppd;
  s.seed = seed;
  return s;
}

int null_level_index(const Condition& c) {
  const auto& lv = levels(c.kind);
  for (std::size_t i = 0; i < lv.size(); ++i) {
    const double null = c.kind == StimulusKind::kSize ? kItemDiameterDeg : 0.0;
    if (c.kind != StimulusKind::kAsymmetry && std::abs(lv[i] - null) < 1e-9) return static_cast<int>(i);
  }
  return -1;
}

FixationSet mask_fixations(const Plane& mask, const std::string& id) {
  FixationSet f;
  f.image_id = id;
  f.width = mask.width();
  f.height = mask.height();
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (mask(x, y) > 0.5) f.points.push_back({x, y});
  return f;
}

PsychoRow measure_stimulus(const Stimulus& s, const Plane& map, int sauc_trials) {
  if (!map.same_shape(s.target_mask)) throw ValidationError("saliency map and stimulus differ in size");
  const Plane others = distractor_mask(s);
  double in_sum = 0.0, out_sum = 0.0, d_sum = 0.0;
  std::size_t in_n = 0, out_n = 0, d_n = 0;
  double peak = -std::numeric_limits<double>::infinity();
  const auto m = s.target_mask.values();
  const auto d = others.values();
  const auto v = map.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (m[i] > 0.5) {
      in_sum += v[i];
      ++in_n;
      peak = std::max(peak, v[i]);
    } else {
      out_sum += v[i];
      ++out_n;
    }
    if (d[i] > 0.5) {
      d_sum += v[i];
      ++d_n;
    }
  }
  if (in_n == 0) throw ValidationError("stimulus has an empty target mask");
  PsychoRow r;
  r.level = s.spec.level;
  r.seed = s.spec.seed;
  r.in_mask = in_sum / static_cast<double>(in_n);
  r.out_mask = out_n ? out_sum / static_cast<double>(out_n) : 0.0;
  r.distractors = d_n ? d_sum / static_cast<double>(d_n) : 0.0;
  const auto above = std::count_if(v.begin(), v.end(), [&](double x) { return x > peak; });
  r.peak_rank = static_cast<double>(above) / static_cast<double>(v.size());
  // Each distractor footprint is one shuffled negative set, so the score
  // compares the target with the other items rather than the background.
  std::vector<FixationSet> pool;
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    if (s.items[i].target) continue;
    FixationSet f;
    f.image_id = "item" + std::to_string(i);
    f.width = map.width();
    f.height = map.height();
    for (const auto& [x, y] : item_pixels(s, i)) f.points.push_back({x, y});
    pool.push_back(std::move(f));
  }
  if (pool.empty()) {
    r.sauc = std::numeric_limits<double>::quiet_NaN();
  } else {
    ShuffleOptions opt;
    opt.trials = sauc_trials;
    opt.seed = s.spec.seed;
    r.sauc = sauc(map, mask_fixations(s.target_mask, "target"), pool, opt);
  }
  return r;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& f) {
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (std::size_t i = next++; i < n && !stop; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          stop = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

PsychoReport run_psychophysics(const std::vector<Condition>& conditions, const PipelineConfig& cfg,
                               KernelCache& cache, const PsychoOptions& opt) {
  if (opt.seeds.empty()) throw ValidationError("psychophysics needs at least one seed");
  struct Job {
    const Condition* condition;
    std::uint64_t seed;
    int level_index;
    std::size_t group;
  };
  std::vector<Job> jobs;
  std::size_t groups = 0;
  for (const Condition& c : conditions) {
    for (std::uint64_t seed : opt.seeds) {
      for (std::size_t i = 0; i < levels(c.kind).size(); ++i) jobs.push_back({&c, seed, static_cast<int>(i), groups});
      ++groups;
    }
  }

  PsychoReport report;
  report.rows.resize(jobs.size());
  std::mutex observer_mutex;
  parallel_for(jobs.size(), opt.workers, [&](std::size_t j) {
    const Job& job = jobs[j];
    const double level = levels(job.condition->kind)[static_cast<std::size_t>(job.level_index)];
    const Stimulus s = generate(condition_spec(*job.condition, level, job.seed, opt.canvas, cfg.ppd));
    PipelineConfig run = cfg;
    run.lattice.seed = job.seed;
    const SaliencyResult res = compute_saliency(s.image, run, cache);
    PsychoRow row = measure_stimulus(s, res.map.values, opt.sauc_trials);
    row.condition = job.condition->name;
    row.level_index = job.level_index;
    report.rows[j] = row;
    if (opt.observer) {
      std::lock_guard lock(observer_mutex);
      opt.observer(row, s, res.map);
    }
  });

  for (std::size_t g = 0; g < groups; ++g) {
    std::vector<double> lv, in;
    PsychoCurve curve;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      if (jobs[j].group != g) continue;
      curve.condition = jobs[j].condition->name;
      curve.seed = jobs[j].seed;
      lv.push_back(report.rows[j].level);
      in.push_back(report.rows[j].in_mask);
    }
    curve.spearman = spearman(lv, in);
    report.curves.push_back(curve);
  }
  return report;
}

void PsychoReport::write_csv(std::ostream& os) const {
  os << "condition,seed,level_index,level,in_mask,out_mask,distractors,peak_rank,sauc\n";
  os.precision(10);
  for (const PsychoRow& r : rows) {
    os << r.condition << ',' << r.seed << ',' << r.level_index << ',' << r.level << ',' << r.in_mask << ','
       << r.out_mask << ',' << r.distractors << ',' << r.peak_rank << ',' << r.sauc << '\n';
  }
}

std::string PsychoReport::to_json() const {
  nlohmann::ordered_json j;
  j["rows"] = nlohmann::ordered_json::array();
  for (const PsychoRow& r : rows) {
    j["rows"].push_back({{"condition", r.condition},
                         {"seed", r.seed},
                         {"level_index", r.level_index},
                         {"level", r.level},
                         {"in_mask", r.in_mask},
                         {"out_mask", r.out_mask},
                         {"distractors", r.distractors},
                         {"peak_rank", r.peak_rank},
                         {"sauc", std::isfinite(r.sauc) ? nlohmann::ordered_json(r.sauc) : nlohmann::ordered_json()}});
  }
  j["spearman"] = nlohmann::ordered_json::array();
  for (const PsychoCurve& c : curves) {
    j["spearman"].push_back({{"condition", c.condition}, {"seed", c.seed}, {"rho", c.spearman}});
  }
  return j.dump(2);
}

}  // namespace v1sal

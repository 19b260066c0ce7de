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

#include "v1sal/commands.hpp"

#include "json.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>

#include "v1sal/error.hpp"
#include "v1sal/float_map.hpp"
#include "v1sal/image_io.hpp"
#include "v1sal/psychophysics.hpp"
#include "v1sal/stimgen.hpp"

namespace v1sal {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string fixations_csv_path(const RunConfig& cfg) {
  if (!cfg.fixations_csv.empty()) return cfg.fixations_csv;
  if (cfg.dataset.empty()) return {};
  const fs::path p = fs::path(cfg.dataset) / "fixations.csv";
  return fs::exists(p) ? p.string() : std::string();
}

std::string fixation_maps_path(const RunConfig& cfg) {
  if (!cfg.fixation_maps_dir.empty()) return cfg.fixation_maps_dir;
  if (cfg.dataset.empty()) return {};
  const fs::path p = fs::path(cfg.dataset) / "fixation_maps";
  return fs::is_directory(p) ? p.string() : std::string();
}

Json run_header(const RunConfig& cfg, const std::string& command) {
  Json j;
  j["command"] = command;
  j["config_hash"] = cfg.hash();
  j["config"] = cfg.serialize();
  return j;
}

// Trace rows for one lattice snapshot: t,i,s,theta,rate,channel,polarity,image.
void append_trace(std::string& buf, const RunConfig& cfg, const std::string& image, Channel c, double t,
                  const LatticeState& st, int polarity) {
  const auto& gx = cfg.pipeline.lattice.gx;
  const std::size_t n = st.nodes_per_plane();
  const bool all = cfg.trace_nodes == "all";
  const std::size_t center = static_cast<std::size_t>(st.height / 2) * st.width + st.width / 2;
  char line[256];
  for (int s = 1; s <= st.scales; ++s)
    for (Orientation o : kOrientations) {
      const std::size_t base = static_cast<std::size_t>(LatticeState::plane_index(s, o)) * n;
      const std::size_t lo = all ? 0 : center, hi = all ? n : center + 1;
      for (std::size_t i = lo; i < hi; ++i) {
        const int len = std::snprintf(line, sizeof(line), "%.4f,%zu,%d,%d,%.9g,%s,%s,%s\n", t, i, s,
                                      static_cast<int>(o), gx(st.x[base + i]), channel_name(c).data(),
                                      polarity == 0 ? "on" : "off", image.c_str());
        buf.append(line, static_cast<std::size_t>(len));
      }
    }
}

}  // namespace

std::vector<DatasetImage> scan_images(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("image directory '" + dir + "' does not exist");
  static const std::set<std::string> exts{".png", ".jpg", ".jpeg", ".bmp", ".ppm", ".tif", ".tiff"};
  std::vector<DatasetImage> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (!exts.count(ext)) continue;
    const std::string stem = e.path().stem().string();
    if (stem.size() > 5 && stem.compare(stem.size() - 5, 5, "_mask") == 0) continue;
    out.push_back({stem, e.path().string()});
  }
  std::sort(out.begin(), out.end(), [](const DatasetImage& a, const DatasetImage& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].id == out[i - 1].id) throw ValidationError("two images share the id '" + out[i].id + "'");
  return out;
}

std::map<std::string, FixationSet> load_fixations(const RunConfig& cfg) {
  const std::string csv = fixations_csv_path(cfg);
  if (!csv.empty()) return read_fixations_csv(csv);
  const std::string maps = fixation_maps_path(cfg);
  if (maps.empty()) throw ValidationError("no fixations: give fixations.csv or a fixation_maps directory");
  std::map<std::string, FixationSet> out;
  for (const DatasetImage& im : scan_images(maps)) out[im.id] = fixations_from_png(im.path, im.id);
  return out;
}

int cmd_saliency(const RunConfig& cfg) {
  cfg.validate(true);
  const auto images = scan_images(cfg.resolved_images_dir());
  if (images.empty()) throw ValidationError("no images found in '" + cfg.resolved_images_dir() + "'");
  const fs::path maps = cfg.resolved_maps_dir();
  fs::create_directories(maps);
  if (cfg.write_channels) fs::create_directories(fs::path(cfg.out) / "channels");
  spdlog::info("saliency: {} images, {} workers, config {}", images.size(), cfg.workers, cfg.hash());

  KernelCache cache(cfg.pipeline.kernels);
  struct Outcome {
    bool ok = false;
    std::string error;
    double seconds = 0.0;
    bool degenerate = false;
    std::size_t clamped = 0;
    std::string trace;
  };
  std::vector<Outcome> outcomes(images.size());
  const auto t0 = std::chrono::steady_clock::now();
  parallel_for(images.size(), cfg.workers, [&](std::size_t i) {
    const DatasetImage& im = images[i];
    Outcome& o = outcomes[i];
    const auto start = std::chrono::steady_clock::now();
    try {
      const RgbImage img = read_rgb(im.path);
      ChannelTraceFn trace;
      if (!cfg.trace.empty()) {
        trace = [&](Channel c, double t, const LatticeState& st, int pol) {
          append_trace(o.trace, cfg, im.id, c, t, st, pol);
        };
      }
      const SaliencyResult r = compute_saliency(img, cfg.pipeline, cache, trace);
      write_float_map(r.map.values, (maps / (im.id + ".f32")).string());
      write_display_png(r.map.values, (maps / (im.id + ".png")).string());
      if (cfg.write_channels) {
        for (Channel c : kChannels) {
          const fs::path p = fs::path(cfg.out) / "channels" / (im.id + "_" + std::string(channel_name(c)) + ".f32");
          write_float_map(r.channel_maps[static_cast<std::size_t>(c)], p.string());
        }
      }
      o.ok = true;
      o.degenerate = r.degenerate;
      o.clamped = r.clamped;
    } catch (const std::exception& e) {
      o.error = e.what();
      spdlog::error("{}: {}", im.id, e.what());
    }
    o.seconds = seconds_since(start);
    spdlog::info("{}: {} in {:.2f} s", im.id, o.ok ? "done" : "failed", o.seconds);
  });

  if (!cfg.trace.empty()) {
    std::string all = "t,i,s,theta,rate,channel,polarity,image\n";
    for (const Outcome& o : outcomes) all += o.trace;
    write_text(cfg.trace, all);
  }
  Json log = run_header(cfg, "saliency");
  log["images"] = Json::array();
  std::size_t failed = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const Outcome& o = outcomes[i];
    Json e{{"id", images[i].id}, {"ok", o.ok}, {"seconds", o.seconds}};
    if (o.ok) {
      e["degenerate"] = o.degenerate;
      e["clamped_pixels"] = o.clamped;
    } else {
      e["error"] = o.error;
      ++failed;
    }
    log["images"].push_back(e);
  }
  log["total_seconds"] = seconds_since(t0);
  write_text(fs::path(cfg.out) / "run.json", log.dump(2) + "\n");
  spdlog::info("saliency: {} ok, {} failed", images.size() - failed, failed);
  if (failed == images.size()) return 2;
  return failed ? 1 : 0;
}

namespace {

// Scores every map in `maps` (image id -> map) and records missing ones.
MetricReport score_maps(const RunConfig& cfg, const std::vector<std::string>& ids,
                        const std::function<const Plane*(const std::string&)>& map_of, const std::string& model,
                        std::map<std::string, FixationSet>& fixations) {
  MetricReport report;
  std::vector<std::string> usable;
  for (const std::string& id : ids) {
    auto it = fixations.find(id);
    const Plane* m = map_of(id);
    if (it == fixations.end()) {
      report.exceptions.push_back({id, "no fixations"});
      continue;
    }
    if (!m) {
      report.exceptions.push_back({id, "no saliency map"});
      continue;
    }
    FixationSet& f = it->second;
    if (f.width == 0) {
      f.width = m->width();
      f.height = m->height();
    }
    try {
      f.validate();
    } catch (const std::exception& e) {
      report.exceptions.push_back({id, e.what()});
      continue;
    }
    usable.push_back(id);
  }
  std::vector<FixationSet> all;
  for (const std::string& id : usable) all.push_back(fixations.at(id));
  const double ppd = cfg.pipeline.ppd;
  for (std::size_t i = 0; i < usable.size(); ++i) {
    const std::string& id = usable[i];
    const Plane& m = *map_of(id);
    std::vector<FixationSet> pool;
    for (std::size_t k = 0; k < all.size(); ++k)
      if (k != i) pool.push_back(all[k]);
    try {
      if (pool.empty()) throw ValidationError("shuffled metrics need at least two images");
      const DensityMap baseline = pooled_density(pool, m.width(), m.height(), cfg.metric_sigma_deg, ppd);
      ShuffleOptions opt;
      opt.trials = cfg.sauc_trials;
      opt.seed = cfg.seed;
      MetricRow row = evaluate_map(m, all[i], pool, baseline, cfg.metric_sigma_deg, ppd, opt);
      row.model_id = model;
      report.rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      report.exceptions.push_back({id, e.what()});
    }
  }
  return report;
}

void write_report(const MetricReport& r, const fs::path& dir, const std::string& stem) {
  std::ostringstream csv;
  r.write_csv(csv);
  write_text(dir / (stem + ".csv"), csv.str());
  write_text(dir / (stem + ".json"), r.to_json() + "\n");
}

}  // namespace

int cmd_evaluate(const RunConfig& cfg) {
  cfg.validate(false);
  auto fixations = load_fixations(cfg);
  const fs::path maps = cfg.resolved_maps_dir();
  if (!fs::is_directory(maps)) throw ValidationError("map directory '" + maps.string() + "' does not exist");
  std::vector<std::string> ids;
  std::set<std::string> seen;
  if (!cfg.dataset.empty() || !cfg.images_dir.empty()) {
    for (const DatasetImage& im : scan_images(cfg.resolved_images_dir())) ids.push_back(im.id);
  } else {
    for (const auto& [id, f] : fixations) ids.push_back(id);
  }
  std::map<std::string, Plane> loaded;
  for (const std::string& id : ids) {
    const fs::path p = maps / (id + ".f32");
    if (!fs::exists(p)) continue;
    try {
      loaded[id] = read_float_map(p.string());
    } catch (const std::exception& e) {
      spdlog::error("{}: {}", id, e.what());
    }
  }
  const std::string model = "v1sal-" + to_string(cfg.pipeline.fusion);
  MetricReport report = score_maps(
      cfg, ids, [&](const std::string& id) -> const Plane* {
        auto it = loaded.find(id);
        return it == loaded.end() ? nullptr : &it->second;
      },
      model, fixations);
  write_report(report, cfg.out, "report");
  for (const auto& [id, why] : report.exceptions) spdlog::warn("{}: skipped ({})", id, why);
  for (const auto& [name, v] : report.means()) spdlog::info("{} = {:.4f}", name, v);
  if (report.rows.empty()) return 2;
  return report.exceptions.empty() ? 0 : 1;
}

int cmd_psychophysics(const RunConfig& cfg) {
  cfg.validate(false);
  std::vector<Condition> conds;
  if (cfg.conditions.empty()) {
    conds = all_conditions();
  } else {
    for (const std::string& n : cfg.conditions) conds.push_back(find_condition(n));
  }
  KernelCache cache(cfg.pipeline.kernels);
  PsychoOptions opt;
  opt.seeds = cfg.psycho_seeds;
  opt.canvas = cfg.canvas;
  opt.workers = cfg.workers;
  opt.sauc_trials = cfg.sauc_trials;
  opt.observer = [](const PsychoRow& r, const Stimulus&, const SaliencyMap&) {
    spdlog::info("{} seed {} level {}: in {:.3f} out {:.3f}", r.condition, r.seed, r.level, r.in_mask, r.out_mask);
  };
  const auto t0 = std::chrono::steady_clock::now();
  const PsychoReport rep = run_psychophysics(conds, cfg.pipeline, cache, opt);
  std::ostringstream csv;
  rep.write_csv(csv);
  write_text(fs::path(cfg.out) / "psychophysics.csv", csv.str());
  Json j = Json::parse(rep.to_json());
  j["config_hash"] = cfg.hash();
  j["seconds"] = seconds_since(t0);
  write_text(fs::path(cfg.out) / "psychophysics.json", j.dump(2) + "\n");
  for (const PsychoCurve& c : rep.curves) spdlog::info("{} seed {}: spearman {:.3f}", c.condition, c.seed, c.spearman);
  return 0;
}

std::size_t AblationResult::distinct_count() const {
  return static_cast<std::size_t>(std::count(distinct.begin(), distinct.end(), true));
}

AblationResult run_ablation(const RunConfig& cfg) {
  cfg.validate(true);
  const auto images = scan_images(cfg.resolved_images_dir());
  auto fixations = load_fixations(cfg);
  static constexpr Fusion kModes[3] = {Fusion::kInverse, Fusion::kMax, Fusion::kArgmax};
  KernelCache cache(cfg.pipeline.kernels);
  std::vector<std::array<Plane, 3>> maps(images.size());
  std::vector<std::string> errors(images.size());
  parallel_for(images.size(), cfg.workers, [&](std::size_t i) {
    try {
      const Conspicuity c = compute_conspicuity(read_rgb(images[i].path), cfg.pipeline, cache);
      for (int m = 0; m < 3; ++m) maps[i][m] = integrate_conspicuity(c, cfg.pipeline, kModes[m]).map.values;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  AblationResult out;
  for (std::size_t i = 0; i < images.size(); ++i) {
    out.images.push_back(images[i].id);
    if (!errors[i].empty()) {
      out.distinct.push_back(false);
      out.report.exceptions.push_back({images[i].id, errors[i]});
      continue;
    }
    const auto& m = maps[i];
    constexpr double kDistinct = 1e-6;
    out.distinct.push_back(max_abs_diff(m[0], m[1]) > kDistinct && max_abs_diff(m[0], m[2]) > kDistinct &&
                           max_abs_diff(m[1], m[2]) > kDistinct);
  }
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < images.size(); ++i)
    if (errors[i].empty()) ids.push_back(images[i].id);
  for (int m = 0; m < 3; ++m) {
    std::map<std::string, const Plane*> by_id;
    for (std::size_t i = 0; i < images.size(); ++i)
      if (errors[i].empty()) by_id[images[i].id] = &maps[i][m];
    auto fx = fixations;
    MetricReport r = score_maps(
        cfg, ids, [&](const std::string& id) -> const Plane* {
          auto it = by_id.find(id);
          return it == by_id.end() ? nullptr : it->second;
        },
        to_string(kModes[m]), fx);
    out.report.rows.insert(out.report.rows.end(), r.rows.begin(), r.rows.end());
    if (m == 0) out.report.exceptions.insert(out.report.exceptions.end(), r.exceptions.begin(), r.exceptions.end());
  }
  return out;
}

int cmd_ablation(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const AblationResult res = run_ablation(cfg);
  const fs::path out(cfg.out);
  write_report(res.report, out, "ablation_rows");
  std::ostringstream table;
  table << "mode,metric,value\n";
  table.precision(10);
  Json j = run_header(cfg, "ablation");
  j["table"] = Json::array();
  for (Fusion f : {Fusion::kInverse, Fusion::kMax, Fusion::kArgmax}) {
    const auto means = res.report.means(to_string(f));
    for (const std::string& name : metric_names()) {
      auto it = means.find(name);
      const double v = it == means.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
      table << to_string(f) << ',' << name << ',' << v << '\n';
      j["table"].push_back({{"mode", to_string(f)}, {"metric", name}, {"value", std::isfinite(v) ? Json(v) : Json()}});
    }
  }
  write_text(out / "ablation.csv", table.str());
  j["images"] = res.images;
  j["distinct"] = res.distinct;
  j["distinct_count"] = res.distinct_count();
  j["seconds"] = seconds_since(t0);
  write_text(out / "ablation.json", j.dump(2) + "\n");
  spdlog::info("ablation: fusion maps pairwise distinct on {} of {} images", res.distinct_count(), res.images.size());
  return res.report.exceptions.empty() ? 0 : 1;
}

int cmd_stimgen(const RunConfig& cfg) {
  cfg.validate(false);
  const fs::path out(cfg.out);
  const double ppd = cfg.pipeline.ppd;
  if (cfg.stimgen_set == "levels") {
    std::vector<Condition> conds;
    if (cfg.conditions.empty()) {
      conds = all_conditions();
    } else {
      for (const std::string& n : cfg.conditions) conds.push_back(find_condition(n));
    }
    std::size_t n = 0;
    for (const Condition& c : conds) {
      const auto& lv = levels(c.kind);
      for (std::size_t i = 0; i < lv.size(); ++i) {
        const Stimulus s = generate(condition_spec(c, lv[i], cfg.seed, cfg.canvas, ppd));
        write_stimulus(s, (out / c.name).string(), c.name + "_" + std::to_string(i));
        ++n;
      }
    }
    spdlog::info("stimgen: wrote {} stimuli under {}", n, out.string());
    return 0;
  }

  // A small scored dataset: singleton displays of mixed kinds with
  // pseudo-fixations sampled inside each target.
  static const char* kCycle[] = {"brightness_dark", "size", "orientation", "color_red_achromatic",
                                 "brightness_bright", "color_blue_saturated", "asymmetry_bar",
                                 "color_blue_achromatic", "asymmetry_circle", "color_red_saturated"};
  constexpr int kFixationsPerImage = 16;
  fs::create_directories(out / "images");
  fs::create_directories(out / "masks");
  std::string csv = "image_id,x,y\n";
  for (int i = 0; i < cfg.stimgen_count; ++i) {
    const Condition& c = find_condition(kCycle[i % 10]);
    const auto& lv = levels(c.kind);
    const std::size_t level = lv.size() - 2 - static_cast<std::size_t>(i / 10) % (lv.size() - 2);
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    const Stimulus s = generate(condition_spec(c, lv[level], seed, cfg.canvas, ppd));
    char id[32];
    std::snprintf(id, sizeof(id), "stim_%03d", i);
    write_rgb_png(s.image, (out / "images" / (std::string(id) + ".png")).string());
    write_gray_png(s.target_mask, (out / "masks" / (std::string(id) + ".png")).string());
    const FixationSet inside = mask_fixations(s.target_mask, id);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, inside.points.size() - 1);
    for (int k = 0; k < kFixationsPerImage; ++k) {
      const Fixation& p = inside.points[pick(rng)];
      csv += std::string(id) + "," + std::to_string(p.x) + "," + std::to_string(p.y) + "\n";
    }
  }
  write_text(out / "fixations.csv", csv);
  spdlog::info("stimgen: wrote a {}-image dataset under {}", cfg.stimgen_count, out.string());
  return 0;
}

}  // namespace v1sal

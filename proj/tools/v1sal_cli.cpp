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

// v1sal: saliency maps, evaluation, psychophysics, ablation and stimuli.

#include "CLI11.hpp"

#include <spdlog/spdlog.h>

#include <iostream>
#include <optional>

#include "v1sal/commands.hpp"
#include "v1sal/config.hpp"
#include "v1sal/error.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> dataset, out, fusion, trace, maps, fixations, set;
  std::optional<std::uint64_t> seed;
  std::optional<double> ppd;
  std::optional<int> workers, count, canvas;
  std::vector<std::string> conditions, seeds, options;
  bool channels = false;
  bool quiet = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "INI configuration file")->check(CLI::ExistingFile);
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--seed", f.seed, "noise and stimulus seed");
  sub->add_option("--ppd", f.ppd, "pixels per degree of visual angle");
  sub->add_option("--workers", f.workers, "parallel images")->check(CLI::PositiveNumber);
  sub->add_option("--fusion", f.fusion, "scale/orientation fusion")
      ->check(CLI::IsMember({"inverse", "max", "argmax"}));
  sub->add_option("-O,--option", f.options, "override a setting: section.key=value");
  sub->add_flag("-q,--quiet", f.quiet, "only log warnings and errors");
}

v1sal::RunConfig resolve(const Flags& f) {
  v1sal::RunConfig cfg = f.config.empty() ? v1sal::RunConfig{} : v1sal::load_config(f.config);
  for (const std::string& o : f.options) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw v1sal::ValidationError("option '" + o + "' is not section.key=value");
    }
    v1sal::set_option(cfg, o.substr(0, dot), o.substr(dot + 1, eq - dot - 1), o.substr(eq + 1));
  }
  if (f.dataset) cfg.dataset = *f.dataset;
  if (f.out) cfg.out = *f.out;
  if (f.seed) cfg.seed = cfg.pipeline.lattice.seed = *f.seed;
  if (f.ppd) cfg.pipeline.ppd = *f.ppd;
  if (f.workers) cfg.workers = *f.workers;
  if (f.fusion) cfg.pipeline.fusion = v1sal::parse_fusion(*f.fusion);
  if (f.trace) cfg.trace = *f.trace;
  if (f.maps) cfg.maps_dir = *f.maps;
  if (f.fixations) cfg.fixations_csv = *f.fixations;
  if (f.set) cfg.stimgen_set = *f.set;
  if (f.count) cfg.stimgen_count = *f.count;
  if (f.canvas) cfg.canvas = *f.canvas;
  if (f.channels) cfg.write_channels = true;
  if (!f.conditions.empty()) cfg.conditions = f.conditions;
  if (!f.seeds.empty()) {
    cfg.psycho_seeds.clear();
    for (const std::string& s : f.seeds) cfg.psycho_seeds.push_back(std::stoull(s));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neurodynamic V1 saliency model"};
  app.require_subcommand(1);
  Flags f;

  auto* sal = app.add_subcommand("saliency", "compute saliency maps for a dataset");
  add_common(sal, f);
  sal->add_option("--dataset", f.dataset, "dataset root with images/")->required();
  sal->add_option("--trace", f.trace, "write per-node firing rates to this CSV");
  sal->add_flag("--channels", f.channels, "also write per-channel maps");

  auto* ev = app.add_subcommand("evaluate", "score saliency maps against fixations");
  add_common(ev, f);
  ev->add_option("--dataset", f.dataset, "dataset root with images/ and fixations");
  ev->add_option("--maps", f.maps, "directory of .f32 maps (default <out>/maps)");
  ev->add_option("--fixations", f.fixations, "fixation CSV (image_id,x,y)");

  auto* psy = app.add_subcommand("psychophysics", "contrast-response curves on synthetic displays");
  add_common(psy, f);
  psy->add_option("--conditions", f.conditions, "condition names (default all)")->delimiter(',');
  psy->add_option("--seeds", f.seeds, "stimulus seeds")->delimiter(',');
  psy->add_option("--canvas", f.canvas, "display side in pixels");

  auto* abl = app.add_subcommand("ablation", "compare fusion modes on a dataset");
  add_common(abl, f);
  abl->add_option("--dataset", f.dataset, "dataset root with images/ and fixations")->required();

  auto* gen = app.add_subcommand("stimgen", "write synthetic stimuli");
  add_common(gen, f);
  gen->add_option("--set", f.set, "levels or dataset")->check(CLI::IsMember({"levels", "dataset"}));
  gen->add_option("--count", f.count, "images in the dataset set")->check(CLI::PositiveNumber);
  gen->add_option("--conditions", f.conditions, "condition names (levels set)")->delimiter(',');
  gen->add_option("--canvas", f.canvas, "display side in pixels");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(f.quiet ? spdlog::level::warn : spdlog::level::info);

  try {
    const v1sal::RunConfig cfg = resolve(f);
    if (*sal) return v1sal::cmd_saliency(cfg);
    if (*ev) return v1sal::cmd_evaluate(cfg);
    if (*psy) return v1sal::cmd_psychophysics(cfg);
    if (*abl) return v1sal::cmd_ablation(cfg);
    if (*gen) return v1sal::cmd_stimgen(cfg);
  } catch (const v1sal::ValidationError& e) {
    spdlog::error("invalid input: {}", e.what());
    return 3;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 4;
  }
  return 0;
}

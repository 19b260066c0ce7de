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

#include "v1sal/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <sstream>

#include "v1sal/error.hpp"

namespace v1sal {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ValidationError("option " + key + ": expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ValidationError("option " + key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError("option " + key + ": expected a boolean, got '" + v + "'");
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

void set_option(RunConfig& c, const std::string& section, const std::string& key_in, const std::string& raw) {
  const std::string key = trim(key_in);
  const std::string v = trim(raw);
  const std::string full = section + "." + key;
  PipelineConfig& p = c.pipeline;
  LatticeParams& l = p.lattice;
  auto num = [&] { return to_double(full, v); };

  if (section == "model") {
    if (key == "ppd") return void(p.ppd = num());
    if (key == "sigma_deg") return void(p.sigma_deg = num());
    if (key == "fusion") return void(p.fusion = parse_fusion(v));
    if (key == "channel_combine") return void(p.combine = parse_channel_combine(v));
    if (key == "max_side") return void(p.max_side = static_cast<int>(to_int(full, v)));
    if (key == "gamma") return void(p.gamma = num());
    if (key == "input_gain") return void(p.input_gain = num());
    if (key == "wavelet_boundary") {
      if (v == "mirror") return void(p.wavelet_boundary = Boundary::kMirror);
      if (v == "periodic") return void(p.wavelet_boundary = Boundary::kPeriodic);
      throw ValidationError(full + ": expected mirror or periodic");
    }
  } else if (section == "lattice") {
    if (key == "alpha_x") return void(l.alpha_x = num());
    if (key == "alpha_y") return void(l.alpha_y = num());
    if (key == "j0") return void(l.j0 = num());
    if (key == "i0") return void(l.i0 = num());
    if (key == "ic") return void(l.ic = num());
    if (key == "noise_sd") return void(l.noise_sd = num());
    if (key == "psi_orientation") return void(l.psi_orientation = num());
    if (key == "psi_scale") return void(l.psi_scale = num());
    if (key == "y_self_sign") return void(l.y_self_sign = num());
    if (key == "dt") return void(l.dt = num());
    if (key == "t_total") return void(l.t_total = num());
    if (key == "avg_start") return void(l.avg_start = num());
    if (key == "membrane_ms") return void(l.membrane_ms = num());
    if (key == "integrator") return void(l.integrator = parse_integrator(v));
    if (key == "lateral") return void(l.lateral = parse_lateral_method(v));
    if (key == "lambda") {
      p.kernels.lambda.clear();
      for (const auto& item : split_list(v)) p.kernels.lambda.push_back(to_double(full, item));
      return;
    }
    if (key == "j_gate") {
      if (v == "strict") return void(p.kernels.j_gate = JGate::kStrict);
      if (v == "extended") return void(p.kernels.j_gate = JGate::kExtended);
      throw ValidationError(full + ": expected strict or extended");
    }
    if (key == "w_theta1_min") {
      if (v == "wide") return void(p.kernels.w_gate.theta1_min = kWideTheta1Min);
      if (v == "narrow") return void(p.kernels.w_gate.theta1_min = WGate{}.theta1_min);
      return void(p.kernels.w_gate.theta1_min = num());
    }
    if (key == "w_exclude_low_beta") return void(p.kernels.w_gate.exclude_low_beta = to_bool(full, v));
  } else if (section == "run") {
    if (key == "seed") return void(c.seed = l.seed = static_cast<std::uint64_t>(to_int(full, v)));
    if (key == "workers") return void(c.workers = static_cast<int>(to_int(full, v)));
    if (key == "out") return void(c.out = v);
    if (key == "write_channels") return void(c.write_channels = to_bool(full, v));
    if (key == "trace") return void(c.trace = v);
    if (key == "trace_nodes") {
      if (v != "center" && v != "all") throw ValidationError(full + ": expected center or all");
      return void(c.trace_nodes = v);
    }
  } else if (section == "dataset") {
    if (key == "root") return void(c.dataset = v);
    if (key == "images") return void(c.images_dir = v);
    if (key == "fixations") return void(c.fixations_csv = v);
    if (key == "fixation_maps") return void(c.fixation_maps_dir = v);
    if (key == "masks") return void(c.masks_dir = v);
    if (key == "maps") return void(c.maps_dir = v);
  } else if (section == "metrics") {
    if (key == "sigma_deg") return void(c.metric_sigma_deg = num());
    if (key == "sauc_trials") return void(c.sauc_trials = static_cast<int>(to_int(full, v)));
  } else if (section == "psychophysics") {
    if (key == "seeds") {
      c.psycho_seeds.clear();
      for (const auto& item : split_list(v)) c.psycho_seeds.push_back(static_cast<std::uint64_t>(to_int(full, item)));
      return;
    }
    if (key == "canvas") return void(c.canvas = static_cast<int>(to_int(full, v)));
    if (key == "conditions") return void(c.conditions = split_list(v));
  } else if (section == "stimgen") {
    if (key == "set") {
      if (v != "levels" && v != "dataset") throw ValidationError(full + ": expected levels or dataset");
      return void(c.stimgen_set = v);
    }
    if (key == "count") return void(c.stimgen_count = static_cast<int>(to_int(full, v)));
    if (key == "canvas") return void(c.canvas = static_cast<int>(to_int(full, v)));
  }
  throw ValidationError("unknown option '" + full + "'");
}

RunConfig load_config(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw IoError("cannot parse config '" + path + "': " + e.what());
  }
  RunConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ValidationError("config key '" + section + "' outside a section");
    for (const auto& [key, value] : body) set_option(c, section, key, value.get_value<std::string>());
  }
  return c;
}

void RunConfig::validate(bool need_dataset) const {
  pipeline.validate();
  if (workers < 1) throw ValidationError("workers must be at least 1");
  if (sauc_trials < 1) throw ValidationError("sauc_trials must be at least 1");
  if (!(metric_sigma_deg > 0.0)) throw ValidationError("metrics sigma_deg must be positive");
  if (canvas < 16) throw ValidationError("canvas must be at least 16 pixels");
  if (stimgen_count < 1) throw ValidationError("stimgen count must be positive");
  if (need_dataset) {
    if (dataset.empty() && images_dir.empty()) throw ValidationError("no dataset given (--dataset)");
    if (!fs::is_directory(resolved_images_dir())) {
      throw ValidationError("image directory '" + resolved_images_dir() + "' does not exist");
    }
  }
  for (const std::string* p : {&fixations_csv, &fixation_maps_dir, &masks_dir}) {
    if (!p->empty() && !fs::exists(*p)) throw ValidationError("path '" + *p + "' does not exist");
  }
}

std::string RunConfig::resolved_images_dir() const {
  if (!images_dir.empty()) return images_dir;
  return (fs::path(dataset) / "images").string();
}

std::string RunConfig::resolved_maps_dir() const {
  if (!maps_dir.empty()) return maps_dir;
  return (fs::path(out) / "maps").string();
}

std::string RunConfig::serialize() const {
  const PipelineConfig& p = pipeline;
  const LatticeParams& l = p.lattice;
  std::ostringstream os;
  os << "[model]\nppd=" << fmt(p.ppd) << "\nsigma_deg=" << fmt(p.sigma_deg) << "\nfusion=" << to_string(p.fusion)
     << "\nchannel_combine=" << to_string(p.combine) << "\nmax_side=" << p.max_side << "\ngamma=" << fmt(p.gamma)
     << "\ninput_gain=" << fmt(p.input_gain)
     << "\nwavelet_boundary=" << (p.wavelet_boundary == Boundary::kMirror ? "mirror" : "periodic") << '\n';
  os << "[lattice]\nalpha_x=" << fmt(l.alpha_x) << "\nalpha_y=" << fmt(l.alpha_y) << "\nj0=" << fmt(l.j0)
     << "\ni0=" << fmt(l.i0) << "\nic=" << fmt(l.ic) << "\nnoise_sd=" << fmt(l.noise_sd)
     << "\npsi_orientation=" << fmt(l.psi_orientation) << "\npsi_scale=" << fmt(l.psi_scale)
     << "\ny_self_sign=" << fmt(l.y_self_sign) << "\ndt=" << fmt(l.dt) << "\nt_total=" << fmt(l.t_total)
     << "\navg_start=" << fmt(l.avg_start) << "\nmembrane_ms=" << fmt(l.membrane_ms)
     << "\nintegrator=" << to_string(l.integrator) << "\nlateral=" << to_string(l.lateral) << "\nlambda=";
  for (std::size_t i = 0; i < p.kernels.lambda.size(); ++i) os << (i ? "," : "") << fmt(p.kernels.lambda[i]);
  os << "\nj_gate=" << (p.kernels.j_gate == JGate::kStrict ? "strict" : "extended")
     << "\nw_theta1_min=" << fmt(p.kernels.w_gate.theta1_min)
     << "\nw_exclude_low_beta=" << (p.kernels.w_gate.exclude_low_beta ? "true" : "false") << '\n';
  os << "[run]\nseed=" << seed << "\nlattice_seed=" << l.seed << "\nworkers=" << workers << "\nout=" << out
     << "\nwrite_channels=" << write_channels << "\ntrace=" << trace << "\ntrace_nodes=" << trace_nodes << '\n';
  os << "[dataset]\nroot=" << dataset << "\nimages=" << images_dir << "\nfixations=" << fixations_csv
     << "\nfixation_maps=" << fixation_maps_dir << "\nmasks=" << masks_dir << "\nmaps=" << maps_dir << '\n';
  os << "[metrics]\nsigma_deg=" << fmt(metric_sigma_deg) << "\nsauc_trials=" << sauc_trials << '\n';
  os << "[psychophysics]\nseeds=";
  for (std::size_t i = 0; i < psycho_seeds.size(); ++i) os << (i ? "," : "") << psycho_seeds[i];
  os << "\ncanvas=" << canvas << "\nconditions=";
  for (std::size_t i = 0; i < conditions.size(); ++i) os << (i ? "," : "") << conditions[i];
  os << "\n[stimgen]\nset=" << stimgen_set << "\ncount=" << stimgen_count << '\n';
  return os.str();
}

std::string RunConfig::hash() const {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << std::hash<std::string>{}(serialize());
  return os.str();
}

}  // namespace v1sal

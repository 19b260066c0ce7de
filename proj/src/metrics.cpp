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

#include "v1sal/metrics.hpp"

#include "json.hpp"
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "v1sal/error.hpp"
#include "v1sal/integrate.hpp"

namespace v1sal {

namespace {

void check_map(const Plane& sal, const FixationSet& f) {
  f.validate();
  if (sal.width() != f.width || sal.height() != f.height) {
    throw ValidationError("saliency map " + std::to_string(sal.width()) + "x" + std::to_string(sal.height()) +
                          " does not match fixation image " + std::to_string(f.width) + "x" +
                          std::to_string(f.height));
  }
  if (!all_finite(sal)) throw ValidationError("saliency map has non-finite values");
}

std::vector<double> gather(const Plane& sal, const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(sal[i]);
  return out;
}

// Fraction of `sorted` (ascending) that is >= t.
double fraction_at_or_above(const std::vector<double>& sorted, double t) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
  return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
}

double roc_area(const std::vector<double>& pos_sorted, const std::vector<double>& neg_sorted,
                const std::vector<double>& thresholds_desc) {
  double area = 0.0;
  double tp0 = 0.0, fp0 = 0.0;
  for (double t : thresholds_desc) {
    const double tp = fraction_at_or_above(pos_sorted, t);
    const double fp = fraction_at_or_above(neg_sorted, t);
    area += 0.5 * (fp - fp0) * (tp + tp0);
    tp0 = tp;
    fp0 = fp;
  }
  area += 0.5 * (1.0 - fp0) * (1.0 + tp0);
  return area;
}

Fixation rescale(const Fixation& p, int from_w, int from_h, int to_w, int to_h) {
  if (from_w == to_w && from_h == to_h) return p;
  const int x = static_cast<int>(std::floor((p.x + 0.5) * to_w / from_w));
  const int y = static_cast<int>(std::floor((p.y + 0.5) * to_h / from_h));
  return {std::clamp(x, 0, to_w - 1), std::clamp(y, 0, to_h - 1)};
}

}  // namespace

void FixationSet::validate() const {
  if (width <= 0 || height <= 0) throw ValidationError("fixation set '" + image_id + "' has no image dimensions");
  for (const Fixation& p : points) {
    if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) {
      throw ValidationError("fixation (" + std::to_string(p.x) + "," + std::to_string(p.y) + ") outside image '" +
                            image_id + "'");
    }
  }
}

std::vector<std::size_t> FixationSet::unique_indices() const {
  std::vector<std::size_t> idx;
  idx.reserve(points.size());
  for (const Fixation& p : points) idx.push_back(static_cast<std::size_t>(p.y) * width + p.x);
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

void DensityMap::validate() const {
  double total = 0.0;
  for (double v : values.values()) {
    if (!(v >= 0.0)) throw ValidationError("density map has negative or non-finite values");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("density map does not sum to 1");
}

DensityMap density_from_fixations(const FixationSet& f, double sigma_deg, double ppd) {
  f.validate();
  if (f.points.empty()) throw ValidationError("density needs at least one fixation ('" + f.image_id + "')");
  Plane impulses(f.width, f.height);
  for (const Fixation& p : f.points) impulses(p.x, p.y) += 1.0;
  Plane blurred = gaussian_blur(impulses, sigma_deg * ppd);
  const double total = sum(blurred);
  for (double& v : blurred.values()) v = std::max(v, 0.0) / total;
  return DensityMap{std::move(blurred)};
}

DensityMap pooled_density(std::span<const FixationSet> sets, int width, int height, double sigma_deg, double ppd) {
  FixationSet all{"pooled", width, height, {}};
  for (const FixationSet& s : sets) {
    for (const Fixation& p : s.points) all.points.push_back(rescale(p, s.width, s.height, width, height));
  }
  return density_from_fixations(all, sigma_deg, ppd);
}

Plane to_distribution(const Plane& p) {
  Plane out = shift_nonnegative(p);
  const double total = sum(out);
  if (!(total > 0.0)) {
    const double u = 1.0 / static_cast<double>(out.size());
    for (double& v : out.values()) v = u;
    return out;
  }
  for (double& v : out.values()) v /= total;
  return out;
}

double auc_judd(std::span<const double> positives, std::span<const double> negatives) {
  if (positives.empty() || negatives.empty()) throw ValidationError("AUC needs positives and negatives");
  std::vector<double> pos(positives.begin(), positives.end());
  std::vector<double> neg(negatives.begin(), negatives.end());
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  std::vector<double> thr(pos.rbegin(), pos.rend());
  thr.erase(std::unique(thr.begin(), thr.end()), thr.end());
  return roc_area(pos, neg, thr);
}

double auc_all_thresholds(std::span<const double> positives, std::span<const double> negatives) {
  if (positives.empty() || negatives.empty()) throw ValidationError("AUC needs positives and negatives");
  std::vector<double> pos(positives.begin(), positives.end());
  std::vector<double> neg(negatives.begin(), negatives.end());
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  std::vector<double> thr;
  thr.reserve(pos.size() + neg.size());
  std::merge(pos.begin(), pos.end(), neg.begin(), neg.end(), std::back_inserter(thr));
  std::reverse(thr.begin(), thr.end());
  thr.erase(std::unique(thr.begin(), thr.end()), thr.end());
  return roc_area(pos, neg, thr);
}

double auc(const Plane& sal, const FixationSet& f) {
  check_map(sal, f);
  const auto idx = f.unique_indices();
  if (idx.empty()) throw ValidationError("AUC needs at least one fixation ('" + f.image_id + "')");
  if (idx.size() == sal.size()) throw ValidationError("AUC needs at least one non-fixated pixel");
  if (min_value(sal) == max_value(sal)) return 0.5;
  std::vector<double> neg;
  neg.reserve(sal.size() - idx.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < sal.size(); ++i) {
    if (k < idx.size() && idx[k] == i) {
      ++k;
      continue;
    }
    neg.push_back(sal[i]);
  }
  return auc_judd(gather(sal, idx), neg);
}

double sauc(const Plane& sal, const FixationSet& f, std::span<const FixationSet> pool, const ShuffleOptions& opt) {
  check_map(sal, f);
  if (pool.empty()) throw ValidationError("shuffled AUC needs a non-empty pool");
  if (opt.trials < 1) throw ValidationError("shuffled AUC needs at least one trial");
  const auto idx = f.unique_indices();
  if (idx.empty()) throw ValidationError("shuffled AUC needs at least one fixation");
  const auto pos = gather(sal, idx);
  const std::uint64_t id_hash = std::hash<std::string>{}(f.image_id);
  double total = 0.0;
  int used = 0;
  for (int t = 0; t < opt.trials; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                      static_cast<std::uint32_t>(id_hash), static_cast<std::uint32_t>(id_hash >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const FixationSet& other = pool[pick(rng)];
    std::vector<double> neg;
    neg.reserve(other.points.size());
    for (const Fixation& p : other.points) {
      const Fixation q = rescale(p, other.width, other.height, sal.width(), sal.height());
      neg.push_back(sal(q.x, q.y));
    }
    if (neg.empty()) continue;
    total += auc_all_thresholds(pos, neg);
    ++used;
  }
  if (used == 0) throw ValidationError("shuffled AUC: every sampled pool image was empty");
  return total / used;
}

double nss(const Plane& sal, const FixationSet& f) {
  check_map(sal, f);
  const auto idx = f.unique_indices();
  if (idx.empty()) throw ValidationError("NSS needs at least one fixation");
  const double sd = stddev(sal);
  if (!(sd > 0.0)) {
    spdlog::warn("NSS: constant saliency map for '{}', scoring 0", f.image_id);
    return 0.0;
  }
  const double mu = mean(sal);
  double acc = 0.0;
  for (std::size_t i : idx) acc += (sal[i] - mu) / sd;
  return acc / static_cast<double>(idx.size());
}

double cc(const Plane& sal, const DensityMap& d) {
  if (!sal.same_shape(d.values)) throw ValidationError("CC: map shapes differ");
  const double ma = mean(sal), mb = mean(d.values);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < sal.size(); ++i) {
    const double a = sal[i] - ma, b = d.values[i] - mb;
    sab += a * b;
    saa += a * a;
    sbb += b * b;
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) {
    spdlog::warn("CC: constant plane, scoring 0");
    return 0.0;
  }
  return sab / std::sqrt(saa * sbb);
}

double sim(const Plane& sal, const DensityMap& d) {
  if (!sal.same_shape(d.values)) throw ValidationError("SIM: map shapes differ");
  const Plane p = to_distribution(sal);
  const Plane q = to_distribution(d.values);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::min(p[i], q[i]);
  return acc;
}

double kl(const Plane& sal, const DensityMap& d, double eps) {
  if (!sal.same_shape(d.values)) throw ValidationError("KL: map shapes differ");
  const Plane p = to_distribution(sal);
  const Plane q = to_distribution(d.values);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] > 0.0) acc += q[i] * std::log(q[i] / (p[i] + eps));
  }
  return acc;
}

double infogain(const Plane& sal, const FixationSet& f, const DensityMap& baseline, double eps) {
  check_map(sal, f);
  if (!sal.same_shape(baseline.values)) throw ValidationError("InfoGain: baseline shape differs");
  const auto idx = f.unique_indices();
  if (idx.empty()) throw ValidationError("InfoGain needs at least one fixation");
  const Plane p = to_distribution(sal);
  const Plane b = to_distribution(baseline.values);
  double acc = 0.0;
  for (std::size_t i : idx) acc += std::log2(p[i] + eps) - std::log2(b[i] + eps);
  return acc / static_cast<double>(idx.size());
}

std::map<std::string, double> MetricReport::means(const std::string& model_id) const {
  std::map<std::string, double> total;
  std::map<std::string, int> count;
  for (const MetricRow& r : rows) {
    if (!model_id.empty() && r.model_id != model_id) continue;
    for (const auto& [k, v] : r.values) {
      total[k] += v;
      ++count[k];
    }
  }
  for (auto& [k, v] : total) v /= count[k];
  return total;
}

void MetricReport::write_csv(std::ostream& os) const {
  os << "image_id,model_id";
  for (const auto& m : metric_names()) os << ',' << m;
  os << '\n' << std::setprecision(17);
  for (const MetricRow& r : rows) {
    os << r.image_id << ',' << r.model_id;
    for (const auto& m : metric_names()) {
      const auto it = r.values.find(m);
      os << ',';
      if (it != r.values.end()) os << it->second;
    }
    os << '\n';
  }
}

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j;
  j["rows"] = nlohmann::ordered_json::array();
  std::set<std::string> models;
  for (const MetricRow& r : rows) {
    nlohmann::ordered_json row;
    row["image_id"] = r.image_id;
    row["model_id"] = r.model_id;
    for (const auto& m : metric_names()) {
      const auto it = r.values.find(m);
      if (it != r.values.end()) row[m] = it->second;
    }
    j["rows"].push_back(row);
    models.insert(r.model_id);
  }
  nlohmann::ordered_json means_json;
  for (const auto& model : models) {
    nlohmann::ordered_json mj;
    for (const auto& [k, v] : means(model)) mj[k] = v;
    means_json[model] = mj;
  }
  j["means"] = means_json;
  j["exceptions"] = nlohmann::ordered_json::array();
  for (const auto& [id, why] : exceptions) j["exceptions"].push_back({{"image_id", id}, {"reason", why}});
  return j.dump(2);
}

std::map<std::string, FixationSet> read_fixations_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open fixations file '" + path + "'");
  std::map<std::string, FixationSet> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string id, xs, ys;
    if (!std::getline(ss, id, ',') || !std::getline(ss, xs, ',') || !std::getline(ss, ys, ',')) {
      throw IoError(path + ":" + std::to_string(lineno) + ": expected image_id,x,y");
    }
    double x = 0.0, y = 0.0;
    try {
      x = std::stod(xs);
      y = std::stod(ys);
    } catch (const std::exception&) {
      if (lineno == 1) continue;  // header
      throw IoError(path + ":" + std::to_string(lineno) + ": bad coordinate");
    }
    FixationSet& f = out[id];
    f.image_id = id;
    f.points.push_back({static_cast<int>(std::floor(x)), static_cast<int>(std::floor(y))});
  }
  return out;
}

MetricRow evaluate_map(const Plane& sal, const FixationSet& f, std::span<const FixationSet> pool,
                       const DensityMap& baseline, double sigma_deg, double ppd, const ShuffleOptions& opt) {
  MetricRow row;
  row.image_id = f.image_id;
  const DensityMap d = density_from_fixations(f, sigma_deg, ppd);
  row.values["AUC"] = auc(sal, f);
  row.values["sAUC"] = sauc(sal, f, pool, opt);
  row.values["NSS"] = nss(sal, f);
  row.values["CC"] = cc(sal, d);
  row.values["SIM"] = sim(sal, d);
  row.values["KL"] = kl(sal, d);
  row.values["InfoGain"] = infogain(sal, f, baseline);
  return row;
}

}  // namespace v1sal

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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails. Arguments select criteria by number.

#include <spdlog/spdlog.h>
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "v1sal/coupling.hpp"
#include "v1sal/lattice.hpp"
#include "v1sal/metrics.hpp"
#include "v1sal/pipeline.hpp"
#include "v1sal/psychophysics.hpp"
#include "v1sal/stats.hpp"
#include "v1sal/wavelet.hpp"

namespace fs = std::filesystem;
using namespace v1sal;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

fs::path scratch() {
  static const fs::path root = [] {
    fs::path p = fs::temp_directory_path() / "v1sal_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(V1SAL_CLI_PATH) + " " + args + " -q";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------------------
// 1. Wavelet reconstruction.

Outcome wavelet_reconstruction() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<int> side(8, 128);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    Plane p(side(rng), side(rng));
    for (double& v : p.values()) v = value(rng);
    const Plane back = synthesize(decompose(p));
    for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, std::abs(back[i] - p[i]));
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-9 && secs < 30.0, fmt("200 planes, max error %.3g, %.1f s", worst, secs)};
}

// ---------------------------------------------------------------------------
// 2. Coupling gates, checked against a separate reading of the predicates.

double fold(double a) {
  a = std::fmod(a, pi);
  if (a <= -pi / 2) a += pi;
  if (a > pi / 2) a -= pi;
  return a;
}

struct GateOracle {
  bool j = false;  // some constituent geometry passes the excitatory gate
  bool w = false;  // some constituent geometry escapes every inhibitory exclusion
};

GateOracle gate_oracle(int kx, int ky, Orientation target, Orientation source) {
  auto angles = [](Orientation o) -> std::vector<double> {
    if (o == Orientation::kH) return {pi / 2};
    if (o == Orientation::kV) return {0.0};
    return {pi / 4, 3 * pi / 4};
  };
  std::vector<std::pair<double, double>> pairs;
  const auto ta = angles(target), sa = angles(source);
  if (ta.size() == 2 && sa.size() == 2) {
    pairs = {{ta[0], sa[0]}, {ta[1], sa[1]}};
  } else {
    for (double a : ta)
      for (double b : sa) pairs.emplace_back(a, b);
  }
  GateOracle g;
  const double d = std::sqrt(static_cast<double>(kx * kx + ky * ky));
  if (d == 0.0) return g;
  const double line = std::atan2(static_cast<double>(ky), static_cast<double>(kx));
  for (const auto& [a, b] : pairs) {
    double t1 = fold(a - line), t2 = fold(b - line);
    if (std::abs(t1) > std::abs(t2)) std::swap(t1, t2);
    const double beta = 2 * std::abs(t1) + 2 * std::sin(std::abs(t1 + t2));
    const double dtheta = fold(a - b);
    if (d <= 10.0 && beta < pi / 2.69) g.j = true;
    const bool excluded =
        d >= 10.0 || beta < pi / 1.1 || std::abs(dtheta) >= pi / 3 || std::abs(t1) < pi / 11.999;
    if (!excluded) g.w = true;
  }
  return g;
}

Outcome kernel_gates() {
  const auto t0 = Clock::now();
  const int side = 128;
  const int scales = num_scales(side);
  const KernelParams params;
  const CouplingKernels k(params, scales, side, side);
  std::size_t entries = 0, nonzero_j = 0, nonzero_w = 0, bad = 0;
  for (int s = 1; s <= scales; ++s) {
    const int sp = CouplingKernels::spacing(s);
    const int reach = std::min(11 * sp, side / 2);
    for (int sq = 1; sq <= scales; ++sq) {
      const double lambda = params.lambda_at(std::abs(s - sq));
      for (Orientation a : kOrientations)
        for (Orientation b : kOrientations)
          for (int dy = -reach; dy <= reach; ++dy)
            for (int dx = -reach; dx <= reach; ++dx) {
              const double j = k.J(dx, dy, s, a, sq, b);
              const double w = k.W(dx, dy, s, a, sq, b);
              ++entries;
              nonzero_j += j != 0.0;
              nonzero_w += w != 0.0;
              const bool on_grid = dx % sp == 0 && dy % sp == 0 && 2 * std::abs(dx) < side &&
                                   2 * std::abs(dy) < side && lambda != 0.0;
              GateOracle g;
              if (on_grid) g = gate_oracle(dx / sp, dy / sp, a, b);
              if ((j > 0.0) != g.j || (w > 0.0) != g.w || j < 0.0 || w < 0.0) ++bad;
            }
    }
    // The tap lists the lattice integrates with.
    for (Orientation a : kOrientations)
      for (Orientation b : kOrientations)
        for (const Tap& t : k.taps(s, a, b)) {
          const GateOracle g = gate_oracle(t.kx, t.ky, a, b);
          if ((t.j > 0.0) != g.j || (t.w > 0.0) != g.w) ++bad;
        }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 10.0,
          fmt("%zu entries (%zu J>0, %zu W>0), %zu gate mismatches, %.1f s", entries, nonzero_j, nonzero_w, bad,
              secs)};
}

// ---------------------------------------------------------------------------
// 3. Metric oracles.

// ROC enumerated point by point: one threshold per distinct fixated value,
// rates counted over the whole map, trapezoids between consecutive points.
double brute_force_auc(const Plane& sal, const std::set<std::size_t>& fixated) {
  std::set<double, std::greater<>> thresholds;
  for (std::size_t i : fixated) thresholds.insert(sal[i]);
  std::vector<std::pair<double, double>> roc{{0.0, 0.0}};
  const double npos = static_cast<double>(fixated.size());
  const double nneg = static_cast<double>(sal.size() - fixated.size());
  for (double t : thresholds) {
    double tp = 0, fp = 0;
    for (std::size_t i = 0; i < sal.size(); ++i) {
      if (sal[i] < t) continue;
      if (fixated.count(i)) ++tp;
      else ++fp;
    }
    roc.emplace_back(fp / nneg, tp / npos);
  }
  roc.emplace_back(1.0, 1.0);
  double area = 0.0;
  for (std::size_t i = 1; i < roc.size(); ++i)
    area += (roc[i].first - roc[i - 1].first) * (roc[i].second + roc[i - 1].second) / 2.0;
  return area;
}

Outcome metric_oracles() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> level(0, 5);  // few levels, many ties
  std::uniform_real_distribution<double> value(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, 3), coord(0, 4), coin(0, 1);
  double worst = 0.0;
  for (int c = 0; c < 10000; ++c) {
    Plane sal(5, 5);
    const bool tied = coin(rng) == 1;
    for (double& v : sal.values()) v = tied ? level(rng) / 5.0 : value(rng);
    if (c % 97 == 0) std::fill(sal.values().begin(), sal.values().end(), 0.5);
    FixationSet f{"case", 5, 5, {}};
    std::set<std::size_t> fixated;
    for (int n = count(rng); n > 0; --n) {
      const Fixation p{coord(rng), coord(rng)};
      f.points.push_back(p);
      fixated.insert(static_cast<std::size_t>(p.y) * 5 + p.x);
    }
    worst = std::max(worst, std::abs(auc(sal, f) - brute_force_auc(sal, fixated)));
  }

  // 2x2 hand cases, compared with ==.
  auto plane = [](double a, double b, double c, double d) {
    Plane p(2, 2);
    p(0, 0) = a;
    p(1, 0) = b;
    p(0, 1) = c;
    p(1, 1) = d;
    return p;
  };
  int exact = 0, cases = 0;
  auto expect = [&](double got, double want) {
    ++cases;
    exact += got == want;
  };
  const Plane steps = plane(1, 1, 3, 3);  // mean 2, sd 1
  expect(nss(steps, FixationSet{"a", 2, 2, {{0, 1}}}), 1.0);
  expect(nss(steps, FixationSet{"a", 2, 2, {{1, 0}}}), -1.0);
  expect(nss(steps, FixationSet{"a", 2, 2, {{0, 0}, {1, 1}}}), 0.0);
  const Plane spike = plane(0, 0, 0, 4);  // mean 1, variance 3
  expect(nss(spike, FixationSet{"a", 2, 2, {{1, 1}}}), 3.0 / std::sqrt(3.0));
  expect(nss(spike, FixationSet{"a", 2, 2, {{0, 0}}}), -1.0 / std::sqrt(3.0));

  const DensityMap half{plane(0.5, 0.5, 0, 0)};
  const double e = kMetricEpsilon;
  expect(kl(plane(1, 1, 1, 1), half, 0.0), 0.5 * std::log(2.0) + 0.5 * std::log(2.0));
  expect(kl(plane(1, 1, 1, 1), half), 0.5 * std::log(0.5 / (0.25 + e)) + 0.5 * std::log(0.5 / (0.25 + e)));
  expect(kl(plane(1, 3, 0, 0), half), 0.5 * std::log(0.5 / (0.25 + e)) + 0.5 * std::log(0.5 / (0.75 + e)));
  expect(kl(plane(2, 2, 0, 0), half, 0.0), 0.0);

  return {worst <= 1e-12 && exact == cases,
          fmt("AUC vs enumeration max diff %.3g over 10000 maps; KL/NSS %d of %d hand cases exact", worst, exact,
              cases)};
}

// ---------------------------------------------------------------------------
// 4. Center bias.

Outcome center_bias() {
  const int side = 64;
  const double sigma = 8.0;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> jitter(0.0, sigma);
  auto biased_set = [&](const std::string& id) {
    FixationSet f{id, side, side, {}};
    while (f.points.size() < 30) {
      const int x = static_cast<int>(std::lround(side / 2.0 + jitter(rng)));
      const int y = static_cast<int>(std::lround(side / 2.0 + jitter(rng)));
      if (x >= 0 && y >= 0 && x < side && y < side) f.points.push_back({x, y});
    }
    return f;
  };
  std::vector<FixationSet> sets;
  for (int i = 0; i < 40; ++i) sets.push_back(biased_set("img" + std::to_string(i)));

  Plane gauss(side, side);
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      const double dx = x - side / 2.0, dy = y - side / 2.0;
      gauss(x, y) = std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
    }
  double a = 0.0, s = 0.0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::vector<FixationSet> pool;
    for (std::size_t j = 0; j < sets.size(); ++j)
      if (j != i) pool.push_back(sets[j]);
    a += auc(gauss, sets[i]);
    s += sauc(gauss, sets[i], pool, ShuffleOptions{10, 3});
  }
  a /= static_cast<double>(sets.size());
  s /= static_cast<double>(sets.size());
  return {a > 0.6 && std::abs(s - 0.5) <= 0.05, fmt("AUC %.4f, sAUC %.4f on 40 center-biased images", a, s)};
}

// ---------------------------------------------------------------------------
// 5 and 6. Pop-out curves and the zero-contrast null share their runs.

struct PsychoData {
  PsychoReport report;
  double seconds = 0.0;
  bool ready = false;
};

PsychoData& psycho_data() {
  static PsychoData data;
  if (data.ready) return data;
  const PipelineConfig cfg;
  KernelCache cache(cfg.kernels);
  std::vector<Condition> conds;
  for (const char* n : {"brightness_dark", "brightness_bright", "size", "color_red_achromatic", "color_blue_achromatic"})
    conds.push_back(find_condition(n));
  PsychoOptions opt;
  opt.seeds = {1, 2, 3};
  const auto t0 = Clock::now();
  data.report = run_psychophysics(conds, cfg, cache, opt);
  data.seconds = seconds_since(t0);
  data.ready = true;
  return data;
}

Outcome popout_monotonicity() {
  const PsychoData& d = psycho_data();
  std::map<std::string, std::vector<double>> rho;
  for (const PsychoCurve& c : d.report.curves) rho[c.condition].push_back(c.spearman);
  bool pass = d.seconds < 600.0;
  std::string detail;
  for (const auto& [name, values] : rho) {
    const double need = name == "brightness_dark" ? 0.9 : 0.8;
    const auto ok = std::count_if(values.begin(), values.end(), [&](double r) { return r >= need; });
    pass = pass && 2 * ok > static_cast<long>(values.size());
    detail += name + " rho";
    for (double r : values) detail += fmt(" %.3f", r);
    detail += fmt(" (%ld/%zu >= %.1f); ", ok, values.size(), need);
  }
  return {pass, detail + fmt("%zu runs in %.0f s", d.report.rows.size(), d.seconds)};
}

Outcome zero_contrast_null() {
  // Level-0 rows of the pop-out runs plus the kinds they do not cover.
  std::vector<PsychoRow> rows;
  for (const PsychoRow& r : psycho_data().report.rows) {
    if (r.level_index == null_level_index(find_condition(r.condition))) rows.push_back(r);
  }
  const PipelineConfig cfg;
  KernelCache cache(cfg.kernels);
  for (const char* n : {"orientation", "color_red_saturated", "color_blue_saturated"}) {
    const Condition& c = find_condition(n);
    const int li = null_level_index(c);
    for (std::uint64_t seed : {1, 2, 3}) {
      const double level = levels(c.kind)[static_cast<std::size_t>(li)];
      const Stimulus s = generate(condition_spec(c, level, seed, 1024, cfg.ppd));
      PipelineConfig run = cfg;
      run.lattice.seed = seed;
      PsychoRow r = measure_stimulus(s, compute_saliency(s.image, run, cache).map.values, 10);
      r.condition = n;
      r.level_index = li;
      rows.push_back(r);
    }
  }
  std::map<std::string, std::pair<double, double>> worst;  // kind -> (|in-out|, |in-distractors|)
  for (const PsychoRow& r : rows) {
    const std::string kind = to_string(find_condition(r.condition).kind);
    auto& w = worst[kind];
    w.first = std::max(w.first, std::abs(r.in_mask - r.out_mask));
    w.second = std::max(w.second, std::abs(r.in_mask - r.distractors));
  }
  bool pass = true;
  std::string detail;
  for (const auto& [kind, w] : worst) {
    pass = pass && w.first < 0.1;
    detail += fmt("%s |in-out| %.3f (vs distractors %.3f); ", kind.c_str(), w.first, w.second);
  }
  return {pass, detail + "asymmetry has no zero-contrast level"};
}

// ---------------------------------------------------------------------------
// 7. Dynamics.

Outcome dynamics() {
  // One node per orientation at a single position with no hypercolumn
  // coupling: each is an isolated excitatory/inhibitory pair.
  LatticeParams p;
  p.noise_sd = 0.0;
  p.psi_orientation = 0.0;
  p.psi_scale = 0.0;
  const std::array<double, 3> drive{0.5, 1.5, 3.0};
  auto k1 = std::make_shared<CouplingKernels>(KernelParams{}, 1, 1, 1);
  const Lattice lat(k1, p);
  LatticeState st(1, 1, 1);
  LatticeInput in{1, 1, 1, {drive[0], drive[1], drive[2]}};

  auto rhs = [&](double x, double y, double I, double& dx, double& dy) {
    dx = -p.alpha_x * x - p.gy(y) + p.j0 * p.gx(x) + I + p.i0;
    dy = -p.alpha_y * y + p.y_self_sign * p.gx(x) + p.ic;
  };
  std::array<double, 3> rx{}, ry{};
  const double h = p.dt / 10.0;
  double node_err = 0.0;
  const int steps = static_cast<int>(std::lround(10.0 / p.dt));
  for (int n = 0; n < steps; ++n) {
    lat.step(st, in, {});
    for (int o = 0; o < 3; ++o) {
      for (int f = 0; f < 10; ++f) {
        double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y;
        const double x = rx[o], y = ry[o];
        rhs(x, y, drive[o], k1x, k1y);
        rhs(x + h / 2 * k1x, y + h / 2 * k1y, drive[o], k2x, k2y);
        rhs(x + h / 2 * k2x, y + h / 2 * k2y, drive[o], k3x, k3y);
        rhs(x + h * k3x, y + h * k3y, drive[o], k4x, k4y);
        rx[o] = x + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
        ry[o] = y + h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
      }
      node_err = std::max({node_err, std::abs(st.x[o] - rx[o]), std::abs(st.y[o] - ry[o])});
    }
  }

  // Full lattice, random drive, default noise, 100 time units.
  const int side = 32, scales = num_scales(side);
  auto kl = std::make_shared<CouplingKernels>(KernelParams{}, scales, side, side);
  LatticeParams q;
  const Lattice big(kl, q);
  LatticeState s(side, side, scales);
  LatticeInput drive_in{side, side, scales, std::vector<double>(s.x.size())};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (double& v : drive_in.values) v = u(rng);
  NoiseSource noise(9, q.noise_sd);
  std::vector<double> field(s.x.size());
  double lo = 0.0, hi = 0.0, xmin = 0.0, xmax = 0.0;
  bool finite = true;
  const int long_steps = static_cast<int>(std::lround(100.0 / q.dt));
  try {
    for (int n = 0; n < long_steps; ++n) {
      noise.fill(field);
      big.step(s, drive_in, field);
      for (double x : s.x) {
        const double r = q.gx(x);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
      }
    }
  } catch (const std::exception&) {
    finite = false;
  }
  const bool bounded = finite && lo >= 0.0 && hi <= q.gx.ceiling;
  return {node_err < 1e-3 && bounded,
          fmt("single node max error %.3g vs 10x finer RK4; lattice rates in [%.3g, %.3g] (saturation %.3g), x in "
              "[%.3g, %.3g] over %d steps",
              node_err, lo, hi, q.gx.ceiling, xmin, xmax, long_steps)};
}

// ---------------------------------------------------------------------------
// 8. Polarity and translation.

Plane random_plane(int side, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Plane p(side, side);
  for (double& v : p.values()) v = u(rng);
  return p;
}

std::vector<double> conspicuity_of(const WaveletPyramid& pyr, const LatticeParams& p,
                                   std::shared_ptr<const CouplingKernels> k) {
  auto [on, off] = on_off_inputs(pyr);
  return conspicuity(simulate_channel(on, off, std::move(k), p, Channel::kL));
}

WaveletPyramid scaled(WaveletPyramid pyr, double gain) {
  for (auto& level : pyr.omega)
    for (Plane& plane : level) plane *= gain;
  return pyr;
}

Outcome symmetry() {
  const int side = 64;
  const PipelineConfig cfg;
  auto k = std::make_shared<CouplingKernels>(cfg.kernels, num_scales(side), side, side);

  const WaveletPyramid pyr = scaled(decompose(random_plane(side, 21)), cfg.input_gain);
  WaveletPyramid neg = pyr;
  for (auto& level : neg.omega)
    for (Plane& plane : level) plane *= -1.0;
  const bool polarity = conspicuity_of(pyr, cfg.lattice, k) == conspicuity_of(neg, cfg.lattice, k);

  // Translation: periodic wavelet boundary, noise-free lattice.
  LatticeParams quiet = cfg.lattice;
  quiet.noise_sd = 0.0;
  const Plane img = random_plane(side, 22);
  const int sx = 13, sy = 7;
  Plane moved(side, side);
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) moved((x + sx) % side, (y + sy) % side) = img(x, y);
  const auto a = conspicuity_of(scaled(decompose(img, Boundary::kPeriodic), cfg.input_gain), quiet, k);
  const auto b = conspicuity_of(scaled(decompose(moved, Boundary::kPeriodic), cfg.input_gain), quiet, k);
  const std::size_t n = static_cast<std::size_t>(side) * side;
  double err = 0.0, peak = 0.0;
  for (std::size_t plane = 0; plane < a.size() / n; ++plane)
    for (int y = 0; y < side; ++y)
      for (int x = 0; x < side; ++x) {
        const double va = a[plane * n + static_cast<std::size_t>(y) * side + x];
        const double vb = b[plane * n + static_cast<std::size_t>((y + sy) % side) * side + (x + sx) % side];
        err = std::max(err, std::abs(va - vb));
        peak = std::max(peak, va);
      }
  return {polarity && err < 1e-9 && peak > 0.0,
          fmt("polarity swap %s; circular shift (%d,%d) max error %.3g (peak conspicuity %.3g)",
              polarity ? "bit-identical" : "DIFFERS", sx, sy, err, peak)};
}

// ---------------------------------------------------------------------------
// 9 and 10 run on a synthetic 10-image set written by the tool itself.

const fs::path& synthetic_set() {
  static const fs::path ds = [] {
    const fs::path p = scratch() / "dataset";
    if (run_cli("stimgen --set dataset --count 10 --seed 100 --out " + p.string()) != 0)
      throw std::runtime_error("stimgen failed");
    return p;
  }();
  return ds;
}

Outcome determinism() {
  const fs::path ds = synthetic_set();
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, int>> runs{{"a", 1}, {"b", 1}, {"c", 8}};
  for (const auto& [name, workers] : runs) {
    const int rc = run_cli("saliency --dataset " + ds.string() + " --seed 7 --workers " + std::to_string(workers) +
                           " --out " + (scratch() / name).string());
    if (rc != 0) return {false, fmt("saliency run %s exited with %d", name.c_str(), rc)};
  }
  int maps = 0, same_repeat = 0, same_workers = 0;
  for (const auto& e : fs::directory_iterator(scratch() / "a" / "maps")) {
    if (e.path().extension() != ".f32") continue;
    ++maps;
    const std::string ref = slurp(e.path());
    same_repeat += ref == slurp(scratch() / "b" / "maps" / e.path().filename());
    same_workers += ref == slurp(scratch() / "c" / "maps" / e.path().filename());
  }
  return {maps == 10 && same_repeat == 10 && same_workers == 10,
          fmt("%d maps; repeat run identical on %d, 8 workers identical on %d; %.0f s", maps, same_repeat,
              same_workers, seconds_since(t0))};
}

Outcome ablation() {
  const fs::path ds = synthetic_set();
  const fs::path out = scratch() / "ablation";
  const int rc = run_cli("ablation --dataset " + ds.string() + " --seed 7 --out " + out.string());
  if (rc != 0) return {false, fmt("ablation exited with %d", rc)};
  const auto j = nlohmann::json::parse(slurp(out / "ablation.json"));
  std::set<std::pair<std::string, std::string>> cells;
  int finite = 0;
  for (const auto& row : j["table"]) {
    cells.insert({row["mode"].get<std::string>(), row["metric"].get<std::string>()});
    finite += row["value"].is_number() && std::isfinite(row["value"].get<double>());
  }
  const int distinct = j["distinct_count"].get<int>();
  const std::size_t images = j["images"].size();
  const bool complete = cells.size() == 3 * metric_names().size() && finite == static_cast<int>(cells.size());
  return {complete && images == 10 && distinct >= 8,
          fmt("%zu of %zu table cells, %d finite; fusion maps pairwise distinct on %d of %zu images", cells.size(),
              3 * metric_names().size(), finite, distinct, images)};
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::warn);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"wavelet reconstruction", wavelet_reconstruction},
      {"kernel gates", kernel_gates},
      {"metric oracles", metric_oracles},
      {"center-bias penalty", center_bias},
      {"pop-out monotonicity", popout_monotonicity},
      {"zero-contrast null", zero_contrast_null},
      {"dynamics", dynamics},
      {"polarity and translation", symmetry},
      {"pipeline determinism", determinism},
      {"ablation table", ablation},
  };
  std::set<int> chosen;
  for (int i = 1; i < argc; ++i) chosen.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!chosen.empty() && !chosen.count(id)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

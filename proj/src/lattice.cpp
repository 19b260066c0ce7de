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

#include "v1sal/lattice.hpp"

#include <fftw3.h>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <random>
#include <sstream>

#include "v1sal/error.hpp"

namespace v1sal {

namespace {

// FFTW's planner is not reentrant; execution on distinct arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (!p) throw std::bad_alloc();
  std::memset(p, 0, sizeof(T) * n);
  return FftwBuffer<T>(p);
}

}  // namespace

std::string to_string(Integrator i) {
  switch (i) {
    case Integrator::kSplitRk4: return "split_rk4";
    case Integrator::kRk4: return "rk4";
    case Integrator::kEuler: return "euler";
  }
  return "?";
}

std::string to_string(LateralMethod m) { return m == LateralMethod::kSpectral ? "spectral" : "direct"; }

Integrator parse_integrator(const std::string& s) {
  if (s == "split_rk4") return Integrator::kSplitRk4;
  if (s == "rk4") return Integrator::kRk4;
  if (s == "euler") return Integrator::kEuler;
  throw ValidationError("unknown integrator '" + s + "'");
}

LateralMethod parse_lateral_method(const std::string& s) {
  if (s == "spectral") return LateralMethod::kSpectral;
  if (s == "direct") return LateralMethod::kDirect;
  throw ValidationError("unknown lateral method '" + s + "'");
}

void LatticeParams::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (!(t_total > 0.0)) throw ValidationError("t_total must be positive");
  if (avg_start < 0.0 || avg_start >= t_total) throw ValidationError("averaging window must lie inside [0, t_total)");
  if (std::lround(avg_start / dt) >= steps()) throw ValidationError("averaging window holds no steps");
  if (noise_sd < 0.0) throw ValidationError("noise_sd must be nonnegative");
}

int LatticeParams::steps() const { return static_cast<int>(std::lround(t_total / dt)); }

LatticeState::LatticeState(int w, int h, int s)
    : width(w), height(h), scales(s),
      x(static_cast<std::size_t>(w) * h * 3 * s, 0.0),
      y(static_cast<std::size_t>(w) * h * 3 * s, 0.0) {}

LatticeInput to_input(const WaveletPyramid& p) {
  LatticeInput in{p.width, p.height, p.scales(), {}};
  const std::size_t n = static_cast<std::size_t>(p.width) * p.height;
  in.values.resize(n * 3 * static_cast<std::size_t>(p.scales()));
  for (int s = 1; s <= p.scales(); ++s)
    for (Orientation o : kOrientations) {
      const Plane& src = p.plane(s, o);
      std::copy(src.data(), src.data() + n,
                in.values.begin() + static_cast<std::ptrdiff_t>(LatticeState::plane_index(s, o) * n));
    }
  return in;
}

std::pair<LatticeInput, LatticeInput> on_off_inputs(const WaveletPyramid& p) {
  LatticeInput on = to_input(p);
  LatticeInput off = on;
  for (std::size_t i = 0; i < on.values.size(); ++i) {
    const double v = on.values[i];
    on.values[i] = std::max(v, 0.0);
    off.values[i] = std::max(-v, 0.0);
  }
  return {std::move(on), std::move(off)};
}

struct Lattice::Tile {
  std::vector<double> x, y, exc, inh, in, noise, gx, gy, xs, ys, ax, ay;
};

struct Lattice::Workspace {
  Tile tile;
  std::vector<double> gx, gy;
  std::vector<double> exc, inh;
  std::vector<double> kx[4], ky[4];
  std::vector<double> xs, ys;
  std::vector<double> mix;  // direct route: lambda-mixed source rates, 3 planes
};

struct Lattice::Spectral {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  std::size_t bins = 0;
  FftwBuffer<double> real;
  FftwBuffer<fftw_complex> spectra;  // one per plane
  FftwBuffer<fftw_complex> mixed;    // 3 planes
  FftwBuffer<fftw_complex> acc;
  // Real kernel spectra (kernels are even), pre-scaled by 1/N:
  // [(s-1)*9 + target*3 + source] * bins.
  std::vector<double> j_hat, w_hat;
  std::vector<char> j_any, w_any;  // per scale
  std::vector<char> active;         // per plane, scratch for lateral_spectral

  ~Spectral() {
    std::lock_guard lock(fftw_planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

Lattice::Lattice(std::shared_ptr<const CouplingKernels> kernels, LatticeParams params,
                 const simd::KernelTable& simd)
    : kernels_(std::move(kernels)), params_(std::move(params)), simd_(simd) {
  params_.validate();
  width_ = kernels_->width();
  height_ = kernels_->height();
  scales_ = kernels_->scales();
  plane_size_ = static_cast<std::size_t>(width_) * height_;
  const std::size_t total = plane_size_ * 3 * static_cast<std::size_t>(scales_);

  ws_ = std::make_unique<Workspace>();
  for (auto* v : {&ws_->gx, &ws_->gy, &ws_->exc, &ws_->inh, &ws_->xs, &ws_->ys}) v->assign(total, 0.0);
  for (int k = 0; k < 4; ++k) {
    ws_->kx[k].assign(total, 0.0);
    ws_->ky[k].assign(total, 0.0);
  }
  {
    Tile& t = ws_->tile;
    const std::size_t m = kTile * 3 * static_cast<std::size_t>(scales_);
    for (auto* v : {&t.x, &t.y, &t.exc, &t.inh, &t.in, &t.noise, &t.gx, &t.gy, &t.xs, &t.ys, &t.ax, &t.ay}) {
      v->assign(m, 0.0);
    }
  }

  if (params_.lateral == LateralMethod::kDirect) {
    ws_->mix.assign(plane_size_ * 3, 0.0);
    return;
  }

  spectral_ = std::make_unique<Spectral>();
  Spectral& sp = *spectral_;
  sp.bins = static_cast<std::size_t>(height_) * (width_ / 2 + 1);
  sp.real = fftw_buffer<double>(plane_size_);
  sp.spectra = fftw_buffer<fftw_complex>(sp.bins * 3 * static_cast<std::size_t>(scales_));
  sp.mixed = fftw_buffer<fftw_complex>(sp.bins * 3);
  sp.acc = fftw_buffer<fftw_complex>(sp.bins);
  {
    std::lock_guard lock(fftw_planner_mutex());
    sp.forward = fftw_plan_dft_r2c_2d(height_, width_, sp.real.get(), sp.acc.get(), FFTW_ESTIMATE);
    sp.inverse = fftw_plan_dft_c2r_2d(height_, width_, sp.acc.get(), sp.real.get(), FFTW_ESTIMATE);
  }

  const double norm = 1.0 / static_cast<double>(plane_size_);
  sp.j_hat.assign(sp.bins * 9 * static_cast<std::size_t>(scales_), 0.0);
  sp.w_hat.assign(sp.j_hat.size(), 0.0);
  sp.j_any.assign(static_cast<std::size_t>(scales_), 0);
  sp.w_any.assign(static_cast<std::size_t>(scales_), 0);
  auto kernel_spectrum = [&](const std::vector<Tap>& taps, int spacing, bool use_j, double* out) {
    std::fill(sp.real.get(), sp.real.get() + plane_size_, 0.0);
    bool any = false;
    for (const Tap& t : taps) {
      const double v = use_j ? t.j : t.w;
      if (v == 0.0) continue;
      any = true;
      const int px = boundary_index(t.kx * spacing, width_, Boundary::kPeriodic);
      const int py = boundary_index(t.ky * spacing, height_, Boundary::kPeriodic);
      sp.real[static_cast<std::size_t>(py) * width_ + px] += v;
    }
    if (!any) return false;
    fftw_execute_dft_r2c(sp.forward, sp.real.get(), sp.acc.get());
    for (std::size_t k = 0; k < sp.bins; ++k) out[k] = sp.acc[k][0] * norm;
    return true;
  };
  for (int s = 1; s <= scales_; ++s) {
    const int spacing = CouplingKernels::spacing(s);
    for (Orientation a : kOrientations)
      for (Orientation b : kOrientations) {
        const std::size_t slot = (static_cast<std::size_t>(s - 1) * 9 + static_cast<std::size_t>(a) * 3 +
                                  static_cast<std::size_t>(b)) * sp.bins;
        const auto& taps = kernels_->taps(s, a, b);
        if (kernel_spectrum(taps, spacing, true, sp.j_hat.data() + slot)) sp.j_any[s - 1] = 1;
        if (kernel_spectrum(taps, spacing, false, sp.w_hat.data() + slot)) sp.w_any[s - 1] = 1;
      }
  }
}

Lattice::~Lattice() = default;

void Lattice::lateral(const double* gx, double* exc, double* inh) const {
  if (params_.lateral == LateralMethod::kDirect) {
    lateral_direct(gx, exc, inh);
  } else {
    lateral_spectral(gx, exc, inh);
  }
}

void Lattice::lateral_direct(const double* gx, double* exc, double* inh) const {
  const KernelParams& kp = kernels_->params();
  double* mix = ws_->mix.data();
  const int w = width_, h = height_;
  for (int s = 1; s <= scales_; ++s) {
    std::fill(ws_->mix.begin(), ws_->mix.end(), 0.0);
    for (int src = 1; src <= scales_; ++src) {
      const double lam = kp.lambda_at(std::abs(s - src));
      if (lam == 0.0) continue;
      for (Orientation b : kOrientations) {
        const double* g = gx + LatticeState::plane_index(src, b) * plane_size_;
        double* m = mix + static_cast<std::size_t>(b) * plane_size_;
        for (std::size_t i = 0; i < plane_size_; ++i) m[i] += lam * g[i];
      }
    }
    const int spacing = CouplingKernels::spacing(s);
    for (Orientation a : kOrientations) {
      double* e = exc + LatticeState::plane_index(s, a) * plane_size_;
      double* n = inh + LatticeState::plane_index(s, a) * plane_size_;
      std::fill(e, e + plane_size_, 0.0);
      std::fill(n, n + plane_size_, 0.0);
      for (Orientation b : kOrientations) {
        const double* m = mix + static_cast<std::size_t>(b) * plane_size_;
        for (const Tap& t : kernels_->taps(s, a, b)) {
          const int ox = t.kx * spacing, oy = t.ky * spacing;
          for (int y = 0; y < h; ++y) {
            const double* srow = m + static_cast<std::size_t>(boundary_index(y + oy, h, Boundary::kPeriodic)) * w;
            const std::size_t base = static_cast<std::size_t>(y) * w;
            for (int x = 0; x < w; ++x) {
              const double v = srow[boundary_index(x + ox, w, Boundary::kPeriodic)];
              if (t.j != 0.0) e[base + x] += t.j * v;
              if (t.w != 0.0) n[base + x] += t.w * v;
            }
          }
        }
      }
    }
  }
}

void Lattice::lateral_spectral(const double* gx, double* exc, double* inh) const {
  Spectral& sp = *spectral_;
  const KernelParams& kp = kernels_->params();
  const std::size_t bins = sp.bins;
  const int planes = 3 * scales_;
  // Silent planes have a zero spectrum; skipping them leaves the sums unchanged.
  std::vector<char>& active = sp.active;
  active.assign(static_cast<std::size_t>(planes), 0);
  for (int p = 0; p < planes; ++p) {
    const double* g = gx + p * plane_size_;
    if (std::none_of(g, g + plane_size_, [](double v) { return v != 0.0; })) continue;
    active[static_cast<std::size_t>(p)] = 1;
    std::copy(g, g + plane_size_, sp.real.get());
    fftw_execute_dft_r2c(sp.forward, sp.real.get(), sp.spectra.get() + static_cast<std::size_t>(p) * bins);
  }
  auto* spectra = reinterpret_cast<double*>(sp.spectra.get());
  auto* mixed = reinterpret_cast<double*>(sp.mixed.get());
  auto* acc = reinterpret_cast<double*>(sp.acc.get());

  for (int s = 1; s <= scales_; ++s) {
    const bool need_j = sp.j_any[s - 1], need_w = sp.w_any[s - 1];
    bool mixed_any[3] = {false, false, false};
    if (need_j || need_w) {
      std::fill(mixed, mixed + 2 * bins * 3, 0.0);
      for (int src = 1; src <= scales_; ++src) {
        const double lam = kp.lambda_at(std::abs(s - src));
        if (lam == 0.0) continue;
        for (Orientation b : kOrientations) {
          const int p = LatticeState::plane_index(src, b);
          if (!active[static_cast<std::size_t>(p)]) continue;
          mixed_any[static_cast<int>(b)] = true;
          simd_.axpy(lam, spectra + 2 * bins * p, mixed + 2 * bins * static_cast<std::size_t>(b), 2 * bins);
        }
      }
    }
    const bool any_source = mixed_any[0] || mixed_any[1] || mixed_any[2];
    for (Orientation a : kOrientations) {
      const std::size_t out = LatticeState::plane_index(s, a) * plane_size_;
      for (int pass = 0; pass < 2; ++pass) {
        const bool need = (pass == 0 ? need_j : need_w) && any_source;
        double* dst = (pass == 0 ? exc : inh) + out;
        if (!need) {
          std::fill(dst, dst + plane_size_, 0.0);
          continue;
        }
        const std::vector<double>& hat = pass == 0 ? sp.j_hat : sp.w_hat;
        std::fill(acc, acc + 2 * bins, 0.0);
        for (Orientation b : kOrientations) {
          if (!mixed_any[static_cast<int>(b)]) continue;
          const std::size_t slot =
              (static_cast<std::size_t>(s - 1) * 9 + static_cast<std::size_t>(a) * 3 + static_cast<std::size_t>(b)) *
              bins;
          simd_.spectral_mac(acc, hat.data() + slot, mixed + 2 * bins * static_cast<std::size_t>(b), bins);
        }
        fftw_execute_dft_c2r(sp.inverse, sp.acc.get(), sp.real.get());
        std::copy(sp.real.get(), sp.real.get() + plane_size_, dst);
      }
    }
  }
}

void Lattice::local_rhs(const double* x, const double* y, const double* gx, const double* exc,
                        const double* inh, const double* input, const double* noise, double* dx,
                        double* dy, double* gy, std::size_t stride, std::size_t n,
                        const simd::Rk4Stage* stage) const {
  const std::size_t planes = 3 * static_cast<std::size_t>(scales_);
  for (std::size_t p = 0; p < planes; ++p) simd_.activate(y + p * stride, gy + p * stride, n, params_.gy);
  for (int s = 1; s <= scales_; ++s) {
    for (Orientation o : kOrientations) {
      const std::size_t off = LatticeState::plane_index(s, o) * stride;
      simd::RhsArgs a;
      a.x = x + off;
      a.y = y + off;
      a.gx = gx + off;
      a.gy = gy + off;
      if (params_.psi_orientation != 0.0) {
        for (Orientation other : kOrientations) {
          if (other == o) continue;
          a.neighbor_gy[a.neighbors] = gy + LatticeState::plane_index(s, other) * stride;
          a.neighbor_weight[a.neighbors++] = params_.psi_orientation;
        }
      }
      if (params_.psi_scale != 0.0) {
        for (int ds : {-1, 1}) {
          if (s + ds < 1 || s + ds > scales_) continue;
          a.neighbor_gy[a.neighbors] = gy + LatticeState::plane_index(s + ds, o) * stride;
          a.neighbor_weight[a.neighbors++] = params_.psi_scale;
        }
      }
      a.exc = exc ? exc + off : nullptr;
      a.inh = inh ? inh + off : nullptr;
      a.input = input ? input + off : nullptr;
      a.noise = noise ? noise + off : nullptr;
      a.alpha_x = params_.alpha_x;
      a.alpha_y = params_.alpha_y;
      a.j0 = params_.j0;
      a.i0 = params_.i0;
      a.ic = params_.ic;
      a.y_self_sign = params_.y_self_sign;
      if (stage) {
        simd::Rk4Stage st = *stage;
        st.base_x += off;
        st.base_y += off;
        st.acc_x += off;
        st.acc_y += off;
        if (st.next_x) {
          st.next_x += off;
          st.next_y += off;
        }
        simd_.rk4_stage(a, st, n);
      } else {
        a.dx = dx + off;
        a.dy = dy + off;
        simd_.hypercolumn_rhs(a, n);
      }
    }
  }
}

namespace {

// Classical RK4 over one step for a local right-hand side `f(xs, ys, k)` that
// writes stage k into kx[k], ky[k].
template <class F>
void rk4_combine(const simd::KernelTable& k, double dt, double* x, double* y, std::vector<double>* kx,
                 std::vector<double>* ky, double* xs, double* ys, std::size_t n, F&& f) {
  f(static_cast<const double*>(x), static_cast<const double*>(y), 0);
  static constexpr double kStage[3] = {0.5, 0.5, 1.0};
  for (int s = 1; s <= 3; ++s) {
    k.xpay(x, kStage[s - 1] * dt, kx[s - 1].data(), xs, n);
    k.xpay(y, kStage[s - 1] * dt, ky[s - 1].data(), ys, n);
    f(static_cast<const double*>(xs), static_cast<const double*>(ys), s);
  }
  const double w1 = dt / 6.0, w2 = dt / 3.0;
  k.axpy(w1, kx[0].data(), x, n);
  k.axpy(w2, kx[1].data(), x, n);
  k.axpy(w2, kx[2].data(), x, n);
  k.axpy(w1, kx[3].data(), x, n);
  k.axpy(w1, ky[0].data(), y, n);
  k.axpy(w2, ky[1].data(), y, n);
  k.axpy(w2, ky[2].data(), y, n);
  k.axpy(w1, ky[3].data(), y, n);
}

}  // namespace

void Lattice::step(LatticeState& state, const LatticeInput& input, std::span<const double> noise) const {
  const std::size_t total = plane_size_ * 3 * static_cast<std::size_t>(scales_);
  if (state.width != width_ || state.height != height_ || state.scales != scales_ || state.x.size() != total) {
    throw ValidationError("lattice state does not match kernel dimensions");
  }
  if (input.width != width_ || input.height != height_ || input.scales != scales_ || input.values.size() != total) {
    throw ValidationError("lattice input does not match kernel dimensions");
  }
  if (!noise.empty() && noise.size() != total) throw ValidationError("noise field size mismatch");

  Workspace& ws = *ws_;
  const double dt = params_.dt;
  const double* in = input.values.data();
  const double* nz = noise.empty() ? nullptr : noise.data();
  double* x = state.x.data();
  double* y = state.y.data();
  const std::size_t N = plane_size_;

  simd_.activate(x, ws.gx.data(), total, params_.gx);
  lateral(ws.gx.data(), ws.exc.data(), ws.inh.data());

  switch (params_.integrator) {
    case Integrator::kEuler:
      local_rhs(x, y, ws.gx.data(), ws.exc.data(), ws.inh.data(), in, nz, ws.kx[0].data(), ws.ky[0].data(),
                ws.gy.data(), N, N);
      simd_.axpy(dt, ws.kx[0].data(), x, total);
      simd_.axpy(dt, ws.ky[0].data(), y, total);
      break;
    case Integrator::kRk4:
      rk4_combine(simd_, dt, x, y, ws.kx, ws.ky, ws.xs.data(), ws.ys.data(), total,
                  [&](const double* xs, const double* ys, int k) {
                    if (k > 0) {
                      simd_.activate(xs, ws.gx.data(), total, params_.gx);
                      lateral(ws.gx.data(), ws.exc.data(), ws.inh.data());
                    }
                    local_rhs(xs, ys, ws.gx.data(), ws.exc.data(), ws.inh.data(), in, nz, ws.kx[k].data(),
                              ws.ky[k].data(), ws.gy.data(), N, N);
                  });
      break;
    case Integrator::kSplitRk4: {
      // The lateral input is frozen, so the remaining dynamics couple only
      // the nodes of one hypercolumn; integrate tile by tile in cache.
      const std::size_t planes = 3 * static_cast<std::size_t>(scales_);
      Tile& t = ws.tile;
      for (std::size_t c = 0; c < N; c += kTile) {
        const std::size_t n = std::min(kTile, N - c);
        auto gather = [&](const double* src, std::vector<double>& dst) {
          for (std::size_t p = 0; p < planes; ++p) std::copy_n(src + p * N + c, n, dst.data() + p * kTile);
        };
        gather(x, t.x);
        gather(y, t.y);
        gather(ws.exc.data(), t.exc);
        gather(ws.inh.data(), t.inh);
        gather(in, t.in);
        if (nz) gather(nz, t.noise);
        std::copy(t.x.begin(), t.x.end(), t.ax.begin());
        std::copy(t.y.begin(), t.y.end(), t.ay.begin());
        static constexpr double kNext[3] = {0.5, 0.5, 1.0};
        const double weight[4] = {dt / 6.0, dt / 3.0, dt / 3.0, dt / 6.0};
        const double* cx = t.x.data();
        const double* cy = t.y.data();
        for (int k = 0; k < 4; ++k) {
          for (std::size_t p = 0; p < planes; ++p)
            simd_.activate(cx + p * kTile, t.gx.data() + p * kTile, n, params_.gx);
          simd::Rk4Stage st;
          st.base_x = t.x.data();
          st.base_y = t.y.data();
          st.acc_x = t.ax.data();
          st.acc_y = t.ay.data();
          if (k < 3) {
            st.next_x = t.xs.data();
            st.next_y = t.ys.data();
            st.w_next = kNext[k] * dt;
          }
          st.w_acc = weight[k];
          local_rhs(cx, cy, t.gx.data(), t.exc.data(), t.inh.data(), t.in.data(), nz ? t.noise.data() : nullptr,
                    nullptr, nullptr, t.gy.data(), kTile, n, &st);
          cx = t.xs.data();
          cy = t.ys.data();
        }
        for (std::size_t p = 0; p < planes; ++p) {
          std::copy_n(t.ax.data() + p * kTile, n, x + p * N + c);
          std::copy_n(t.ay.data() + p * kTile, n, y + p * N + c);
        }
      }
      break;
    }
  }
  state.t += dt;

  // Independent partial sums; a NaN or infinity anywhere poisons one of them.
  double check[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= total; i += 4)
    for (std::size_t l = 0; l < 4; ++l) check[l] += x[i + l] + y[i + l];
  for (; i < total; ++i) check[0] += x[i] + y[i];
  if (!std::isfinite(check[0] + check[1] + check[2] + check[3])) {
    std::ostringstream msg;
    msg << "lattice diverged at t=" << state.t << " (dt=" << dt << ", integrator=" << to_string(params_.integrator)
        << ", j0=" << params_.j0 << ", i0=" << params_.i0 << ", ic=" << params_.ic << ")";
    throw DivergenceError(msg.str());
  }
}

struct NoiseSource::Impl {
  boost::random::mt19937_64 engine;
  boost::random::normal_distribution<double> normal;  // ziggurat
  double sd;
};

NoiseSource::NoiseSource(std::uint64_t seed, double sd) : impl_(std::make_shared<Impl>()) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  impl_->engine.seed(seq);
  impl_->sd = sd;
}

void NoiseSource::fill(std::span<double> out) {
  if (impl_->sd == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  for (double& v : out) v = impl_->sd * impl_->normal(impl_->engine);
}

std::uint64_t channel_seed(std::uint64_t seed, Channel c) {
  return seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(c) + 1;
}

Plane ConspicuityResponse::plane(const std::vector<double>& v, int s, Orientation o) const {
  Plane p(width, height);
  const std::size_t n = p.size();
  const auto first = v.begin() + static_cast<std::ptrdiff_t>(LatticeState::plane_index(s, o) * n);
  std::copy(first, first + static_cast<std::ptrdiff_t>(n), p.data());
  return p;
}

namespace {

// x' <= -ax x + max(I) + I0 whenever every rate is zero, since inhibition is
// nonnegative. If that bound stays under threshold the lattice never fires.
bool quiescent(const LatticeInput& in, const LatticeParams& p) {
  if (!(p.alpha_x > 0.0) || p.psi_orientation < 0.0 || p.psi_scale < 0.0) return false;
  if (p.gy.slope1 < 0.0 || p.gy.slope2 < 0.0 || !(p.gx.threshold > 0.0)) return false;
  if (p.alpha_x * p.dt > 0.5) return false;
  const double peak = in.values.empty() ? 0.0 : *std::max_element(in.values.begin(), in.values.end());
  return peak + p.i0 < p.alpha_x * p.gx.threshold;
}

}  // namespace

ConspicuityResponse simulate_channel(const LatticeInput& on, const LatticeInput& off,
                                     std::shared_ptr<const CouplingKernels> kernels,
                                     const LatticeParams& params, Channel channel, const TraceFn& trace) {
  params.validate();
  if (on.width != off.width || on.height != off.height || on.scales != off.scales) {
    throw ValidationError("ON and OFF inputs differ in shape");
  }
  Lattice lattice(std::move(kernels), params);
  LatticeState s_on(on.width, on.height, on.scales);
  LatticeState s_off(on.width, on.height, on.scales);
  const std::size_t total = s_on.x.size();

  NoiseSource noise(channel_seed(params.seed, channel), params.noise_sd);
  std::vector<double> field(params.noise_sd > 0.0 ? total : 0);
  std::vector<double> rate(total);

  ConspicuityResponse r;
  r.channel = channel;
  r.width = on.width;
  r.height = on.height;
  r.scales = on.scales;
  r.mean_rate_on.assign(total, 0.0);
  r.mean_rate_off.assign(total, 0.0);

  // Silent lattices keep a zero mean rate; traces still need every step.
  const bool run_on = trace || !quiescent(on, params);
  const bool run_off = trace || !quiescent(off, params);
  if (!run_on && !run_off) return r;

  const auto& k = simd::kernels();
  const int steps = params.steps();
  const int first_sample = static_cast<int>(std::lround(params.avg_start / params.dt));
  int samples = 0;
  for (int n = 0; n < steps; ++n) {
    if (n >= first_sample) {
      if (run_on) {
        k.activate(s_on.x.data(), rate.data(), total, params.gx);
        k.axpy(1.0, rate.data(), r.mean_rate_on.data(), total);
      }
      if (run_off) {
        k.activate(s_off.x.data(), rate.data(), total, params.gx);
        k.axpy(1.0, rate.data(), r.mean_rate_off.data(), total);
      }
      ++samples;
    }
    if (!field.empty()) noise.fill(field);
    if (run_on) lattice.step(s_on, on, field);
    if (run_off) lattice.step(s_off, off, field);
    if (trace) {
      trace(s_on.t, s_on, 0);
      trace(s_off.t, s_off, 1);
    }
  }
  const double inv = 1.0 / samples;
  for (std::size_t i = 0; i < total; ++i) {
    r.mean_rate_on[i] *= inv;
    r.mean_rate_off[i] *= inv;
  }
  return r;
}

std::vector<double> conspicuity(const ConspicuityResponse& r) {
  std::vector<double> out(r.mean_rate_on.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = r.mean_rate_on[i] + r.mean_rate_off[i];
  return out;
}

}  // namespace v1sal

// SPDX-License-Identifier: Apache-2.0
#include "gaborodo/sensor.hpp"

#include <algorithm>
#include <cmath>

#include "gaborodo/csv.hpp"
#include "gaborodo/rng.hpp"

namespace gaborodo {

void SensorConfig::validate() const {
  require(d_m > 0 && h_nom_m > 0 && gain > 0 && v_clip > 0, "sensor: lengths/voltages must be > 0");
  require(fov_rad > 0 && fov_rad < kPi, "sensor: fov must be in (0, pi)");
  require(view_px >= 16, "sensor: view_px too small");
  require(read_noise_v >= 0, "sensor: read noise must be >= 0");
  require(adc_bits >= 8 && adc_bits <= 16, "sensor: adc_bits must be in [8, 16]");
  require(blur_sigma_px >= 0, "sensor: blur sigma must be >= 0");
  require(falloff_exp_d >= 0 && falloff_exp_omega >= 0, "sensor: falloff exponents must be >= 0");
}

std::array<double, 2> detector_offset(const SensorConfig& cfg, Channel k) {
  double hd = cfg.d_m / 2.0;
  switch (k) {
    case Channel::CosPlus: return {+hd, +hd};
    case Channel::CosMinus: return {-hd, +hd};
    case Channel::SinPlus: return {+hd, -hd};
    case Channel::SinMinus: return {-hd, -hd};
  }
  return {0, 0};
}

double footprint(const SensorConfig& cfg, double h_m) {
  require(h_m > 0, "footprint: height must be positive");
  return 2.0 * h_m * std::tan(cfg.fov_rad / 2.0);
}

double ground_frequency(const GaborParams& p, const SensorConfig& cfg, double h_m) {
  return 2.0 * p.xi0 / footprint(cfg, h_m);
}

GroundWindow detector_window(const SensorConfig& cfg, double h_m, const Pose2& pose, Channel k) {
  require(h_m > 0, "detector_window: height must be positive");
  auto off = detector_offset(cfg, k);
  double scale = 1.0 - h_m / cfg.h_nom_m;  // 0 at nominal height
  double lx = off[0] * scale;
  double ly = off[1] * scale;
  double c = std::cos(pose.yaw), s = std::sin(pose.yaw);
  GroundWindow w;
  w.cx = pose.x + c * lx - s * ly;
  w.cy = pose.y + s * lx + c * ly;
  w.extent_m = footprint(cfg, h_m);
  w.yaw_rad = pose.yaw;
  return w;
}

Grid2D render_view(const TextureField& field, const GroundWindow& window, int view_px) {
  require(view_px >= 2, "render_view: view_px too small");
  require(window.extent_m > 0, "render_view: empty window");
  Grid2D view(view_px, view_px);
  const int n = view_px;
  const double half = window.extent_m / 2.0;
  const double c = std::cos(window.yaw_rad), s = std::sin(window.yaw_rad);
  const double du = 2.0 / n * half;  // meters per pixel step in local coords
  for (int r = 0; r < n; ++r) {
    double vy = MaskRaster::u_at(r, n) * half;  // lateral local coordinate
    double ux0 = MaskRaster::u_at(0, n) * half;
    // Incremental sweep along the row: start point plus per-column step.
    double gx = window.cx + c * ux0 - s * vy;
    double gy = window.cy + s * ux0 + c * vy;
    double* out = &view.at(r, 0);
    for (int j = 0; j < n; ++j) {
      out[j] = field.sample(gx, gy);
      gx += c * du;
      gy += s * du;
    }
  }
  return view;
}

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  if (sigma <= 0) return {1.0};
  int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    double v = std::exp(-0.5 * (i / sigma) * (i / sigma));
    k[static_cast<size_t>(i + radius)] = v;
    sum += v;
  }
  for (auto& v : k) v /= sum;
  return k;
}

// Separable blur with replicate borders (preserves uniform fields exactly).
Grid2D blur_replicate(const Grid2D& in, const std::vector<double>& kernel) {
  if (kernel.size() == 1) return in;
  int radius = static_cast<int>(kernel.size() / 2);
  Grid2D tmp(in.rows, in.cols), out(in.rows, in.cols);
  for (int r = 0; r < in.rows; ++r) {
    for (int c = 0; c < in.cols; ++c) {
      double acc = 0.0;
      for (int j = -radius; j <= radius; ++j) {
        int cc = std::clamp(c + j, 0, in.cols - 1);
        acc += kernel[static_cast<size_t>(j + radius)] * in.at(r, cc);
      }
      tmp.at(r, c) = acc;
    }
  }
  for (int c = 0; c < in.cols; ++c) {
    for (int r = 0; r < in.rows; ++r) {
      double acc = 0.0;
      for (int j = -radius; j <= radius; ++j) {
        int rr = std::clamp(r + j, 0, in.rows - 1);
        acc += kernel[static_cast<size_t>(j + radius)] * tmp.at(rr, c);
      }
      out.at(r, c) = acc;
    }
  }
  return out;
}

// Adjoint of blur_replicate: sum_u (K*V)(u) A(u) == sum_u V(u) (K^T A)(u).
// With replicate borders the adjoint folds out-of-range taps onto the edge
// samples.
Grid2D blur_adjoint_replicate(const Grid2D& in, const std::vector<double>& kernel) {
  if (kernel.size() == 1) return in;
  int radius = static_cast<int>(kernel.size() / 2);
  Grid2D tmp(in.rows, in.cols, 0.0), out(in.rows, in.cols, 0.0);
  for (int c = 0; c < in.cols; ++c) {
    for (int r = 0; r < in.rows; ++r) {
      double a = in.at(r, c);
      for (int j = -radius; j <= radius; ++j) {
        int rr = std::clamp(r + j, 0, in.rows - 1);
        tmp.at(rr, c) += kernel[static_cast<size_t>(j + radius)] * a;
      }
    }
  }
  for (int r = 0; r < in.rows; ++r) {
    for (int c = 0; c < in.cols; ++c) {
      double a = tmp.at(r, c);
      for (int j = -radius; j <= radius; ++j) {
        int cc = std::clamp(c + j, 0, in.cols - 1);
        out.at(r, cc) += kernel[static_cast<size_t>(j + radius)] * a;
      }
    }
  }
  return out;
}

Grid2D falloff_grid(const SensorConfig& cfg, int n) {
  Grid2D f(n, n);
  double tan_half = std::tan(cfg.fov_rad / 2.0);
  double e = cfg.falloff_exp_d + cfg.falloff_exp_omega;
  for (int r = 0; r < n; ++r) {
    double v = MaskRaster::u_at(r, n);
    for (int c = 0; c < n; ++c) {
      double u = MaskRaster::u_at(c, n);
      double tb = std::hypot(u, v) * tan_half;  // tan of the off-nadir angle
      double cos_b = 1.0 / std::sqrt(1.0 + tb * tb);
      f.at(r, c) = e == 0.0 ? 1.0 : std::pow(cos_b, e);
    }
  }
  return f;
}

}  // namespace

double integrate_detector(const Grid2D& view, const Grid2D& mask, const SensorConfig& cfg) {
  require(view.same_shape(mask), "integrate_detector: view/mask resolution mismatch");
  require(view.rows == view.cols, "integrate_detector: square views expected");
  Grid2D blurred = blur_replicate(view, gaussian_kernel(cfg.blur_sigma_px));
  Grid2D fall = falloff_grid(cfg, view.rows);
  double acc = 0.0;
  for (size_t i = 0; i < blurred.size(); ++i) acc += blurred.data[i] * fall.data[i] * mask.data[i];
  return acc;
}

double adc_step(const SensorConfig& cfg) {
  return cfg.v_clip / (std::pow(2.0, cfg.adc_bits) - 1.0);
}

double electronics(double raw, const SensorConfig& cfg, Rng& rng) {
  double v = raw * cfg.gain;
  if (cfg.read_noise_v > 0) v += cfg.read_noise_v * rng.gaussian();
  double step = adc_step(cfg);
  v = std::round(v / step) * step;
  return std::clamp(v, 0.0, cfg.v_clip);
}

SignalTrace differential(const FourChannelTrace& raw) {
  SignalTrace s;
  s.t = raw.t;
  s.s_cos.resize(raw.size());
  s.s_sin.resize(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    s.s_cos[i] = raw.cos_p[i] - raw.cos_m[i];
    s.s_sin[i] = raw.sin_p[i] - raw.sin_m[i];
  }
  return s;
}

double SignalTrace::rate_hz() const {
  require(t.size() >= 2, "trace: need at least 2 samples");
  return static_cast<double>(t.size() - 1) / (t.back() - t.front());
}

HeightProfile HeightProfile::constant(double h_m) {
  HeightProfile h;
  h.mode = Mode::Constant;
  h.constant_h_m = h_m;
  return h;
}

HeightProfile HeightProfile::per_window(double range_pct, double window_s) {
  HeightProfile h;
  h.mode = Mode::PerWindow;
  h.range_pct = range_pct;
  h.window_s = window_s;
  return h;
}

namespace {

std::vector<double> build_heights(const HeightProfile& hp, const SensorConfig& cfg,
                                  const std::vector<double>& t, uint64_t seed) {
  std::vector<double> h(t.size(), cfg.h_nom_m);
  Rng rng(Rng::derive(seed, 0x48a1));
  switch (hp.mode) {
    case HeightProfile::Mode::Constant: {
      double v = hp.constant_h_m > 0 ? hp.constant_h_m : cfg.h_nom_m;
      std::fill(h.begin(), h.end(), v);
      break;
    }
    case HeightProfile::Mode::PerWindow: {
      double span = hp.range_pct / 100.0;
      double t0 = t.front();
      long cur_block = -1;
      double cur_h = cfg.h_nom_m;
      for (size_t i = 0; i < t.size(); ++i) {
        long block = static_cast<long>(std::floor((t[i] - t0) / hp.window_s + 1e-12));
        if (block != cur_block) {
          cur_block = block;
          cur_h = cfg.h_nom_m * (1.0 + rng.uniform(-span, span));
        }
        h[i] = cur_h;
      }
      break;
    }
    case HeightProfile::Mode::Smooth: {
      double span = hp.range_pct / 100.0;
      double dt = t.size() >= 2 ? (t[1] - t[0]) : 1e-3;
      double a = dt / (hp.smooth_tau_s + dt);
      double y = 0.0;
      std::vector<double> delta(t.size());
      double peak = 1e-12;
      for (size_t i = 0; i < t.size(); ++i) {
        y += a * (rng.uniform(-1.0, 1.0) - y);
        delta[i] = y;
        peak = std::max(peak, std::abs(y));
      }
      for (size_t i = 0; i < t.size(); ++i) h[i] = cfg.h_nom_m * (1.0 + span * delta[i] / peak);
      break;
    }
  }
  return h;
}

}  // namespace

SimResult simulate(const TextureField& field, const MaskRaster& masks, const SensorConfig& cfg,
                   const PlanarPath& path_in, const HeightProfile& heights, uint64_t seed) {
  cfg.validate();
  field.validate();
  require(masks.resolution_px == cfg.view_px,
          "simulate: mask raster resolution must match sensor view_px");
  require(path_in.size() >= 2, "simulate: empty path");
  path_in.validate();

  PlanarPath resampled;
  const PlanarPath* path = &path_in;
  if (std::abs(path_in.rate_hz() - kSimRateHz) > 1e-6) {
    resampled = resample(path_in, kSimRateHz);
    path = &resampled;
  }

  const int n = cfg.view_px;
  const auto kernel = gaussian_kernel(cfg.blur_sigma_px);
  const Grid2D fall = falloff_grid(cfg, n);

  // The sine masks are mounted rotated 180 degrees about the optical axis,
  // i.e. the sine pair realizes -G_sin; this makes the analytic signal
  // s_cos + i*s_sin rotate at +xi_g*v for forward motion. G_sin is odd, so
  // the rotated pair is exactly the swapped (sin_minus, sin_plus) rasters.
  const Grid2D* channel_mask[4] = {&masks.cos_plus, &masks.cos_minus, &masks.sin_minus,
                                   &masks.sin_plus};

  // Fold falloff and mask through the blur adjoint once per channel; per
  // step each detector output is then a single dot product with its view.
  std::array<Grid2D, 4> weights;
  for (int k = 0; k < 4; ++k) {
    Grid2D fm(n, n);
    for (size_t i = 0; i < fm.size(); ++i) fm.data[i] = fall.data[i] * channel_mask[k]->data[i];
    weights[static_cast<size_t>(k)] = blur_adjoint_replicate(fm, kernel);
  }

  const size_t steps = path->size();
  SimResult res;
  res.raw.t = path->t;
  res.raw.cos_p.resize(steps);
  res.raw.cos_m.resize(steps);
  res.raw.sin_p.resize(steps);
  res.raw.sin_m.resize(steps);
  res.height_m = build_heights(heights, cfg, path->t, seed);

  Rng noise_rng(Rng::derive(seed, 0xe1ec));
  Grid2D view;
  std::vector<double>* out[4] = {&res.raw.cos_p, &res.raw.cos_m, &res.raw.sin_p, &res.raw.sin_m};

  for (size_t i = 0; i < steps; ++i) {
    Pose2 pose = path->pose(i);
    double h = res.height_m[i];
    bool shared = std::abs(h - cfg.h_nom_m) < 1e-12;  // all four windows coincide
    if (shared) {
      GroundWindow w = detector_window(cfg, h, pose, Channel::CosPlus);
      view = render_view(field, w, n);
      for (int k = 0; k < 4; ++k) {
        double raw = 0.0;
        const double* wv = weights[static_cast<size_t>(k)].data.data();
        const double* vv = view.data.data();
        for (size_t px = 0; px < view.size(); ++px) raw += vv[px] * wv[px];
        (*out[k])[i] = electronics(raw, cfg, noise_rng);
      }
    } else {
      for (int k = 0; k < 4; ++k) {
        GroundWindow w = detector_window(cfg, h, pose, static_cast<Channel>(k));
        view = render_view(field, w, n);
        double raw = 0.0;
        const double* wv = weights[static_cast<size_t>(k)].data.data();
        const double* vv = view.data.data();
        for (size_t px = 0; px < view.size(); ++px) raw += vv[px] * wv[px];
        (*out[k])[i] = electronics(raw, cfg, noise_rng);
      }
    }
  }
  res.diff = differential(res.raw);
  return res;
}

void save_four_channel_csv(const FourChannelTrace& tr, const std::filesystem::path& file) {
  write_csv(file, {"t", "s_cos_p", "s_cos_m", "s_sin_p", "s_sin_m"},
            {&tr.t, &tr.cos_p, &tr.cos_m, &tr.sin_p, &tr.sin_m},
            {"%.6f", "%.9f", "%.9f", "%.9f", "%.9f"});
}

FourChannelTrace load_four_channel_csv(const std::filesystem::path& file) {
  CsvTable t = read_csv(file);
  FourChannelTrace tr;
  tr.t = t.col("t");
  tr.cos_p = t.col("s_cos_p");
  tr.cos_m = t.col("s_cos_m");
  tr.sin_p = t.col("s_sin_p");
  tr.sin_m = t.col("s_sin_m");
  return tr;
}

void save_signal_csv(const SignalTrace& tr, const std::filesystem::path& file) {
  write_csv(file, {"t", "s_cos", "s_sin"}, {&tr.t, &tr.s_cos, &tr.s_sin}, {"%.6f", "%.9f", "%.9f"});
}

SignalTrace load_signal_csv(const std::filesystem::path& file) {
  CsvTable t = read_csv(file);
  SignalTrace tr;
  tr.t = t.col("t");
  tr.s_cos = t.col("s_cos");
  tr.s_sin = t.col("s_sin");
  return tr;
}

}  // namespace gaborodo

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gaborodo/common.hpp"
#include "gaborodo/mask.hpp"
#include "gaborodo/texture.hpp"
#include "gaborodo/trajectory.hpp"

namespace gaborodo {

/// Geometry and electronics constants of the 4-detector head.
struct SensorConfig {
  double d_m = 0.019;                  // inter-detector pitch
  double fov_rad = 70.0 * kPi / 180.0; // per-detector field of view
  double h_nom_m = 0.06;               // nominal standoff height
  int view_px = 128;                   // detector view resolution
  double gain = 1.22e-4;               // volts per unit integrated signal
  double read_noise_v = 175e-6;        // Gaussian read noise std
  int adc_bits = 12;
  double v_clip = 3.2;                 // saturation voltage
  double blur_sigma_px = 1.5;          // detector blur std (view pixels)
  double falloff_exp_d = 1.0;          // detector directional response cos^d
  double falloff_exp_omega = 3.0;      // foreshortening cos^w

  void validate() const;
};

/// Detector channels. The differential pairs are split along the
/// longitudinal (motion) axis and the quadrature pairs along the lateral
/// axis: cos+/cos- share a lateral offset, so a height change shifts both by
/// the same longitudinal phase and the quadrature relation between the cos
/// and sin pairs survives off-nominal heights (the pair amplitude fades
/// instead of the phase walking off).
enum class Channel { CosPlus = 0, CosMinus = 1, SinPlus = 2, SinMinus = 3 };

/// Detector position in the sensor frame (x forward, y left).
std::array<double, 2> detector_offset(const SensorConfig& cfg, Channel k);

/// Ground extent covered by one detector view at height h.
double footprint(const SensorConfig& cfg, double h_m);

/// Cycles/m of the projected mask carrier on the ground. The raster spans
/// u in [-1,1] across the footprint, so xi0 cycles per unit u project to
/// 2*xi0 cycles per footprint.
double ground_frequency(const GaborParams& p, const SensorConfig& cfg, double h_m);

/// Axis-aligned-square ground patch seen by one detector, in world frame.
struct GroundWindow {
  double cx = 0.0, cy = 0.0;  // center (m)
  double extent_m = 0.0;      // side length
  double yaw_rad = 0.0;       // orientation
};

/// Window for detector k at height h: centers coincide at h == h_nom and
/// move affinely with height (fixed chief-ray parallax).
GroundWindow detector_window(const SensorConfig& cfg, double h_m, const Pose2& pose, Channel k);

/// Bilinear resampling of the texture over the window into a view_px^2 view.
Grid2D render_view(const TextureField& field, const GroundWindow& window, int view_px);

/// Literal optical integration: blur the view, apply the cosine-power
/// falloffs, weight by the mask, sum. This is the reference path; simulate()
/// uses an algebraically identical precomputed-weights path.
double integrate_detector(const Grid2D& view, const Grid2D& mask, const SensorConfig& cfg);

/// Electronics chain: v = clip(quantize(raw*gain + N(0, read_noise)), 0, v_clip).
double electronics(double raw, const SensorConfig& cfg, class Rng& rng);

/// Quantizer step (2^adc_bits levels over [0, v_clip]).
double adc_step(const SensorConfig& cfg);

struct FourChannelTrace {
  std::vector<double> t;
  std::vector<double> cos_p, cos_m, sin_p, sin_m;
  size_t size() const { return t.size(); }
};

struct SignalTrace {
  std::vector<double> t;
  std::vector<double> s_cos, s_sin;
  size_t size() const { return t.size(); }
  double rate_hz() const;
};

SignalTrace differential(const FourChannelTrace& raw);

struct HeightProfile {
  enum class Mode { Constant, PerWindow, Smooth };
  Mode mode = Mode::Constant;
  double range_pct = 0.0;   // uniform +/- percent around h_nom (PerWindow/Smooth)
  double constant_h_m = 0;  // Constant mode override; 0 means h_nom
  double window_s = 1.0;    // PerWindow block length
  double smooth_tau_s = 0.2;

  static HeightProfile nominal() { return {}; }
  static HeightProfile constant(double h_m);
  static HeightProfile per_window(double range_pct, double window_s = 1.0);
};

struct SimResult {
  FourChannelTrace raw;
  SignalTrace diff;
  std::vector<double> height_m;  // per-sample standoff height used
};

/// Full pipeline over a 1 kHz path (other-rate paths are resampled first):
/// detector_window -> render_view -> optical integration -> electronics for
/// all four channels, then the differential pair. Deterministic per seed.
SimResult simulate(const TextureField& field, const MaskRaster& masks, const SensorConfig& cfg,
                   const PlanarPath& path, const HeightProfile& heights, uint64_t seed);

inline constexpr double kSimRateHz = 1000.0;

/// CSV: `t,s_cos_p,s_cos_m,s_sin_p,s_sin_m` / `t,s_cos,s_sin`; seconds with 6
/// decimals, volts with 9.
void save_four_channel_csv(const FourChannelTrace& tr, const std::filesystem::path& file);
FourChannelTrace load_four_channel_csv(const std::filesystem::path& file);
void save_signal_csv(const SignalTrace& tr, const std::filesystem::path& file);
SignalTrace load_signal_csv(const std::filesystem::path& file);

}  // namespace gaborodo

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <vector>

#include "gaborodo/common.hpp"
#include "gaborodo/sensor.hpp"

namespace gaborodo {

/// Raw-DAQ conditioning: notch, low-pass, polyphase decimation.
struct ConditioningConfig {
  double input_rate_hz = 41600.0;
  double notch_hz = 60.0;
  double notch_q = 30.0;
  double lowpass_hz = 450.0;
  int lowpass_order = 4;
  double output_rate_hz = 1000.0;

  void validate() const {
    require(input_rate_hz > 0 && output_rate_hz > 0, "conditioning: rates must be positive");
    require(lowpass_hz < output_rate_hz / 2.0 && output_rate_hz / 2.0 <= input_rate_hz / 2.0,
            "conditioning: need lowpass < output_rate/2 <= input_rate/2");
    require(notch_hz > 0 && notch_q > 0, "conditioning: bad notch parameters");
  }
};

/// Per channel: 60 Hz biquad notch, Butterworth low-pass, polyphase
/// decimation to the output rate; then the differential pair is formed.
SignalTrace condition(const FourChannelTrace& raw, const ConditioningConfig& cfg);

struct DecoderConfig {
  int window_len = 1000;       // samples per decoding window
  double rate_hz = 1000.0;
  int zero_pad_factor = 4;     // FFT length = next pow2 of window_len * this
  double f_min_hz = 0.5;       // exclude |f| below this from the peak search
  double confidence_threshold = 0.2;
  int median_len = 5;          // median filter over accepted estimates

  void validate() const {
    require(window_len >= 16, "decoder: window too short");
    require(rate_hz > 0, "decoder: rate must be positive");
    require(zero_pad_factor >= 1, "decoder: zero_pad_factor must be >= 1");
    require(f_min_hz >= 0, "decoder: f_min must be >= 0");
    require(confidence_threshold >= 0 && confidence_threshold <= 1, "decoder: bad threshold");
    require(median_len >= 1, "decoder: median length must be >= 1");
  }

  size_t fft_len() const;
  /// Frequency resolution of the analysis window (one DFT bin of the
  /// unpadded window).
  double bin_hz() const { return rate_hz / window_len; }
};

struct SpeedEstimate {
  double t_s = 0.0;        // timestamp of the window end
  double v_hat = 0.0;      // signed speed (m/s)
  double f_peak_hz = 0.0;  // signed dominant frequency
  double confidence = 0.0; // peak power / total power, in [0,1]
  bool accepted = false;
};

/// Decode one window of the quadrature pair. The analytic signal
/// z = s_cos + i*s_sin is mean-subtracted, Hann-windowed, zero-padded and
/// transformed; the dominant signed bin is refined by parabolic
/// interpolation on log magnitude. v_hat = f_peak / xi_ground.
/// All-zero input is not an error: confidence 0, accepted = false.
SpeedEstimate decode_window(const std::vector<double>& s_cos, const std::vector<double>& s_sin,
                            double xi_ground, const DecoderConfig& cfg);

/// Sliding 1 s windows at the given stride (1, 10 or 33 ms). Rejected
/// estimates are dropped; a median filter of cfg.median_len runs over the
/// accepted v_hat sequence.
std::vector<SpeedEstimate> decode_stream(const SignalTrace& trace, int stride_ms, double xi_ground,
                                         const DecoderConfig& cfg);

struct InstantFrequency {
  std::vector<double> f_hz;  // per-increment instantaneous frequency
  double f_median_hz = 0.0;
};

/// Phase-slope frequency estimate from atan2(s_sin, s_cos); degenerate
/// (near-zero amplitude) samples are excluded from the median. Diagnostic
/// cross-check for decode_window.
InstantFrequency instantaneous_frequency(const std::vector<double>& s_cos,
                                         const std::vector<double>& s_sin, double rate_hz);

/// Mean of the path's true speed over the final fraction of a window ending
/// at time t_end (the evaluation target convention).
double window_target_speed(const PlanarPath& path, double t_end, double tail_s = 0.1);

/// CSV `t,v_hat,f_peak,confidence,accepted`.
void save_estimates_csv(const std::vector<SpeedEstimate>& est, const std::filesystem::path& file);
std::vector<SpeedEstimate> load_estimates_csv(const std::filesystem::path& file);

}  // namespace gaborodo

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace gaborodo {

/// Second-order IIR section, direct form II transposed.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;  // a0 normalized to 1
  double s1 = 0.0, s2 = 0.0;

  double step(double x) {
    double y = b0 * x + s1;
    s1 = b1 * x - a1 * y + s2;
    s2 = b2 * x - a2 * y;
    return y;
  }
  void reset() { s1 = s2 = 0.0; }
};

/// RBJ-style notch at f0 with quality factor Q (exact zero at f0).
Biquad design_notch(double f0_hz, double q, double fs_hz);

/// Even-order Butterworth low-pass as cascaded biquads (bilinear transform,
/// prewarped so the -3 dB point lands on fc).
std::vector<Biquad> design_butterworth_lowpass(double fc_hz, double fs_hz, int order = 4);

/// Magnitude response of a biquad cascade at frequency f.
double cascade_gain(const std::vector<Biquad>& sections, double f_hz, double fs_hz);

/// Kaiser-windowed sinc low-pass prototype. cutoff_norm is the cutoff as a
/// fraction of the sampling rate (0 < cutoff_norm < 0.5); taps is made odd.
std::vector<double> design_kaiser_lowpass(size_t taps, double cutoff_norm, double beta);

/// Rational-rate polyphase resampler (up L, filter, down M) with group-delay
/// compensation; output sample n estimates the input at t = n*M/(L*fs_in).
class RationalResampler {
 public:
  RationalResampler(int up, int down, std::vector<double> fir);

  /// Convenience factory: anti-alias FIR designed for the given rates.
  static RationalResampler for_rates(double fs_in, double fs_out, double stop_atten_db = 70.0,
                                     double transition_hz = 80.0);

  std::vector<double> process(const std::vector<double>& x) const;
  int up() const { return up_; }
  int down() const { return down_; }

 private:
  int up_;
  int down_;
  std::vector<double> fir_;
};

std::vector<double> hann_window(size_t n);

/// Amplitude of the component at f_hz over samples [i0, i1) via complex
/// correlation. Meant for test/measurement use on steady-state segments.
double tone_amplitude(const std::vector<double>& x, double fs_hz, double f_hz, size_t i0, size_t i1);

}  // namespace gaborodo

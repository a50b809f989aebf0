// SPDX-License-Identifier: Apache-2.0
#include "gaborodo/dsp.hpp"

#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

#include "gaborodo/common.hpp"

namespace gaborodo {

Biquad design_notch(double f0_hz, double q, double fs_hz) {
  require(f0_hz > 0 && f0_hz < fs_hz / 2, "notch: f0 out of range");
  require(q > 0, "notch: Q must be positive");
  double w0 = 2.0 * kPi * f0_hz / fs_hz;
  double alpha = std::sin(w0) / (2.0 * q);
  double cw = std::cos(w0);
  double a0 = 1.0 + alpha;
  Biquad s;
  s.b0 = 1.0 / a0;
  s.b1 = -2.0 * cw / a0;
  s.b2 = 1.0 / a0;
  s.a1 = -2.0 * cw / a0;
  s.a2 = (1.0 - alpha) / a0;
  return s;
}

std::vector<Biquad> design_butterworth_lowpass(double fc_hz, double fs_hz, int order) {
  require(fc_hz > 0 && fc_hz < fs_hz / 2, "butterworth: fc out of range");
  require(order >= 2 && order % 2 == 0, "butterworth: order must be even >= 2");
  // Analog prototype pole pairs give section Q = 1/(2 sin(theta_k)). Each
  // section is the RBJ low-pass biquad, which applies the bilinear transform
  // with the response pinned at fc.
  std::vector<Biquad> sections;
  double w0 = 2.0 * kPi * fc_hz / fs_hz;
  double cw = std::cos(w0), sw = std::sin(w0);
  for (int k = 0; k < order / 2; ++k) {
    double theta = kPi * (2.0 * k + 1.0) / (2.0 * order);
    double q = 1.0 / (2.0 * std::sin(theta));
    double alpha = sw / (2.0 * q);
    double a0 = 1.0 + alpha;
    Biquad s;
    s.b0 = (1.0 - cw) / 2.0 / a0;
    s.b1 = (1.0 - cw) / a0;
    s.b2 = (1.0 - cw) / 2.0 / a0;
    s.a1 = -2.0 * cw / a0;
    s.a2 = (1.0 - alpha) / a0;
    sections.push_back(s);
  }
  return sections;
}

double cascade_gain(const std::vector<Biquad>& sections, double f_hz, double fs_hz) {
  std::complex<double> z = std::polar(1.0, -2.0 * kPi * f_hz / fs_hz);
  std::complex<double> h = 1.0;
  for (const auto& s : sections) {
    std::complex<double> num = s.b0 + s.b1 * z + s.b2 * z * z;
    std::complex<double> den = 1.0 + s.a1 * z + s.a2 * z * z;
    h *= num / den;
  }
  return std::abs(h);
}

namespace {

double bessel_i0(double x) {
  // Series expansion; converges quickly for the beta range used here.
  double sum = 1.0, term = 1.0;
  double half = x / 2.0;
  for (int k = 1; k < 64; ++k) {
    term *= (half / k) * (half / k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

}  // namespace

std::vector<double> design_kaiser_lowpass(size_t taps, double cutoff_norm, double beta) {
  require(cutoff_norm > 0 && cutoff_norm < 0.5, "kaiser fir: cutoff out of range");
  if (taps % 2 == 0) ++taps;
  std::vector<double> h(taps);
  double mid = (static_cast<double>(taps) - 1.0) / 2.0;
  double i0b = bessel_i0(beta);
  for (size_t n = 0; n < taps; ++n) {
    double m = static_cast<double>(n) - mid;
    double sinc = (m == 0.0) ? 2.0 * cutoff_norm
                             : std::sin(2.0 * kPi * cutoff_norm * m) / (kPi * m);
    double r = m / mid;
    double w = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
    h[n] = sinc * w;
  }
  // Unity DC gain.
  double s = std::accumulate(h.begin(), h.end(), 0.0);
  for (auto& v : h) v /= s;
  return h;
}

RationalResampler::RationalResampler(int up, int down, std::vector<double> fir)
    : up_(up), down_(down), fir_(std::move(fir)) {
  require(up_ > 0 && down_ > 0, "resampler: factors must be positive");
  require(fir_.size() % 2 == 1, "resampler: FIR length must be odd");
}

RationalResampler RationalResampler::for_rates(double fs_in, double fs_out, double stop_atten_db,
                                               double transition_hz) {
  require(fs_in > 0 && fs_out > 0 && fs_out < fs_in, "resampler: need fs_out < fs_in");
  // Reduce the rate ratio to the smallest integer up/down pair.
  long long num = std::llround(fs_out * 10.0);
  long long den = std::llround(fs_in * 10.0);
  long long g = std::gcd(num, den);
  int up = static_cast<int>(num / g);
  int down = static_cast<int>(den / g);
  double fs_up = fs_in * up;
  double cutoff = std::min(fs_in, fs_out) / 2.0;
  double beta = stop_atten_db > 50 ? 0.1102 * (stop_atten_db - 8.7)
                                   : 0.5842 * std::pow(stop_atten_db - 21.0, 0.4) +
                                         0.07886 * (stop_atten_db - 21.0);
  double dnorm = transition_hz / fs_up;
  size_t taps = static_cast<size_t>(std::ceil((stop_atten_db - 7.95) / (14.36 * dnorm)));
  if (taps % 2 == 0) ++taps;
  auto fir = design_kaiser_lowpass(taps, (cutoff - transition_hz / 2.0) / fs_up, beta);
  return RationalResampler(up, down, std::move(fir));
}

std::vector<double> RationalResampler::process(const std::vector<double>& x) const {
  if (x.empty()) return {};
  const long long L = up_, M = down_;
  const long long nh = static_cast<long long>(fir_.size());
  const long long delay = (nh - 1) / 2;
  const long long len_up = static_cast<long long>(x.size()) * L;
  const long long n_out = (len_up + M - 1) / M;
  std::vector<double> y(static_cast<size_t>(n_out), 0.0);
  for (long long n = 0; n < n_out; ++n) {
    // Upsampled center index for this output sample, including group delay.
    long long m0 = n * M + delay;
    // Only indices congruent to 0 mod L carry input samples.
    long long kmin = std::max<long long>(0, m0 - len_up + 1);
    long long k = kmin + ((m0 - kmin) % L);  // smallest k >= kmin with (m0-k) % L == 0
    double acc = 0.0;
    for (; k < nh; k += L) {
      long long idx = (m0 - k) / L;
      if (idx < 0) break;  // earlier taps reach before the signal start
      acc += fir_[static_cast<size_t>(k)] * x[static_cast<size_t>(idx)];
    }
    y[static_cast<size_t>(n)] = acc * static_cast<double>(L);
  }
  return y;
}

std::vector<double> hann_window(size_t n) {
  std::vector<double> w(n);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  for (size_t i = 0; i < n; ++i)
    w[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1)));
  return w;
}

double tone_amplitude(const std::vector<double>& x, double fs_hz, double f_hz, size_t i0, size_t i1) {
  require(i1 > i0 && i1 <= x.size(), "tone_amplitude: bad range");
  std::complex<double> acc = 0.0;
  for (size_t i = i0; i < i1; ++i) {
    double ph = -2.0 * kPi * f_hz * static_cast<double>(i) / fs_hz;
    acc += x[i] * std::polar(1.0, ph);
  }
  return 2.0 * std::abs(acc) / static_cast<double>(i1 - i0);
}

}  // namespace gaborodo

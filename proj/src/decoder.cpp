// SPDX-License-Identifier: Apache-2.0
#include "gaborodo/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "gaborodo/csv.hpp"
#include "gaborodo/dsp.hpp"
#include "gaborodo/fft.hpp"

namespace gaborodo {

SignalTrace condition(const FourChannelTrace& raw, const ConditioningConfig& cfg) {
  cfg.validate();
  require(raw.size() >= 16, "condition: input too short");
  double dt = (raw.t.back() - raw.t.front()) / static_cast<double>(raw.size() - 1);
  require(std::abs(1.0 / dt - cfg.input_rate_hz) < 1e-3 * cfg.input_rate_hz,
          "condition: input rate does not match config");
  for (size_t i = 1; i < raw.size(); ++i)
    require(std::abs((raw.t[i] - raw.t[i - 1]) - dt) < 1e-6 * dt + 1e-12,
            "condition: non-uniform input sampling");

  const std::vector<double>* chans[4] = {&raw.cos_p, &raw.cos_m, &raw.sin_p, &raw.sin_m};
  for (const auto* c : chans)
    for (double v : *c) require(std::isfinite(v), "condition: NaN sample in input");

  auto resampler = RationalResampler::for_rates(cfg.input_rate_hz, cfg.output_rate_hz);
  std::vector<std::vector<double>> out(4);
  for (int k = 0; k < 4; ++k) {
    Biquad notch = design_notch(cfg.notch_hz, cfg.notch_q, cfg.input_rate_hz);
    auto lp = design_butterworth_lowpass(cfg.lowpass_hz, cfg.input_rate_hz, cfg.lowpass_order);
    std::vector<double> y(chans[k]->size());
    for (size_t i = 0; i < y.size(); ++i) {
      double v = notch.step((*chans[k])[i]);
      for (auto& s : lp) v = s.step(v);
      y[i] = v;
    }
    out[static_cast<size_t>(k)] = resampler.process(y);
  }
  size_t n = out[0].size();
  SignalTrace tr;
  tr.t.resize(n);
  tr.s_cos.resize(n);
  tr.s_sin.resize(n);
  for (size_t i = 0; i < n; ++i) {
    tr.t[i] = raw.t.front() + static_cast<double>(i) / cfg.output_rate_hz;
    tr.s_cos[i] = out[0][i] - out[1][i];
    tr.s_sin[i] = out[2][i] - out[3][i];
  }
  return tr;
}

size_t DecoderConfig::fft_len() const {
  return Fft::next_pow2(static_cast<size_t>(window_len) * static_cast<size_t>(zero_pad_factor));
}

namespace {

// Reusable analysis state so decode_stream does not rebuild the plan and
// window for every position.
struct WindowAnalyzer {
  explicit WindowAnalyzer(const DecoderConfig& cfg)
      : cfg_(cfg), fft_(cfg.fft_len()), hann_(hann_window(static_cast<size_t>(cfg.window_len))),
        buf_(cfg.fft_len()) {}

  SpeedEstimate analyze(const double* s_cos, const double* s_sin, double xi_ground, double t_end) {
    const size_t n = static_cast<size_t>(cfg_.window_len);
    const size_t m = fft_.size();
    double mean_c = 0.0, mean_s = 0.0, raw_power = 0.0;
    for (size_t i = 0; i < n; ++i) {
      mean_c += s_cos[i];
      mean_s += s_sin[i];
      raw_power += s_cos[i] * s_cos[i] + s_sin[i] * s_sin[i];
    }
    mean_c /= static_cast<double>(n);
    mean_s /= static_cast<double>(n);
    double resid_power = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double dc = s_cos[i] - mean_c, ds = s_sin[i] - mean_s;
      resid_power += dc * dc + ds * ds;
    }
    // All-zero or constant windows: the AC residual is numerical dust.
    if (resid_power <= 1e-20 * raw_power || resid_power == 0.0) {
      SpeedEstimate silent;
      silent.t_s = t_end;
      return silent;
    }

    for (size_t i = 0; i < n; ++i)
      buf_[i] = {(s_cos[i] - mean_c) * hann_[i], (s_sin[i] - mean_s) * hann_[i]};
    std::fill(buf_.begin() + static_cast<long>(n), buf_.end(), std::complex<double>{0.0, 0.0});
    fft_.forward(buf_);

    const double df = cfg_.rate_hz / static_cast<double>(m);
    auto bin_freq = [&](size_t k) {
      long ks = k <= m / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(m);
      return static_cast<double>(ks) * df;
    };

    double total = 0.0;
    double best = -1.0;
    size_t best_k = 0;
    for (size_t k = 0; k < m; ++k) {
      double f = bin_freq(k);
      if (std::abs(f) < cfg_.f_min_hz || k == 0) continue;
      double p = std::norm(buf_[k]);
      total += p;
      if (p > best) {
        best = p;
        best_k = k;
      }
    }

    SpeedEstimate est;
    est.t_s = t_end;
    if (total <= 0.0 || best <= 0.0) return est;  // silent window: rejected

    // Parabolic refinement on log magnitude.
    auto mag = [&](size_t k) { return std::abs(buf_[(k + m) % m]); };
    double y0 = std::log(std::max(mag(best_k), 1e-300));
    double ym = std::log(std::max(mag(best_k + m - 1), 1e-300));
    double yp = std::log(std::max(mag(best_k + 1), 1e-300));
    double denom = ym - 2.0 * y0 + yp;
    double delta = 0.0;
    if (denom < -1e-12) delta = 0.5 * (ym - yp) / denom;
    delta = std::clamp(delta, -0.5, 0.5);
    long ks = best_k <= m / 2 ? static_cast<long>(best_k)
                              : static_cast<long>(best_k) - static_cast<long>(m);
    est.f_peak_hz = (static_cast<double>(ks) + delta) * df;

    // Confidence: fraction of (DC-excluded) spectral power inside the
    // window's main lobe around the peak.
    long hw = static_cast<long>(std::ceil(2.0 * static_cast<double>(m) / cfg_.window_len));
    double peak_power = 0.0;
    for (long j = -hw; j <= hw; ++j) {
      size_t k = static_cast<size_t>((static_cast<long>(best_k) + j + static_cast<long>(m)) %
                                     static_cast<long>(m));
      double f = bin_freq(k);
      if (std::abs(f) < cfg_.f_min_hz || k == 0) continue;
      peak_power += std::norm(buf_[k]);
    }
    est.confidence = peak_power / total;
    est.v_hat = est.f_peak_hz / xi_ground;
    est.accepted = est.confidence >= cfg_.confidence_threshold;
    return est;
  }

  const DecoderConfig& cfg_;
  Fft fft_;
  std::vector<double> hann_;
  std::vector<std::complex<double>> buf_;
};

}  // namespace

SpeedEstimate decode_window(const std::vector<double>& s_cos, const std::vector<double>& s_sin,
                            double xi_ground, const DecoderConfig& cfg) {
  cfg.validate();
  require(xi_ground > 0, "decode_window: xi_ground must be positive");
  require(s_cos.size() == static_cast<size_t>(cfg.window_len) && s_sin.size() == s_cos.size(),
          "decode_window: window length mismatch");
  WindowAnalyzer an(cfg);
  double t_end = static_cast<double>(cfg.window_len - 1) / cfg.rate_hz;
  return an.analyze(s_cos.data(), s_sin.data(), xi_ground, t_end);
}

std::vector<SpeedEstimate> decode_stream(const SignalTrace& trace, int stride_ms, double xi_ground,
                                         const DecoderConfig& cfg) {
  cfg.validate();
  require(stride_ms == 1 || stride_ms == 10 || stride_ms == 33,
          "decode_stream: stride must be 1, 10 or 33 ms");
  require(xi_ground > 0, "decode_stream: xi_ground must be positive");
  const size_t n = trace.size();
  const size_t w = static_cast<size_t>(cfg.window_len);
  require(n >= w, "decode_stream: trace shorter than one window");
  require(std::abs(trace.rate_hz() - cfg.rate_hz) < 1e-6 * cfg.rate_hz,
          "decode_stream: trace rate does not match decoder config");

  const size_t stride = static_cast<size_t>(
      std::llround(static_cast<double>(stride_ms) * cfg.rate_hz / 1000.0));
  WindowAnalyzer an(cfg);
  std::vector<SpeedEstimate> accepted;
  for (size_t start = 0; start + w <= n; start += stride) {
    SpeedEstimate est = an.analyze(&trace.s_cos[start], &trace.s_sin[start], xi_ground,
                                   trace.t[start + w - 1]);
    if (est.accepted) accepted.push_back(est);
  }

  // Median filter over the accepted sequence (edges use the available span).
  if (cfg.median_len > 1 && accepted.size() > 1) {
    int half = cfg.median_len / 2;
    std::vector<double> filtered(accepted.size());
    std::vector<double> win;
    for (size_t i = 0; i < accepted.size(); ++i) {
      size_t lo = i >= static_cast<size_t>(half) ? i - static_cast<size_t>(half) : 0;
      size_t hi = std::min(accepted.size() - 1, i + static_cast<size_t>(half));
      win.clear();
      for (size_t j = lo; j <= hi; ++j) win.push_back(accepted[j].v_hat);
      std::nth_element(win.begin(), win.begin() + static_cast<long>(win.size() / 2), win.end());
      double med = win[win.size() / 2];
      if (win.size() % 2 == 0) {
        double lo_med = *std::max_element(win.begin(), win.begin() + static_cast<long>(win.size() / 2));
        med = (med + lo_med) / 2.0;
      }
      filtered[i] = med;
    }
    for (size_t i = 0; i < accepted.size(); ++i) accepted[i].v_hat = filtered[i];
  }
  return accepted;
}

InstantFrequency instantaneous_frequency(const std::vector<double>& s_cos,
                                         const std::vector<double>& s_sin, double rate_hz) {
  require(s_cos.size() == s_sin.size() && s_cos.size() >= 2, "instantaneous_frequency: bad input");
  require(rate_hz > 0, "instantaneous_frequency: rate must be positive");
  double max_amp = 0.0;
  for (size_t i = 0; i < s_cos.size(); ++i)
    max_amp = std::max(max_amp, std::hypot(s_cos[i], s_sin[i]));
  double amp_floor = 1e-3 * max_amp;

  InstantFrequency out;
  std::vector<double> valid;
  double prev_phase = std::atan2(s_sin[0], s_cos[0]);
  for (size_t i = 1; i < s_cos.size(); ++i) {
    double phase = std::atan2(s_sin[i], s_cos[i]);
    double d = phase - prev_phase;
    d -= 2.0 * kPi * std::round(d / (2.0 * kPi));
    prev_phase = phase;
    double f = d * rate_hz / (2.0 * kPi);
    out.f_hz.push_back(f);
    double amp = std::min(std::hypot(s_cos[i], s_sin[i]), std::hypot(s_cos[i - 1], s_sin[i - 1]));
    if (amp > amp_floor) valid.push_back(f);
  }
  if (!valid.empty()) {
    std::nth_element(valid.begin(), valid.begin() + static_cast<long>(valid.size() / 2), valid.end());
    out.f_median_hz = valid[valid.size() / 2];
  }
  return out;
}

double window_target_speed(const PlanarPath& path, double t_end, double tail_s) {
  require(!path.t.empty(), "window_target_speed: empty path");
  double t_start = t_end - tail_s;
  double acc = 0.0;
  size_t count = 0;
  for (size_t i = 0; i < path.t.size(); ++i) {
    if (path.t[i] > t_start + 1e-12 && path.t[i] <= t_end + 1e-12) {
      acc += path.v_x[i];
      ++count;
    }
  }
  require(count > 0, "window_target_speed: no samples in the target tail");
  return acc / static_cast<double>(count);
}

void save_estimates_csv(const std::vector<SpeedEstimate>& est, const std::filesystem::path& file) {
  std::vector<double> t, v, f, c, a;
  for (const auto& e : est) {
    t.push_back(e.t_s);
    v.push_back(e.v_hat);
    f.push_back(e.f_peak_hz);
    c.push_back(e.confidence);
    a.push_back(e.accepted ? 1.0 : 0.0);
  }
  write_csv(file, {"t", "v_hat", "f_peak", "confidence", "accepted"}, {&t, &v, &f, &c, &a},
            {"%.6f", "%.9f", "%.6f", "%.6f", "%.0f"});
}

std::vector<SpeedEstimate> load_estimates_csv(const std::filesystem::path& file) {
  CsvTable tab = read_csv(file);
  std::vector<SpeedEstimate> out;
  for (size_t i = 0; i < tab.n_rows(); ++i) {
    SpeedEstimate e;
    e.t_s = tab.col("t")[i];
    e.v_hat = tab.col("v_hat")[i];
    e.f_peak_hz = tab.col("f_peak")[i];
    e.confidence = tab.col("confidence")[i];
    e.accepted = tab.col("accepted")[i] != 0.0;
    out.push_back(e);
  }
  return out;
}

}  // namespace gaborodo

// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion. Exit code is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "gaborodo/rng.hpp"

#include "gaborodo/decoder.hpp"
#include "gaborodo/dsp.hpp"
#include "gaborodo/experiment.hpp"
#include "gaborodo/odometry.hpp"
#include "gaborodo/optimizer.hpp"
#include "gaborodo/util.hpp"
#include "test_helpers.hpp"

using namespace gaborodo;
using namespace gaborodo::testing;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] C%d %-28s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double now_s() {
  using clock = std::chrono::steady_clock;
  static const auto start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

struct WindowRecord {
  double v_true;
  double f_peak;
  double v_hat;
  bool accepted;
};

// Shared battery for C1/C2: broadband textures, straight runs at signed
// speeds, nominal height, noise on.
struct Battery {
  std::vector<WindowRecord> windows;
  size_t scenarios = 0;
};

Battery run_battery(const SensorConfig& cfg, const GaborParams& gp, const MaskRaster& masks,
                    const std::vector<uint64_t>& tex_seeds, const std::vector<double>& speeds,
                    double duration_s) {
  DecoderConfig dcfg;
  double xi_g = ground_frequency(gp, cfg, cfg.h_nom_m);
  struct Scenario {
    uint64_t tex_seed;
    double v;
  };
  std::vector<Scenario> scenarios;
  for (uint64_t ts : tex_seeds)
    for (double v : speeds) scenarios.push_back({ts, v});

  std::vector<std::vector<WindowRecord>> results(scenarios.size());
  parallel_for(scenarios.size(), 0, [&](size_t i) {
    const Scenario& sc = scenarios[i];
    TextureField tex = generate(broadband_texture(sc.tex_seed));
    PlanarPath path = generate_path(straight_path(sc.v, duration_s));
    SimResult sim = simulate(tex, masks, cfg, path, HeightProfile::nominal(),
                             Rng::derive(1000, i));
    auto est = decode_stream(sim.diff, 33, xi_g, dcfg);
    std::vector<WindowRecord> recs;
    for (const auto& e : est)
      recs.push_back({window_target_speed(path, e.t_s), e.f_peak_hz, e.v_hat, true});
    results[i] = recs;
  });

  Battery b;
  b.scenarios = scenarios.size();
  for (auto& r : results) b.windows.insert(b.windows.end(), r.begin(), r.end());
  return b;
}

// ---------------------------------------------------------------------------

void criterion_1_and_2() {
  double t0 = now_s();
  SensorConfig cfg = scaled_sensor(64);
  GaborParams gp{6.0, 1.0, 1.0};
  MaskRaster masks = rasterize(gp, 64);
  double xi_g = ground_frequency(gp, cfg, cfg.h_nom_m);
  DecoderConfig dcfg;
  double bin = dcfg.bin_hz();

  Battery b = run_battery(cfg, gp, masks, {11, 12, 13, 14},
                          {0.05, -0.05, 0.1, -0.2, 0.3, -0.4}, 1.34);
  size_t within = 0;
  size_t sign_ok = 0;
  for (const auto& w : b.windows) {
    if (std::abs(w.f_peak - xi_g * w.v_true) <= 2.0 * bin) ++within;
    if ((w.v_hat > 0) == (w.v_true > 0) && w.v_hat != 0.0) ++sign_ok;
  }
  double elapsed = now_s() - t0;
  double frac = b.windows.empty() ? 0.0 : static_cast<double>(within) / b.windows.size();
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "%zu scenarios, %zu accepted windows, %.1f%% within 2 bins (need >=90%%), %.1f s "
                "(budget 60 s)",
                b.scenarios, b.windows.size(), 100.0 * frac, elapsed);
  report(1, "frequency-law", b.scenarios >= 20 && frac >= 0.90 && elapsed < 60.0, detail);

  // C2: direction on the same noise-on battery plus exact symmetry checks.
  bool signs = sign_ok == b.windows.size() && !b.windows.empty();

  std::vector<double> sc(1000), ss(1000);
  for (size_t i = 0; i < 1000; ++i) {
    double t = static_cast<double>(i) / 1000.0;
    sc[i] = std::cos(2.0 * kPi * 30.0 * t);
    ss[i] = std::sin(2.0 * kPi * 30.0 * t);
  }
  SpeedEstimate fwd = decode_window(sc, ss, xi_g, dcfg);
  SpeedEstimate swapped = decode_window(ss, sc, xi_g, dcfg);
  bool swap_exact = std::abs(swapped.f_peak_hz + fwd.f_peak_hz) < 1e-9;

  auto scr = sc;
  auto ssr = ss;
  std::reverse(scr.begin(), scr.end());
  std::reverse(ssr.begin(), ssr.end());
  SpeedEstimate rev = decode_window(scr, ssr, xi_g, dcfg);
  bool rev_exact = std::abs(rev.f_peak_hz + fwd.f_peak_hz) < 1e-9;

  char d2[256];
  std::snprintf(d2, sizeof(d2),
                "sign correct %zu/%zu accepted windows; channel-swap %.2e Hz, time-reversal %.2e Hz",
                sign_ok, b.windows.size(), std::abs(swapped.f_peak_hz + fwd.f_peak_hz),
                std::abs(rev.f_peak_hz + fwd.f_peak_hz));
  report(2, "direction-disambiguation", signs && swap_exact && rev_exact, d2);
}

void criterion_3() {
  SensorConfig cfg = scaled_sensor(64);
  GaborParams gp{6.0, 1.0, 1.0};
  MaskRaster masks = rasterize(gp, 64);
  double xi_g = ground_frequency(gp, cfg, cfg.h_nom_m);
  DecoderConfig dcfg;
  double bin = dcfg.bin_hz();
  double v = 0.2;

  // (a) doubling the height halves the observed |f_peak|.
  TextureField tex_a = generate(broadband_texture(21, 40.0, 160.0));
  PlanarPath path = generate_path(straight_path(v, 2.0));
  auto median_abs_f = [&](const SimResult& sim) {
    auto est = decode_stream(sim.diff, 33, xi_g, dcfg);
    std::vector<double> fs;
    for (const auto& e : est) fs.push_back(std::abs(e.f_peak_hz));
    if (fs.empty()) return 0.0;
    std::nth_element(fs.begin(), fs.begin() + static_cast<long>(fs.size() / 2), fs.end());
    return fs[fs.size() / 2];
  };
  SimResult nom = simulate(tex_a, masks, cfg, path, HeightProfile::nominal(), 61);
  SimResult dbl = simulate(tex_a, masks, cfg, path, HeightProfile::constant(2 * cfg.h_nom_m), 61);
  double f_nom = median_abs_f(nom);
  double f_dbl = median_abs_f(dbl);
  bool halves = f_nom > 0 && f_dbl > 0 && std::abs(f_dbl - f_nom / 2.0) <= 2.0 * bin;

  // (b) +/-25% constant height bias follows the 1/h projection model within
  // 10% relative (uncompensated decoder, magnitudes). Measurement-grade
  // electronics isolate the geometric model: at +25% the differential-pair
  // amplitude fades to ~14%, which the default noise floor would gate out.
  SensorConfig meas = cfg;
  meas.read_noise_v = 0.0;
  meas.adc_bits = 16;
  bool bias_ok = true;
  char bias_buf[128] = "";
  TextureField tex_b = generate(broadband_texture(22));
  for (double rel : {0.75, 1.25}) {
    SimResult sim = simulate(tex_b, masks, meas, path, HeightProfile::constant(rel * cfg.h_nom_m), 62);
    auto est = decode_stream(sim.diff, 33, xi_g, dcfg);
    double acc = 0.0;
    for (const auto& e : est) acc += std::abs(e.v_hat);
    double mean_v = est.empty() ? 0.0 : acc / static_cast<double>(est.size());
    double predicted = v / rel;
    if (std::abs(mean_v - predicted) > 0.10 * predicted) bias_ok = false;
    std::snprintf(bias_buf + std::strlen(bias_buf), sizeof(bias_buf) - std::strlen(bias_buf),
                  "h=%.2fh_nom: %.4f vs %.4f; ", rel, mean_v, predicted);
  }

  // (c) fixed nominal pipeline vs widening per-window height ranges: RMSE
  // must grow monotonically.
  std::vector<double> ranges{0.0, 10.0, 25.0, 50.0};
  std::vector<double> rmse(ranges.size(), 0.0);
  parallel_for(ranges.size(), 0, [&](size_t ri) {
    double sq = 0.0;
    size_t n = 0;
    for (uint64_t seed : {23ull, 24ull}) {
      TextureField tex = generate(broadband_texture(seed, 60.0, 200.0));
      PlanarPath p3 = generate_path(straight_path(v, 3.0));
      HeightProfile hp = ranges[ri] > 0 ? HeightProfile::per_window(ranges[ri])
                                        : HeightProfile::nominal();
      SimResult sim = simulate(tex, masks, cfg, p3, hp, Rng::derive(63, seed));
      auto est = decode_stream(sim.diff, 33, xi_g, dcfg);
      for (const auto& e : est) {
        double err = e.v_hat - window_target_speed(p3, e.t_s);
        sq += err * err;
        ++n;
      }
    }
    rmse[ri] = n > 0 ? std::sqrt(sq / static_cast<double>(n)) : 1e9;
  });
  bool monotone = true;
  for (size_t i = 1; i < rmse.size(); ++i)
    if (rmse[i] + 1e-9 < rmse[i - 1]) monotone = false;

  char detail[512];
  std::snprintf(detail, sizeof(detail),
                "|f| %.2f -> %.2f Hz (half of nominal within 2 bins: %s); bias %s rmse sweep "
                "[%.4f, %.4f, %.4f, %.4f] monotone %s",
                f_nom, f_dbl, halves ? "yes" : "no", bias_buf, rmse[0], rmse[1], rmse[2], rmse[3],
                monotone ? "yes" : "no");
  report(3, "height-scaling", halves && bias_ok && monotone, detail);
}

void criterion_4() {
  bool exact = true, disjoint = true, spectral = true;
  for (double xi0 : {2.0, 3.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0}) {
    for (double sigma : {0.5, 0.75, 1.0, 1.5, 2.0}) {
      GaborParams p{xi0, sigma, 1.0};
      MaskRaster m = rasterize(p, 128);
      int n = 128;
      std::vector<double> row(static_cast<size_t>(n));
      for (int c = 0; c < n; ++c) {
        double u = MaskRaster::u_at(c, n);
        double g = eval_gabor_cos(p, u);
        if (m.cos_plus.at(0, c) - m.cos_minus.at(0, c) != g) exact = false;
        if (m.cos_plus.at(0, c) * m.cos_minus.at(0, c) != 0.0) disjoint = false;
        if (m.sin_plus.at(0, c) - m.sin_minus.at(0, c) != eval_gabor_sin(p, u)) exact = false;
        row[static_cast<size_t>(c)] = g;
      }
      // Naive DFT: the two largest bins must sit at the carrier (2*xi0
      // cycles across the u in [-1,1] aperture).
      int best_bin = -1;
      double best = -1.0;
      for (int k = 1; k < n / 2; ++k) {
        std::complex<double> acc = 0.0;
        for (int c = 0; c < n; ++c)
          acc += row[static_cast<size_t>(c)] *
                 std::polar(1.0, -2.0 * kPi * static_cast<double>(k) * c / n);
        if (std::abs(acc) > best) {
          best = std::abs(acc);
          best_bin = k;
        }
      }
      if (best_bin != static_cast<int>(std::lround(2.0 * xi0))) spectral = false;
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "reconstruction exact: %s, disjoint support: %s, carrier-bin concentration: %s "
                "(40-point grid)",
                exact ? "yes" : "no", disjoint ? "yes" : "no", spectral ? "yes" : "no");
  report(4, "mask-algebra", exact && disjoint && spectral, detail);
}

void criterion_5() {
  // Texture band overlaps the upper edge of the fixed mask's passband: the
  // fixed Gabor decodes but a retuned carrier does clearly better.
  ObjectiveConfig train;
  train.sensor = scaled_sensor(48);
  train.textures = {broadband_texture(201, 150.0, 220.0), broadband_texture(202, 150.0, 220.0),
                    broadband_texture(203, 150.0, 220.0)};
  train.paths = {straight_path(0.25, 0.0)};
  train.height_range_pct = 0.0;
  train.windows_per_scenario = 4;
  train.master_seed = 3001;
  train.jobs = 2;
  ObjectiveContext ctx(train);

  ParamBounds bounds;
  bounds.xi0_lo = 3.0;
  bounds.xi0_hi = 10.0;
  bounds.sigma_lo = 0.5;
  bounds.sigma_hi = 1.5;
  bounds.alpha_lo = 0.3;
  bounds.alpha_hi = 1.0;

  // Brute-force 5x5x3 oracle over the bounds.
  double grid_min = 1e300;
  GaborParams grid_best{6, 1, 1};
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      for (int k = 0; k < 3; ++k) {
        GaborParams p{bounds.xi0_lo + i * (bounds.xi0_hi - bounds.xi0_lo) / 4.0,
                      bounds.sigma_lo + j * (bounds.sigma_hi - bounds.sigma_lo) / 4.0,
                      bounds.alpha_lo + k * (bounds.alpha_hi - bounds.alpha_lo) / 2.0};
        double f = ctx.evaluate(p);
        if (f < grid_min) {
          grid_min = f;
          grid_best = p;
        }
      }
    }
  }

  NelderMeadOptions nm;
  nm.max_evals = 80;
  OptimResult res = optimize(ctx, bounds, {grid_best}, nm);
  bool grid_ok = res.best_objective <= grid_min + 1e-3;
  bool baseline_ok = res.best_objective <= res.baseline_objective;

  // Held-out scenario seeds: disjoint texture seeds and noise draws.
  ObjectiveConfig held = train;
  held.textures = {broadband_texture(211, 150.0, 220.0), broadband_texture(212, 150.0, 220.0)};
  held.master_seed = 4001;
  ObjectiveContext held_ctx(held);
  double held_fixed = held_ctx.evaluate(GaborParams{6.0, 1.0, 1.0});
  double held_opt = held_ctx.evaluate(res.best_params);
  bool held_ok = held_opt <= held_fixed;

  char detail[320];
  std::snprintf(detail, sizeof(detail),
                "best (%.2f,%.2f,%.2f) obj %.4f vs grid %.4f, baseline %.4f; held-out opt %.4f <= "
                "fixed %.4f: %s",
                res.best_params.xi0, res.best_params.sigma, res.best_params.alpha,
                res.best_objective, grid_min, res.baseline_objective, held_opt, held_fixed,
                held_ok ? "yes" : "no");
  report(5, "optimizer", grid_ok && baseline_ok && held_ok, detail);
}

void criterion_6() {
  // Straight line: v = 0.2 for 10 s -> (2, 0) within 1e-6.
  size_t n = 10001;
  std::vector<double> t(n), v(n, 0.2), w(n, 0.0);
  for (size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) / 1000.0;
  PlanarPath straight = integrate_series(t, v, w);
  bool straight_ok = std::abs(straight.x.back() - 2.0) < 1e-6 && straight.y.back() == 0.0;

  // Half circle: endpoint (0, 2) within 1e-4 at 1 kHz.
  double T = kPi / 0.2;
  size_t n2 = static_cast<size_t>(std::llround(T * 1000.0)) + 1;
  std::vector<double> t2(n2), v2(n2, 0.2), w2(n2, 0.2);
  for (size_t i = 0; i < n2; ++i) t2[i] = static_cast<double>(i) / 1000.0;
  PlanarPath arc = integrate_series(t2, v2, w2);
  bool arc_ok = std::hypot(arc.x.back() - 0.0, arc.y.back() - 2.0) < 1e-4;

  bool ate_ok = ate(arc, arc) == 0.0;

  PathSpec s;
  s.profile = PathProfile::Straight;
  s.v = 0.5;
  s.duration_s = 20.0;
  PlanarPath ref = generate_path(s);
  PlanarPath est = ref;
  est.y.back() += 0.05;
  bool drift_ok = std::abs(drift_percent(est, ref) - 0.5) < 1e-9;

  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "straight (%.7f, %.1e), arc (%.2e, %.6f), ate(p,p)=%g, drift 0.05m/10m = %.6f%%",
                straight.x.back(), straight.y.back(), arc.x.back(), arc.y.back(), ate(arc, arc),
                drift_percent(est, ref));
  report(6, "odometry-closed-forms", straight_ok && arc_ok && ate_ok && drift_ok, detail);
}

void criterion_7() {
  SensorConfig cfg = scaled_sensor(48);
  GaborParams gp{6.0, 1.0, 1.0};
  MaskRaster masks = rasterize(gp, 48);
  double xi_g = ground_frequency(gp, cfg, cfg.h_nom_m);
  DecoderConfig dcfg;

  struct Course {
    uint64_t path_seed;
    uint64_t tex_seed;
  };
  std::vector<Course> courses{{71, 301}, {72, 302}};
  std::vector<double> drifts(courses.size(), 1e9);
  std::vector<double> lengths(courses.size(), 0.0);

  parallel_for(courses.size(), 0, [&](size_t i) {
    PathSpec ps;
    ps.profile = PathProfile::RandomWaypoints;
    ps.seed = courses[i].path_seed;
    ps.duration_s = 170.0;
    ps.v_min = 0.25;
    ps.v_max = 0.4;  // robot-scale speed cap
    ps.omega_max = 0.3;
    PlanarPath ref = generate_path(ps);
    lengths[i] = ref.path_length();

    TextureField tex = generate(broadband_texture(courses[i].tex_seed, 60.0, 200.0));
    // Vibration-like continuous height variation across +/-25% (the
    // per-window block mode models terrain steps; over a long course it
    // turns the uncompensated 1/h bias into a second-scale random walk).
    HeightProfile hp;
    hp.mode = HeightProfile::Mode::Smooth;
    hp.range_pct = 25.0;
    SimResult sim = simulate(tex, masks, cfg, ref, hp, Rng::derive(7000, i));
    auto est = decode_stream(sim.diff, 33, xi_g, dcfg);

    GyroModel gyro;
    gyro.noise_std = 0.002;
    gyro.seed = Rng::derive(7100, i);
    auto omega = gyro_measure(ref, gyro);

    OdometryConfig ocfg;
    PlanarPath odo = integrate(est, ref.t, omega, ocfg);
    PlanarPath ref_scored = rebase(ref, odo.t.front());
    drifts[i] = drift_percent(odo, ref_scored);
  });

  bool ok = true;
  char detail[256];
  std::snprintf(detail, sizeof(detail), "courses: ");
  for (size_t i = 0; i < courses.size(); ++i) {
    if (!(lengths[i] >= 50.0 && drifts[i] <= 2.0)) ok = false;
    std::snprintf(detail + std::strlen(detail), sizeof(detail) - std::strlen(detail),
                  "%.1f m drift %.3f%%%s", lengths[i], drifts[i],
                  i + 1 < courses.size() ? ", " : " (budget 2%)");
  }
  report(7, "end-to-end-dead-reckoning", ok, detail);
}

void criterion_8() {
  ConditioningConfig cfg;
  double fs = cfg.input_rate_hz;
  size_t n = static_cast<size_t>(fs * 2.0);
  auto make_raw = [&](double f_hz) {
    FourChannelTrace raw;
    raw.t.resize(n);
    raw.cos_p.resize(n);
    raw.cos_m.assign(n, 0.0);
    raw.sin_p.assign(n, 0.0);
    raw.sin_m.assign(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
      raw.t[i] = static_cast<double>(i) / fs;
      raw.cos_p[i] = std::sin(2.0 * kPi * f_hz * raw.t[i]);
    }
    return raw;
  };

  // 60 Hz rejection >= 40 dB.
  SignalTrace mains = condition(make_raw(60.0), cfg);
  double amp60 = tone_amplitude(mains.s_cos, 1000.0, 60.0, 500, 1500);
  double rej_db = -20.0 * std::log10(std::max(amp60, 1e-300));
  bool notch_ok = rej_db >= 40.0;

  // 10 Hz passband ripple <= 1%.
  SignalTrace low = condition(make_raw(10.0), cfg);
  double amp10 = tone_amplitude(low.s_cos, 1000.0, 10.0, 500, 1500);
  bool pass_ok = std::abs(amp10 - 1.0) <= 0.01;

  // Alias-free decimation for tones below 450 Hz: each tone lands at its own
  // frequency with the IIR-chain gain, and spurious content stays below 1%
  // of the tone power.
  bool alias_ok = true;
  double worst_spur = 0.0;
  for (double f : {100.0, 250.0, 430.0}) {
    SignalTrace out = condition(make_raw(f), cfg);
    double expect = cascade_gain({design_notch(cfg.notch_hz, cfg.notch_q, fs)}, f, fs) *
                    cascade_gain(design_butterworth_lowpass(cfg.lowpass_hz, fs, cfg.lowpass_order), f, fs);
    double amp = tone_amplitude(out.s_cos, 1000.0, f, 500, 1500);
    if (std::abs(amp - expect) > 0.02 * expect) alias_ok = false;
    // Total spurious power outside +/-5 Hz of the tone over a 1 s segment.
    double tone_power = amp * amp / 2.0;
    double spur_power = 0.0;
    for (double probe = 5.0; probe < 500.0; probe += 5.0) {
      if (std::abs(probe - f) <= 5.0) continue;
      double a = tone_amplitude(out.s_cos, 1000.0, probe, 500, 1500);
      spur_power += a * a / 2.0;
    }
    worst_spur = std::max(worst_spur, spur_power / tone_power);
    if (spur_power > 0.01 * tone_power) alias_ok = false;
  }

  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "60 Hz rejection %.1f dB (need 40), 10 Hz amp %.4f, worst spur ratio %.2e",
                rej_db, amp10, worst_spur);
  report(8, "conditioning", notch_ok && pass_ok && alias_ok, detail);
}

void criterion_9() {
  // Determinism: the same experiment config run twice produces a
  // byte-identical output tree.
  auto out = fs::temp_directory_path() / "gaborodo_acceptance_det";
  ExperimentConfig cfg;
  cfg.run.seed = 42;
  cfg.run.output_dir = out.string();
  cfg.run.jobs = 2;
  cfg.sensor = scaled_sensor(48);
  cfg.masks.params = {6.0, 1.0, 1.0};
  cfg.textures = {broadband_texture(7)};
  PathEntry pe;
  pe.spec = straight_path(0.2, 1.3);
  cfg.paths = {pe};
  cfg.heights.ranges_pct = {0.0};
  cfg.gyro.noise_std = 0.002;

  fs::remove_all(out);
  run_experiment(cfg);
  uint64_t h1 = hash_output_tree(out);
  fs::remove_all(out);
  run_experiment(cfg);
  uint64_t h2 = hash_output_tree(out);
  bool det_ok = h1 == h2;

  // Throughput: 60 s of 1 kHz signal at 10 ms stride in < 1 s single-core.
  size_t n = 60001;
  SignalTrace tr;
  tr.t.resize(n);
  tr.s_cos.resize(n);
  tr.s_sin.resize(n);
  for (size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / 1000.0;
    tr.t[i] = t;
    tr.s_cos[i] = 0.01 * std::cos(2.0 * kPi * 30.0 * t);
    tr.s_sin[i] = 0.01 * std::sin(2.0 * kPi * 30.0 * t);
  }
  DecoderConfig dcfg;
  auto t0 = std::chrono::steady_clock::now();
  auto est = decode_stream(tr, 10, 142.8, dcfg);
  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool perf_ok = elapsed < 1.0 && est.size() == 5901;

  char detail[192];
  std::snprintf(detail, sizeof(detail),
                "repeat-run hash %s; decode 60 s @ 10 ms stride: %zu windows in %.3f s (budget 1 s)",
                det_ok ? "equal" : "DIFFERS", est.size(), elapsed);
  report(9, "determinism-performance", det_ok && perf_ok, detail);
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  now_s();
  criterion_1_and_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  std::printf("%s: %d criterion failure(s), total %.1f s\n", g_failures == 0 ? "OK" : "FAILED",
              g_failures, now_s());
  return g_failures;
}

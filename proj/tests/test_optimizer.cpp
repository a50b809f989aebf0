// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gaborodo/optimizer.hpp"
#include "test_helpers.hpp"

using namespace gaborodo;
using namespace gaborodo::testing;

namespace {

// Small, fast objective battery: two textures, one straight path, nominal
// height.
ObjectiveConfig small_objective(double low_cpm, double high_cpm) {
  ObjectiveConfig cfg;
  cfg.sensor = scaled_sensor(48);
  cfg.textures = {broadband_texture(101, low_cpm, high_cpm), broadband_texture(102, low_cpm, high_cpm)};
  cfg.paths = {straight_path(0.25, 0.0)};  // duration derived from windows
  cfg.height_range_pct = 0.0;
  cfg.windows_per_scenario = 3;
  cfg.stride_ms = 33;
  cfg.master_seed = 11;
  cfg.jobs = 2;
  return cfg;
}

}  // namespace

TEST_CASE("objective is deterministic under common random numbers") {
  ObjectiveConfig cfg = small_objective(80.0, 220.0);
  GaborParams p{6.0, 1.0, 1.0};
  double a = objective(p, cfg);
  double b = objective(p, cfg);
  CHECK(a == b);  // identical to the last bit

  cfg.jobs = 2;
  double c = objective(p, cfg);
  CHECK(c == a);  // parallel == serial
}

TEST_CASE("fixed Gabor on a matched single-tone texture scores under 0.02 m/s") {
  ObjectiveConfig cfg = small_objective(80.0, 220.0);
  GaborParams fixed{6.0, 1.0, 1.0};
  double xi_g = ground_frequency(fixed, cfg.sensor, cfg.sensor.h_nom_m);
  TextureSpec tone;
  tone.kind = TextureKind::Sinusoid;
  tone.freq_cpm = xi_g;
  tone.resolution_px = 2048;
  tone.extent_m = 1.0;
  cfg.textures = {tone};
  double obj = objective(fixed, cfg);
  CHECK(obj < 0.02);
}

TEST_CASE("objective rejects out-of-bound parameters") {
  ObjectiveConfig cfg = small_objective(80.0, 220.0);
  CHECK_THROWS(objective({6.0, 1.0, 0.0}, cfg));   // alpha = 0
  CHECK_THROWS(objective({-2.0, 1.0, 1.0}, cfg));  // negative xi0
}

TEST_CASE("invalid bounds are rejected") {
  ParamBounds b;
  b.xi0_lo = 10.0;
  b.xi0_hi = 3.0;
  CHECK_THROWS(b.validate());
  ParamBounds a;
  a.alpha_hi = 1.5;  // transmittance cap
  CHECK_THROWS(a.validate());
}

TEST_CASE("flat landscape returns the start point after the initial simplex") {
  // A uniform texture produces no decodable windows for any parameters, so
  // the objective is constant.
  ObjectiveConfig cfg = small_objective(80.0, 220.0);
  TextureSpec flat;
  flat.kind = TextureKind::Checker;
  flat.cell_m = 100.0;  // one cell covers the whole texture: constant field
  flat.resolution_px = 64;
  cfg.textures = {flat};
  ParamBounds bounds;
  OptimResult res = optimize(cfg, bounds);
  CHECK(res.best_params.xi0 == 6.0);
  CHECK(res.best_params.sigma == 1.0);
  CHECK(res.best_params.alpha == 1.0);
  CHECK(res.history.size() <= 8);
  CHECK(res.best_objective == res.baseline_objective);
}

TEST_CASE("optimizer improves a band-mismatched fixed Gabor and respects bounds") {
  // Texture energy concentrated well above the fixed mask's passband: the
  // search must raise xi0. Oracle: a brute-force 1D sweep over xi0.
  ObjectiveConfig cfg = small_objective(170.0, 230.0);
  ParamBounds bounds;
  bounds.xi0_lo = 3.0;
  bounds.xi0_hi = 11.0;
  bounds.sigma_lo = 0.5;
  bounds.sigma_hi = 1.5;
  bounds.alpha_lo = 0.3;
  bounds.alpha_hi = 1.0;

  ObjectiveContext ctx(cfg);
  double best_sweep = 1e9;
  double best_xi0 = 0.0;
  for (double xi0 = 3.0; xi0 <= 11.0 + 1e-9; xi0 += 1.0) {
    double obj = ctx.evaluate({xi0, 1.0, 1.0});
    if (obj < best_sweep) {
      best_sweep = obj;
      best_xi0 = xi0;
    }
  }
  CHECK(best_xi0 > 6.5);  // the band demands a higher carrier

  NelderMeadOptions nm;
  nm.max_evals = 60;
  OptimResult res = optimize(ctx, bounds, {}, nm);
  CHECK(res.best_objective <= res.baseline_objective);
  CHECK(res.best_params.xi0 > 6.0);

  // Bound respect and monotone best-so-far over the history.
  double running = 1e300;
  for (const auto& [p, f] : res.history) {
    CHECK(bounds.contains(p));
    running = std::min(running, f);
    CHECK(res.best_objective <= f);
  }
  CHECK(res.best_objective == running);
}

TEST_CASE("multi-start returns the min across starts") {
  ObjectiveConfig cfg = small_objective(170.0, 230.0);
  cfg.textures.resize(1);
  cfg.windows_per_scenario = 2;
  ParamBounds bounds;
  bounds.xi0_lo = 3.0;
  bounds.xi0_hi = 11.0;
  NelderMeadOptions nm;
  nm.max_evals = 25;

  ObjectiveContext ctx(cfg);
  OptimResult single = optimize(ctx, bounds, {}, nm);
  OptimResult multi = optimize(ctx, bounds, {GaborParams{9.0, 1.0, 1.0}, GaborParams{4.0, 0.6, 0.8}}, nm);
  CHECK(multi.best_objective <= single.best_objective + 1e-12);
  CHECK(multi.history.size() > single.history.size());
  CHECK_THROWS(optimize(ctx, bounds, {GaborParams{30.0, 1.0, 1.0}}, nm));  // start outside bounds
}

TEST_CASE("optim result serialization") {
  auto dir = std::filesystem::temp_directory_path() / "gaborodo_test_opt";
  std::filesystem::create_directories(dir);
  OptimResult r;
  r.best_params = {7.5, 1.2, 0.9};
  r.best_objective = 0.012;
  r.baseline_objective = 0.02;
  r.history = {{{6.0, 1.0, 1.0}, 0.02}, {{7.5, 1.2, 0.9}, 0.012}};
  std::string js = optim_result_to_json(r);
  CHECK(js.find("\"best_objective\"") != std::string::npos);
  CHECK(js.find("7.5") != std::string::npos);
  save_history_csv(r, dir / "hist.csv");
  CHECK(std::filesystem::exists(dir / "hist.csv"));
}

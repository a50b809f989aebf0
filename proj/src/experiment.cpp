// SPDX-License-Identifier: Apache-2.0
#include "gaborodo/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gaborodo/csv.hpp"
#include "gaborodo/rng.hpp"
#include "gaborodo/svg.hpp"
#include "gaborodo/util.hpp"

namespace gaborodo {

namespace {

using toml::Value;

void check_keys(const Value& t, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& k : t.key_order)
    if (!allowed.count(k))
      throw toml::ParseError("config: unknown key '" + k + "' in [" + where + "]");
}

double get_num(const Value& t, const std::string& key, double dflt) {
  return t.contains(key) ? t.at(key).as_double(key) : dflt;
}
int64_t get_int(const Value& t, const std::string& key, int64_t dflt) {
  return t.contains(key) ? t.at(key).as_int(key) : dflt;
}
bool get_bool(const Value& t, const std::string& key, bool dflt) {
  return t.contains(key) ? t.at(key).as_bool(key) : dflt;
}
std::string get_str(const Value& t, const std::string& key, const std::string& dflt) {
  return t.contains(key) ? t.at(key).as_string(key) : dflt;
}

SensorConfig parse_sensor(const Value& t) {
  check_keys(t, "sensor",
             {"d_m", "fov_deg", "h_nom_m", "view_px", "gain", "read_noise_v", "adc_bits", "v_clip",
              "blur_sigma_px", "falloff_exp_d", "falloff_exp_omega"});
  SensorConfig c;
  c.d_m = get_num(t, "d_m", c.d_m);
  c.fov_rad = deg2rad(get_num(t, "fov_deg", rad2deg(c.fov_rad)));
  c.h_nom_m = get_num(t, "h_nom_m", c.h_nom_m);
  c.view_px = static_cast<int>(get_int(t, "view_px", c.view_px));
  c.gain = get_num(t, "gain", c.gain);
  c.read_noise_v = get_num(t, "read_noise_v", c.read_noise_v);
  c.adc_bits = static_cast<int>(get_int(t, "adc_bits", c.adc_bits));
  c.v_clip = get_num(t, "v_clip", c.v_clip);
  c.blur_sigma_px = get_num(t, "blur_sigma_px", c.blur_sigma_px);
  c.falloff_exp_d = get_num(t, "falloff_exp_d", c.falloff_exp_d);
  c.falloff_exp_omega = get_num(t, "falloff_exp_omega", c.falloff_exp_omega);
  return c;
}

TextureSpec parse_texture(const Value& t) {
  check_keys(t, "textures",
             {"kind", "resolution_px", "extent_m", "wrap", "seed", "freq_cpm", "cell_m", "low_cpm",
              "high_cpm", "max_modes", "octaves", "base_cells", "path"});
  TextureSpec s;
  s.kind = texture_kind_from_string(get_str(t, "kind", "bandlimited_noise"));
  s.resolution_px = static_cast<int>(get_int(t, "resolution_px", s.resolution_px));
  s.extent_m = get_num(t, "extent_m", s.extent_m);
  std::string wrap = get_str(t, "wrap", "tile");
  require(wrap == "tile" || wrap == "clamp", "config: wrap must be 'tile' or 'clamp'");
  s.wrap = wrap == "tile" ? WrapMode::Tile : WrapMode::Clamp;
  s.seed = static_cast<uint64_t>(get_int(t, "seed", 0));
  s.freq_cpm = get_num(t, "freq_cpm", s.freq_cpm);
  s.cell_m = get_num(t, "cell_m", s.cell_m);
  s.low_cpm = get_num(t, "low_cpm", s.low_cpm);
  s.high_cpm = get_num(t, "high_cpm", s.high_cpm);
  s.max_modes = static_cast<int>(get_int(t, "max_modes", s.max_modes));
  s.octaves = static_cast<int>(get_int(t, "octaves", s.octaves));
  s.base_cells = static_cast<int>(get_int(t, "base_cells", s.base_cells));
  s.path = get_str(t, "path", "");
  return s;
}

PathEntry parse_path(const Value& t) {
  check_keys(t, "paths",
             {"profile", "duration_s", "rate_hz", "seed", "v", "omega", "amp", "freq_hz", "v_min",
              "v_max", "omega_max", "knot_interval_s", "v_bound", "omega_bound", "file"});
  PathEntry e;
  e.file = get_str(t, "file", "");
  PathSpec& s = e.spec;
  s.profile = path_profile_from_string(get_str(t, "profile", "straight"));
  s.duration_s = get_num(t, "duration_s", s.duration_s);
  s.rate_hz = get_num(t, "rate_hz", s.rate_hz);
  s.seed = static_cast<uint64_t>(get_int(t, "seed", 0));
  s.v = get_num(t, "v", s.v);
  s.omega = get_num(t, "omega", s.omega);
  s.amp = get_num(t, "amp", s.amp);
  s.freq_hz = get_num(t, "freq_hz", s.freq_hz);
  s.v_min = get_num(t, "v_min", s.v_min);
  s.v_max = get_num(t, "v_max", s.v_max);
  s.omega_max = get_num(t, "omega_max", s.omega_max);
  s.knot_interval_s = get_num(t, "knot_interval_s", s.knot_interval_s);
  s.v_bound = get_num(t, "v_bound", s.v_bound);
  s.omega_bound = get_num(t, "omega_bound", s.omega_bound);
  return e;
}

}  // namespace

void ExperimentConfig::validate() const {
  require(schema_version == 1, "config: unsupported schema_version");
  sensor.validate();
  decoder.validate();
  conditioning.validate();
  gyro.validate();
  if (masks.raster_file.empty()) masks.params.validate();
  require(!textures.empty(), "config: at least one texture required");
  require(!paths.empty(), "config: at least one path required");
  for (const auto& t : textures)
    if (t.kind != TextureKind::ImageFile) t.validate();
  for (const auto& p : paths)
    if (p.file.empty()) p.spec.validate();
  require(!heights.ranges_pct.empty(), "config: heights.range_pct must not be empty");
  for (double r : heights.ranges_pct) require(r >= 0 && r < 100, "config: bad height range");
  require(run.stride_ms == 1 || run.stride_ms == 10 || run.stride_ms == 33,
          "config: stride_ms must be 1, 10 or 33");
  if (optimizer.enabled) {
    optimizer.bounds.validate();
    require(optimizer.train_frac > 0 && optimizer.val_frac >= 0 &&
                optimizer.train_frac + optimizer.val_frac < 1.0,
            "config: bad optimizer split fractions");
  }
}

ExperimentConfig ExperimentConfig::from_toml(const Value& root) {
  check_keys(root, "root",
             {"schema_version", "run", "sensor", "masks", "textures", "paths", "heights", "decoder",
              "conditioning", "gyro", "optimizer"});
  ExperimentConfig c;
  c.schema_version = static_cast<int>(get_int(root, "schema_version", 1));

  if (root.contains("run")) {
    const Value& t = root.at("run");
    check_keys(t, "run", {"seed", "output_dir", "jobs", "stride_ms", "save_raw"});
    c.run.seed = static_cast<uint64_t>(get_int(t, "seed", 42));
    c.run.output_dir = get_str(t, "output_dir", c.run.output_dir);
    c.run.jobs = static_cast<int>(get_int(t, "jobs", 0));
    c.run.stride_ms = static_cast<int>(get_int(t, "stride_ms", 33));
    c.run.save_raw = get_bool(t, "save_raw", false);
  }
  if (root.contains("sensor")) c.sensor = parse_sensor(root.at("sensor"));
  if (root.contains("masks")) {
    const Value& t = root.at("masks");
    check_keys(t, "masks", {"xi0", "sigma", "alpha", "raster_file"});
    c.masks.params.xi0 = get_num(t, "xi0", 6.0);
    c.masks.params.sigma = get_num(t, "sigma", 1.0);
    c.masks.params.alpha = get_num(t, "alpha", 1.0);
    c.masks.raster_file = get_str(t, "raster_file", "");
  }
  if (root.contains("textures")) {
    require(root.at("textures").is_array(), "config: [[textures]] must be an array of tables");
    for (const auto& e : root.at("textures").arr) c.textures.push_back(parse_texture(e));
  }
  if (root.contains("paths")) {
    require(root.at("paths").is_array(), "config: [[paths]] must be an array of tables");
    for (const auto& e : root.at("paths").arr) c.paths.push_back(parse_path(e));
  }
  if (root.contains("heights")) {
    const Value& t = root.at("heights");
    check_keys(t, "heights", {"mode", "range_pct", "constant_h_m", "window_s"});
    std::string mode = get_str(t, "mode", "per_window");
    if (mode == "constant")
      c.heights.mode = HeightProfile::Mode::Constant;
    else if (mode == "per_window")
      c.heights.mode = HeightProfile::Mode::PerWindow;
    else if (mode == "smooth")
      c.heights.mode = HeightProfile::Mode::Smooth;
    else
      throw toml::ParseError("config: heights.mode must be constant/per_window/smooth");
    c.heights.ranges_pct.clear();
    if (t.contains("range_pct")) {
      const Value& r = t.at("range_pct");
      if (r.is_array())
        for (const auto& v : r.arr) c.heights.ranges_pct.push_back(v.as_double("range_pct"));
      else
        c.heights.ranges_pct.push_back(r.as_double("range_pct"));
    } else {
      c.heights.ranges_pct.push_back(0.0);
    }
    c.heights.constant_h_m = get_num(t, "constant_h_m", 0.0);
    c.heights.window_s = get_num(t, "window_s", 1.0);
  }
  if (root.contains("decoder")) {
    const Value& t = root.at("decoder");
    check_keys(t, "decoder",
               {"window_len", "zero_pad_factor", "f_min_hz", "confidence_threshold", "median_len"});
    c.decoder.window_len = static_cast<int>(get_int(t, "window_len", c.decoder.window_len));
    c.decoder.zero_pad_factor =
        static_cast<int>(get_int(t, "zero_pad_factor", c.decoder.zero_pad_factor));
    c.decoder.f_min_hz = get_num(t, "f_min_hz", c.decoder.f_min_hz);
    c.decoder.confidence_threshold =
        get_num(t, "confidence_threshold", c.decoder.confidence_threshold);
    c.decoder.median_len = static_cast<int>(get_int(t, "median_len", c.decoder.median_len));
  }
  if (root.contains("conditioning")) {
    const Value& t = root.at("conditioning");
    check_keys(t, "conditioning",
               {"input_rate_hz", "notch_hz", "notch_q", "lowpass_hz", "lowpass_order",
                "output_rate_hz"});
    c.conditioning.input_rate_hz = get_num(t, "input_rate_hz", c.conditioning.input_rate_hz);
    c.conditioning.notch_hz = get_num(t, "notch_hz", c.conditioning.notch_hz);
    c.conditioning.notch_q = get_num(t, "notch_q", c.conditioning.notch_q);
    c.conditioning.lowpass_hz = get_num(t, "lowpass_hz", c.conditioning.lowpass_hz);
    c.conditioning.lowpass_order =
        static_cast<int>(get_int(t, "lowpass_order", c.conditioning.lowpass_order));
    c.conditioning.output_rate_hz = get_num(t, "output_rate_hz", c.conditioning.output_rate_hz);
  }
  if (root.contains("gyro")) {
    const Value& t = root.at("gyro");
    check_keys(t, "gyro", {"noise_std", "bias", "bias_walk_std", "seed"});
    c.gyro.noise_std = get_num(t, "noise_std", 0.0);
    c.gyro.bias = get_num(t, "bias", 0.0);
    c.gyro.bias_walk_std = get_num(t, "bias_walk_std", 0.0);
    c.gyro.seed = static_cast<uint64_t>(get_int(t, "seed", 0));
  }
  if (root.contains("optimizer")) {
    const Value& t = root.at("optimizer");
    check_keys(t, "optimizer",
               {"enabled", "metric", "windows_per_scenario", "height_range_pct", "max_evals",
                "xi0_bounds", "sigma_bounds", "alpha_bounds", "train_frac", "val_frac"});
    c.optimizer.enabled = get_bool(t, "enabled", false);
    c.optimizer.metric = metric_from_string(get_str(t, "metric", "rmse"));
    c.optimizer.windows_per_scenario =
        static_cast<int>(get_int(t, "windows_per_scenario", c.optimizer.windows_per_scenario));
    c.optimizer.height_range_pct = get_num(t, "height_range_pct", c.optimizer.height_range_pct);
    c.optimizer.max_evals = static_cast<int>(get_int(t, "max_evals", c.optimizer.max_evals));
    auto bounds_pair = [&](const std::string& key, double& blo, double& bhi) {
      if (!t.contains(key)) return;
      const Value& b = t.at(key);
      require(b.is_array() && b.arr.size() == 2, "config: " + key + " must be [lo, hi]");
      blo = b.arr[0].as_double(key);
      bhi = b.arr[1].as_double(key);
    };
    bounds_pair("xi0_bounds", c.optimizer.bounds.xi0_lo, c.optimizer.bounds.xi0_hi);
    bounds_pair("sigma_bounds", c.optimizer.bounds.sigma_lo, c.optimizer.bounds.sigma_hi);
    bounds_pair("alpha_bounds", c.optimizer.bounds.alpha_lo, c.optimizer.bounds.alpha_hi);
    c.optimizer.train_frac = get_num(t, "train_frac", c.optimizer.train_frac);
    c.optimizer.val_frac = get_num(t, "val_frac", c.optimizer.val_frac);
  }
  require(!c.textures.empty(), "config: [[textures]] required");
  require(!c.paths.empty(), "config: [[paths]] required");
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  return from_toml(toml::parse_file(path));
}

toml::Value ExperimentConfig::to_toml() const {
  Value root = Value::table();
  root.insert("schema_version", Value::integer(schema_version));

  Value run_t = Value::table();
  run_t.insert("seed", Value::integer(static_cast<int64_t>(run.seed)));
  run_t.insert("output_dir", Value::string(run.output_dir));
  run_t.insert("jobs", Value::integer(run.jobs));
  run_t.insert("stride_ms", Value::integer(run.stride_ms));
  run_t.insert("save_raw", Value::boolean(run.save_raw));
  root.insert("run", run_t);

  Value sensor_t = Value::table();
  sensor_t.insert("d_m", Value::real(sensor.d_m));
  sensor_t.insert("fov_deg", Value::real(rad2deg(sensor.fov_rad)));
  sensor_t.insert("h_nom_m", Value::real(sensor.h_nom_m));
  sensor_t.insert("view_px", Value::integer(sensor.view_px));
  sensor_t.insert("gain", Value::real(sensor.gain));
  sensor_t.insert("read_noise_v", Value::real(sensor.read_noise_v));
  sensor_t.insert("adc_bits", Value::integer(sensor.adc_bits));
  sensor_t.insert("v_clip", Value::real(sensor.v_clip));
  sensor_t.insert("blur_sigma_px", Value::real(sensor.blur_sigma_px));
  sensor_t.insert("falloff_exp_d", Value::real(sensor.falloff_exp_d));
  sensor_t.insert("falloff_exp_omega", Value::real(sensor.falloff_exp_omega));
  root.insert("sensor", sensor_t);

  Value masks_t = Value::table();
  masks_t.insert("xi0", Value::real(masks.params.xi0));
  masks_t.insert("sigma", Value::real(masks.params.sigma));
  masks_t.insert("alpha", Value::real(masks.params.alpha));
  if (!masks.raster_file.empty()) masks_t.insert("raster_file", Value::string(masks.raster_file));
  root.insert("masks", masks_t);

  Value tex_arr = Value::array();
  for (const auto& s : textures) {
    Value t = Value::table();
    t.insert("kind", Value::string(to_string(s.kind)));
    t.insert("resolution_px", Value::integer(s.resolution_px));
    t.insert("extent_m", Value::real(s.extent_m));
    t.insert("wrap", Value::string(s.wrap == WrapMode::Tile ? "tile" : "clamp"));
    t.insert("seed", Value::integer(static_cast<int64_t>(s.seed)));
    switch (s.kind) {
      case TextureKind::Sinusoid: t.insert("freq_cpm", Value::real(s.freq_cpm)); break;
      case TextureKind::Checker: t.insert("cell_m", Value::real(s.cell_m)); break;
      case TextureKind::BandlimitedNoise:
        t.insert("low_cpm", Value::real(s.low_cpm));
        t.insert("high_cpm", Value::real(s.high_cpm));
        t.insert("max_modes", Value::integer(s.max_modes));
        break;
      case TextureKind::PerlinLike:
        t.insert("octaves", Value::integer(s.octaves));
        t.insert("base_cells", Value::integer(s.base_cells));
        break;
      case TextureKind::ImageFile: t.insert("path", Value::string(s.path)); break;
    }
    tex_arr.arr.push_back(t);
  }
  root.insert("textures", tex_arr);

  Value path_arr = Value::array();
  for (const auto& e : paths) {
    Value t = Value::table();
    if (!e.file.empty()) {
      t.insert("file", Value::string(e.file));
    } else {
      const PathSpec& s = e.spec;
      t.insert("profile", Value::string(to_string(s.profile)));
      t.insert("duration_s", Value::real(s.duration_s));
      t.insert("rate_hz", Value::real(s.rate_hz));
      t.insert("seed", Value::integer(static_cast<int64_t>(s.seed)));
      switch (s.profile) {
        case PathProfile::Straight: t.insert("v", Value::real(s.v)); break;
        case PathProfile::Arc:
          t.insert("v", Value::real(s.v));
          t.insert("omega", Value::real(s.omega));
          break;
        case PathProfile::SinusoidSpeed:
          t.insert("v", Value::real(s.v));
          t.insert("amp", Value::real(s.amp));
          t.insert("freq_hz", Value::real(s.freq_hz));
          break;
        case PathProfile::RandomWaypoints:
          t.insert("v_min", Value::real(s.v_min));
          t.insert("v_max", Value::real(s.v_max));
          t.insert("omega_max", Value::real(s.omega_max));
          t.insert("knot_interval_s", Value::real(s.knot_interval_s));
          break;
      }
      t.insert("v_bound", Value::real(s.v_bound));
      t.insert("omega_bound", Value::real(s.omega_bound));
    }
    path_arr.arr.push_back(t);
  }
  root.insert("paths", path_arr);

  Value h_t = Value::table();
  const char* mode = heights.mode == HeightProfile::Mode::Constant
                         ? "constant"
                         : heights.mode == HeightProfile::Mode::PerWindow ? "per_window" : "smooth";
  h_t.insert("mode", Value::string(mode));
  Value ranges = Value::array();
  for (double r : heights.ranges_pct) ranges.arr.push_back(Value::real(r));
  h_t.insert("range_pct", ranges);
  h_t.insert("constant_h_m", Value::real(heights.constant_h_m));
  h_t.insert("window_s", Value::real(heights.window_s));
  root.insert("heights", h_t);

  Value dec_t = Value::table();
  dec_t.insert("window_len", Value::integer(decoder.window_len));
  dec_t.insert("zero_pad_factor", Value::integer(decoder.zero_pad_factor));
  dec_t.insert("f_min_hz", Value::real(decoder.f_min_hz));
  dec_t.insert("confidence_threshold", Value::real(decoder.confidence_threshold));
  dec_t.insert("median_len", Value::integer(decoder.median_len));
  root.insert("decoder", dec_t);

  Value cond_t = Value::table();
  cond_t.insert("input_rate_hz", Value::real(conditioning.input_rate_hz));
  cond_t.insert("notch_hz", Value::real(conditioning.notch_hz));
  cond_t.insert("notch_q", Value::real(conditioning.notch_q));
  cond_t.insert("lowpass_hz", Value::real(conditioning.lowpass_hz));
  cond_t.insert("lowpass_order", Value::integer(conditioning.lowpass_order));
  cond_t.insert("output_rate_hz", Value::real(conditioning.output_rate_hz));
  root.insert("conditioning", cond_t);

  Value gyro_t = Value::table();
  gyro_t.insert("noise_std", Value::real(gyro.noise_std));
  gyro_t.insert("bias", Value::real(gyro.bias));
  gyro_t.insert("bias_walk_std", Value::real(gyro.bias_walk_std));
  gyro_t.insert("seed", Value::integer(static_cast<int64_t>(gyro.seed)));
  root.insert("gyro", gyro_t);

  Value opt_t = Value::table();
  opt_t.insert("enabled", Value::boolean(optimizer.enabled));
  opt_t.insert("metric", Value::string(to_string(optimizer.metric)));
  opt_t.insert("windows_per_scenario", Value::integer(optimizer.windows_per_scenario));
  opt_t.insert("height_range_pct", Value::real(optimizer.height_range_pct));
  opt_t.insert("max_evals", Value::integer(optimizer.max_evals));
  Value xb = Value::array();
  xb.arr = {Value::real(optimizer.bounds.xi0_lo), Value::real(optimizer.bounds.xi0_hi)};
  opt_t.insert("xi0_bounds", xb);
  Value sb = Value::array();
  sb.arr = {Value::real(optimizer.bounds.sigma_lo), Value::real(optimizer.bounds.sigma_hi)};
  opt_t.insert("sigma_bounds", sb);
  Value ab = Value::array();
  ab.arr = {Value::real(optimizer.bounds.alpha_lo), Value::real(optimizer.bounds.alpha_hi)};
  opt_t.insert("alpha_bounds", ab);
  opt_t.insert("train_frac", Value::real(optimizer.train_frac));
  opt_t.insert("val_frac", Value::real(optimizer.val_frac));
  root.insert("optimizer", opt_t);

  return root;
}

namespace {

struct Scenario {
  size_t index;
  size_t tex_idx;
  size_t path_idx;
  double height_range_pct;
  std::string name;
};

MaskRaster load_masks(const ExperimentConfig& cfg) {
  if (!cfg.masks.raster_file.empty()) {
    std::ifstream in(cfg.masks.raster_file);
    if (!in) throw std::runtime_error("config: cannot open raster file " + cfg.masks.raster_file);
    std::ostringstream ss;
    ss << in.rdbuf();
    MaskRaster m = mask_from_json(ss.str());
    require(m.resolution_px == cfg.sensor.view_px,
            "config: raster resolution does not match sensor view_px");
    return m;
  }
  return rasterize(cfg.masks.params, cfg.sensor.view_px);
}

PlanarPath scenario_path(const ExperimentConfig& cfg, size_t path_idx) {
  const PathEntry& e = cfg.paths[path_idx];
  if (!e.file.empty()) return load_path_csv(e.file);
  return generate_path(e.spec);
}

ScenarioRow run_scenario(const ExperimentConfig& cfg, const MaskRaster& masks, const Scenario& sc,
                         const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  TextureField field = generate(cfg.textures[sc.tex_idx]);
  PlanarPath ref = scenario_path(cfg, sc.path_idx);

  HeightProfile hp;
  hp.mode = sc.height_range_pct > 0 ? cfg.heights.mode : HeightProfile::Mode::Constant;
  if (hp.mode == HeightProfile::Mode::Constant) {
    hp.constant_h_m = cfg.heights.constant_h_m;
  } else {
    hp.range_pct = sc.height_range_pct;
    hp.window_s = cfg.heights.window_s;
  }

  uint64_t sim_seed = Rng::derive(cfg.run.seed, sc.index);
  SimResult sim = simulate(field, masks, cfg.sensor, ref, hp, sim_seed);
  if (cfg.run.save_raw) save_four_channel_csv(sim.raw, dir / "trace_raw.csv");
  save_signal_csv(sim.diff, dir / "trace.csv");

  double xi_g = ground_frequency(masks.params, cfg.sensor, cfg.sensor.h_nom_m);
  auto estimates = decode_stream(sim.diff, cfg.run.stride_ms, xi_g, cfg.decoder);
  save_estimates_csv(estimates, dir / "estimates.csv");

  GyroModel gyro = cfg.gyro;
  gyro.seed = Rng::derive(cfg.run.seed, sc.index ^ 0x9d2cull);
  auto omega_meas = gyro_measure(ref, gyro);
  save_gyro_csv(ref.t, omega_meas, dir / "gyro.csv");

  ScenarioRow row;
  row.name = sc.name;
  row.texture = to_string(cfg.textures[sc.tex_idx].kind) + "/" +
                std::to_string(cfg.textures[sc.tex_idx].seed);
  row.path = cfg.paths[sc.path_idx].file.empty() ? to_string(cfg.paths[sc.path_idx].spec.profile)
                                                 : cfg.paths[sc.path_idx].file;
  row.height_range_pct = sc.height_range_pct;

  size_t total_windows = 0;
  {
    size_t w = static_cast<size_t>(cfg.decoder.window_len);
    size_t stride = static_cast<size_t>(cfg.run.stride_ms);
    if (sim.diff.size() >= w) total_windows = (sim.diff.size() - w) / stride + 1;
  }
  row.windows = total_windows;
  row.accept_rate =
      total_windows > 0 ? static_cast<double>(estimates.size()) / static_cast<double>(total_windows)
                        : 0.0;

  double sq = 0.0, ab = 0.0;
  for (const auto& e : estimates) {
    double v_true = window_target_speed(ref, e.t_s);
    double err = e.v_hat - v_true;
    sq += err * err;
    ab += std::abs(err);
  }
  if (!estimates.empty()) {
    row.rmse = std::sqrt(sq / static_cast<double>(estimates.size()));
    row.mae = ab / static_cast<double>(estimates.size());
  }

  OdometryConfig ocfg;
  PlanarPath est = integrate(estimates, ref.t, omega_meas, ocfg);
  // Score against the reference rebased to its pose where dead reckoning
  // starts (shared initial pose, no further alignment).
  PlanarPath ref_scored = rebase(ref, est.t.front());
  save_path_csv(est, dir / "est_path.csv");
  save_path_csv(ref_scored, dir / "ref_path.csv");
  TrajectoryScore score = score_trajectory(est, ref_scored);
  row.ate_m = score.ate_m;
  row.drift_pct = score.drift_pct;

  nlohmann::json sj{{"ate_m", score.ate_m},
                    {"drift_pct", score.drift_pct},
                    {"path_length_m", score.path_length_m},
                    {"duration_s", score.duration_s}};
  std::ofstream(dir / "score.json") << sj.dump(2) << "\n";
  write_trajectory_svg(est, ref_scored, dir / "overlay.svg", sc.name);
  return row;
}

void write_summary(const ExperimentSummary& summary, const std::filesystem::path& out) {
  {
    std::ofstream f(out / "summary.csv", std::ios::binary);
    f << "scenario,texture,path,height_range_pct,windows,accept_rate,rmse_m_s,mae_m_s,ate_m,drift_pct\n";
    char buf[256];
    for (const auto& r : summary.rows) {
      std::snprintf(buf, sizeof(buf), "%.1f,%zu,%.4f,%.6f,%.6f,%.6f,%.4f", r.height_range_pct,
                    r.windows, r.accept_rate, r.rmse, r.mae, r.ate_m, r.drift_pct);
      f << r.name << ',' << r.texture << ',' << r.path << ',' << buf << '\n';
    }
  }
  {
    std::ofstream f(out / "summary.md", std::ios::binary);
    f << "| scenario | texture | path | height +/-% | windows | accept | RMSE (m/s) | MAE (m/s) | "
         "ATE (m) | drift (%) |\n";
    f << "|---|---|---|---|---|---|---|---|---|---|\n";
    char buf[256];
    for (const auto& r : summary.rows) {
      std::snprintf(buf, sizeof(buf), "| %s | %s | %s | %.1f | %zu | %.3f | %.4f | %.4f | %.4f | %.3f |",
                    r.name.c_str(), r.texture.c_str(), r.path.c_str(), r.height_range_pct, r.windows,
                    r.accept_rate, r.rmse, r.mae, r.ate_m, r.drift_pct);
      f << buf << '\n';
    }
    if (summary.masks) {
      const auto& m = *summary.masks;
      f << "\n### Mask comparison (fixed vs optimized)\n\n";
      f << "| masks | train objective | test objective |\n|---|---|---|\n";
      std::snprintf(buf, sizeof(buf), "| fixed (6, 1, 1) | %.5f | %.5f |", m.fixed_train, m.fixed_test);
      f << buf << '\n';
      std::snprintf(buf, sizeof(buf), "| optimized (%.3f, %.3f, %.3f) | %.5f | %.5f |",
                    m.optimized.xi0, m.optimized.sigma, m.optimized.alpha, m.optimized_train,
                    m.optimized_test);
      f << buf << '\n';
    }
  }
}

ObjectiveConfig objective_from_experiment(const ExperimentConfig& cfg,
                                          const std::vector<std::pair<size_t, size_t>>& pairs) {
  ObjectiveConfig oc;
  oc.textures = cfg.textures;
  for (const auto& p : cfg.paths) {
    require(p.file.empty(), "optimizer: file-based paths are not supported in the objective");
    oc.paths.push_back(p.spec);
  }
  oc.scenario_pairs = pairs;
  oc.height_range_pct = cfg.optimizer.height_range_pct;
  oc.windows_per_scenario = cfg.optimizer.windows_per_scenario;
  oc.stride_ms = cfg.run.stride_ms;
  oc.master_seed = Rng::derive(cfg.run.seed, 0x0b9ec7ull);
  oc.metric = cfg.optimizer.metric;
  oc.sensor = cfg.sensor;
  oc.decoder = cfg.decoder;
  oc.jobs = cfg.run.jobs;
  return oc;
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::path out(cfg.run.output_dir);
  std::filesystem::create_directories(out);

  std::vector<std::string> stages;
  nlohmann::json manifest;
  auto write_manifest = [&](const std::string& status, const std::string& error = "") {
    manifest["status"] = status;
    manifest["stages"] = stages;
    if (!error.empty()) manifest["error"] = error;
    std::ofstream(out / "manifest.json") << manifest.dump(2) << "\n";
  };

  ExperimentSummary summary;
  summary.output_dir = out;
  try {
    toml::emit_file(cfg.to_toml(), out / "resolved.toml");
    stages.push_back("resolved_config");

    MaskRaster masks = load_masks(cfg);
    {
      std::ofstream mf(out / "masks.json");
      mf << mask_to_json(masks) << "\n";
      save_mask_pgms(masks, out / "masks");
    }
    stages.push_back("masks");

    // Scenario grid: texture x path x height range.
    std::vector<Scenario> scenarios;
    for (size_t hi = 0; hi < cfg.heights.ranges_pct.size(); ++hi) {
      for (size_t ti = 0; ti < cfg.textures.size(); ++ti) {
        for (size_t pi = 0; pi < cfg.paths.size(); ++pi) {
          Scenario sc;
          sc.index = scenarios.size();
          sc.tex_idx = ti;
          sc.path_idx = pi;
          sc.height_range_pct = cfg.heights.ranges_pct[hi];
          char name[64];
          std::snprintf(name, sizeof(name), "s%02zu_t%zu_p%zu_h%g", sc.index, ti, pi,
                        sc.height_range_pct);
          sc.name = name;
          scenarios.push_back(sc);
        }
      }
    }
    manifest["scenarios"] = scenarios.size();

    summary.rows.resize(scenarios.size());
    parallel_for(scenarios.size(), cfg.run.jobs, [&](size_t i) {
      summary.rows[i] = run_scenario(cfg, masks, scenarios[i], out / scenarios[i].name);
    });
    stages.push_back("scenarios");

    if (cfg.optimizer.enabled) {
      // 70/10/20 split of the (texture, path) combos by deterministically
      // shuffled scenario seed order; validation is reserved but unused by
      // the derivative-free search.
      std::vector<std::pair<size_t, size_t>> combos;
      for (size_t ti = 0; ti < cfg.textures.size(); ++ti)
        for (size_t pi = 0; pi < cfg.paths.size(); ++pi) combos.emplace_back(ti, pi);
      Rng rng(Rng::derive(cfg.run.seed, 0x5b11ull));
      for (size_t i = combos.size(); i > 1; --i)
        std::swap(combos[i - 1], combos[rng.below(i)]);
      size_t n_train = std::max<size_t>(1, static_cast<size_t>(combos.size() * cfg.optimizer.train_frac));
      size_t n_val = static_cast<size_t>(combos.size() * cfg.optimizer.val_frac);
      if (n_train + n_val >= combos.size()) n_val = 0;
      std::vector<std::pair<size_t, size_t>> train(combos.begin(),
                                                   combos.begin() + static_cast<long>(n_train));
      std::vector<std::pair<size_t, size_t>> test(combos.begin() + static_cast<long>(n_train + n_val),
                                                  combos.end());
      if (test.empty()) test = train;

      ObjectiveConfig train_cfg = objective_from_experiment(cfg, train);
      NelderMeadOptions nm;
      nm.max_evals = cfg.optimizer.max_evals;
      OptimResult res = optimize(train_cfg, cfg.optimizer.bounds, {}, nm);
      {
        auto rj = nlohmann::json::parse(optim_result_to_json(res));
        auto pair_list = [](const std::vector<std::pair<size_t, size_t>>& ps) {
          nlohmann::json a = nlohmann::json::array();
          for (const auto& [t, p] : ps) a.push_back({{"texture", t}, {"path", p}});
          return a;
        };
        rj["split"] = {{"train", pair_list(train)},
                       {"test", pair_list(test)},
                       {"train_master_seed", train_cfg.master_seed}};
        std::ofstream(out / "optim_result.json") << rj.dump(2) << "\n";
      }
      save_history_csv(res, out / "optim_history.csv");

      ObjectiveConfig test_cfg = objective_from_experiment(cfg, test);
      test_cfg.master_seed = Rng::derive(cfg.run.seed, 0x7e57ull);  // held-out draws
      ObjectiveContext test_ctx(test_cfg);
      MaskComparison mc;
      mc.optimized = res.best_params;
      mc.fixed_train = res.baseline_objective;
      mc.optimized_train = res.best_objective;
      mc.fixed_test = test_ctx.evaluate(GaborParams{6.0, 1.0, 1.0});
      mc.optimized_test = test_ctx.evaluate(res.best_params);
      summary.masks = mc;
      stages.push_back("optimizer");
    }

    write_summary(summary, out);
    stages.push_back("summary");
    write_manifest("ok");
  } catch (const std::exception& e) {
    write_manifest("failed", e.what());
    throw;
  }
  return summary;
}

uint64_t hash_output_tree(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(std::filesystem::relative(entry.path(), dir));
  std::sort(files.begin(), files.end());
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& rel : files) {
    std::string name = rel.generic_string();
    h = fnv1a64(name.data(), name.size(), h);
    std::ifstream in(dir / rel, std::ios::binary);
    std::vector<char> buf(1 << 16);
    while (in) {
      in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
      h = fnv1a64(buf.data(), static_cast<size_t>(in.gcount()), h);
    }
  }
  return h;
}

}  // namespace gaborodo

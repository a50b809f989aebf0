// SPDX-License-Identifier: Apache-2.0
//
// gabor-odo: config-driven pipeline for the 4-pixel planar odometry
// simulator. Subcommands map 1:1 onto the library stages; numeric outputs
// are pure functions of the resolved config (seeds included).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaborodo/csv.hpp"
#include "gaborodo/experiment.hpp"
#include "gaborodo/rng.hpp"
#include "gaborodo/svg.hpp"

namespace fs = std::filesystem;
using namespace gaborodo;

namespace {

struct CommonOpts {
  std::string config_file;
  std::string out_dir = "out";
  std::optional<uint64_t> seed;
  std::optional<int> stride_ms;
  int jobs = 0;
};

ExperimentConfig load_config(const CommonOpts& opts) {
  if (opts.config_file.empty()) throw std::runtime_error("--config <file> is required");
  ExperimentConfig cfg = ExperimentConfig::from_file(opts.config_file);
  if (opts.seed) cfg.run.seed = *opts.seed;
  if (opts.stride_ms) cfg.run.stride_ms = *opts.stride_ms;
  if (opts.jobs > 0) cfg.run.jobs = opts.jobs;
  cfg.run.output_dir = opts.out_dir;
  cfg.validate();
  return cfg;
}

void write_resolved(const ExperimentConfig& cfg, const fs::path& out) {
  fs::create_directories(out);
  toml::emit_file(cfg.to_toml(), out / "resolved.toml");
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_config = true) {
  auto* c = cmd->add_option("--config", opts.config_file, "Experiment config (TOML)");
  if (needs_config) c->required();
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--seed", opts.seed, "Override the config seed");
  cmd->add_option("--stride-ms", opts.stride_ms, "Decoder stride in ms")
      ->check(CLI::IsMember({1, 10, 33}));
  cmd->add_option("--jobs", opts.jobs, "Parallel scenario workers (0 = auto/GABOR_ODO_THREADS)");
}

int cmd_gen_texture(const CommonOpts& opts, int index) {
  ExperimentConfig cfg = load_config(opts);
  require(index >= 0 && index < static_cast<int>(cfg.textures.size()),
          "gen-texture: texture index out of range");
  fs::path out(opts.out_dir);
  write_resolved(cfg, out);
  TextureField field = generate(cfg.textures[static_cast<size_t>(index)]);
  fs::path file = out / ("texture_" + std::to_string(index) + ".pgm");
  save_pgm(field.grid, file);
  std::printf("wrote %s (%dx%d, extent %.3f m)\n", file.string().c_str(), field.grid.cols,
              field.grid.rows, field.extent_x_m);
  return 0;
}

int cmd_simulate(const CommonOpts& opts, int tex_index, int path_index, double height_range) {
  ExperimentConfig cfg = load_config(opts);
  require(tex_index >= 0 && tex_index < static_cast<int>(cfg.textures.size()),
          "simulate: texture index out of range");
  require(path_index >= 0 && path_index < static_cast<int>(cfg.paths.size()),
          "simulate: path index out of range");
  fs::path out(opts.out_dir);
  write_resolved(cfg, out);

  TextureField field = generate(cfg.textures[static_cast<size_t>(tex_index)]);
  const PathEntry& pe = cfg.paths[static_cast<size_t>(path_index)];
  PlanarPath path = pe.file.empty() ? generate_path(pe.spec) : load_path_csv(pe.file);

  MaskRaster masks = cfg.masks.raster_file.empty()
                         ? rasterize(cfg.masks.params, cfg.sensor.view_px)
                         : [&] {
                             std::ifstream in(cfg.masks.raster_file);
                             std::ostringstream ss;
                             ss << in.rdbuf();
                             return mask_from_json(ss.str());
                           }();
  HeightProfile hp;
  if (height_range > 0) {
    hp = HeightProfile::per_window(height_range, cfg.heights.window_s);
    hp.mode = cfg.heights.mode == HeightProfile::Mode::Smooth ? HeightProfile::Mode::Smooth
                                                              : HeightProfile::Mode::PerWindow;
  } else if (cfg.heights.mode == HeightProfile::Mode::Constant && cfg.heights.constant_h_m > 0) {
    hp = HeightProfile::constant(cfg.heights.constant_h_m);
  }
  SimResult sim = simulate(field, masks, cfg.sensor, path, hp, cfg.run.seed);
  save_four_channel_csv(sim.raw, out / "trace_raw.csv");
  save_signal_csv(sim.diff, out / "trace.csv");
  save_path_csv(path, out / "ref_path.csv");
  GyroModel gyro = cfg.gyro;
  gyro.seed = Rng::derive(cfg.run.seed, 0x9d2cull);
  save_gyro_csv(path.t, gyro_measure(path, gyro), out / "gyro.csv");
  std::printf("wrote %zu samples to %s\n", sim.diff.size(), (out / "trace.csv").string().c_str());
  return 0;
}

int cmd_condition(const CommonOpts& opts, const std::string& input) {
  ExperimentConfig cfg = load_config(opts);
  fs::path out(opts.out_dir);
  write_resolved(cfg, out);
  FourChannelTrace raw = load_four_channel_csv(input);
  SignalTrace tr = condition(raw, cfg.conditioning);
  save_signal_csv(tr, out / "trace.csv");
  std::printf("conditioned %zu -> %zu samples\n", raw.size(), tr.size());
  return 0;
}

int cmd_decode(const CommonOpts& opts, const std::string& input, double height_override) {
  ExperimentConfig cfg = load_config(opts);
  fs::path out(opts.out_dir);
  write_resolved(cfg, out);
  SignalTrace tr = load_signal_csv(input);
  double h = height_override > 0 ? height_override : cfg.sensor.h_nom_m;
  double xi_g = ground_frequency(cfg.masks.params, cfg.sensor, h);
  auto est = decode_stream(tr, cfg.run.stride_ms, xi_g, cfg.decoder);
  save_estimates_csv(est, out / "estimates.csv");
  std::printf("decoded %zu accepted windows (xi_ground %.2f cycles/m)\n", est.size(), xi_g);
  return 0;
}

int cmd_optimize(const CommonOpts& opts) {
  ExperimentConfig cfg = load_config(opts);
  fs::path out(opts.out_dir);
  write_resolved(cfg, out);
  ObjectiveConfig oc;
  oc.textures = cfg.textures;
  for (const auto& p : cfg.paths) {
    require(p.file.empty(), "optimize-masks: file-based paths not supported");
    oc.paths.push_back(p.spec);
  }
  oc.height_range_pct = cfg.optimizer.height_range_pct;
  oc.windows_per_scenario = cfg.optimizer.windows_per_scenario;
  oc.stride_ms = cfg.run.stride_ms;
  oc.master_seed = cfg.run.seed;
  oc.metric = cfg.optimizer.metric;
  oc.sensor = cfg.sensor;
  oc.decoder = cfg.decoder;
  oc.jobs = cfg.run.jobs;
  NelderMeadOptions nm;
  nm.max_evals = cfg.optimizer.max_evals;
  OptimResult res = optimize(oc, cfg.optimizer.bounds, {cfg.masks.params}, nm);
  std::ofstream(out / "optim_result.json") << optim_result_to_json(res) << "\n";
  save_history_csv(res, out / "optim_history.csv");
  std::printf("best objective %.6f m/s at xi0=%.4f sigma=%.4f alpha=%.4f (baseline %.6f)\n",
              res.best_objective, res.best_params.xi0, res.best_params.sigma, res.best_params.alpha,
              res.baseline_objective);
  return 0;
}

int cmd_odometry(const CommonOpts& opts, const std::string& estimates_file,
                 const std::string& gyro_file) {
  ExperimentConfig cfg = load_config(opts);
  fs::path out(opts.out_dir);
  write_resolved(cfg, out);
  auto est = load_estimates_csv(estimates_file);
  CsvTable g = read_csv(gyro_file);
  OdometryConfig ocfg;
  PlanarPath path = integrate(est, g.col("t"), g.col("omega_z"), ocfg);
  save_path_csv(path, out / "est_path.csv");
  std::printf("integrated %zu estimates over %.2f s\n", est.size(), path.duration());
  return 0;
}

int cmd_evaluate(const CommonOpts& opts, const std::string& est_file, const std::string& ref_file) {
  fs::path out(opts.out_dir);
  fs::create_directories(out);
  PlanarPath est = load_path_csv(est_file);
  PlanarPath ref = load_path_csv(ref_file);
  TrajectoryScore s = score_trajectory(est, ref);
  nlohmann::json j{{"ate_m", s.ate_m},
                   {"drift_pct", s.drift_pct},
                   {"path_length_m", s.path_length_m},
                   {"duration_s", s.duration_s}};
  std::ofstream(out / "score.json") << j.dump(2) << "\n";
  write_trajectory_svg(est, ref, out / "overlay.svg");
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_experiment(const CommonOpts& opts) {
  ExperimentConfig cfg = load_config(opts);
  ExperimentSummary summary = run_experiment(cfg);
  std::printf("experiment complete: %zu scenarios -> %s\n", summary.rows.size(),
              summary.output_dir.string().c_str());
  for (const auto& r : summary.rows)
    std::printf("  %-18s rmse %.4f m/s  ate %.4f m  drift %.3f%%\n", r.name.c_str(), r.rmse, r.ate_m,
                r.drift_pct);
  return 0;
}

void print_error_json(const std::string& stage, const std::string& message) {
  nlohmann::json j{{"error", {{"stage", stage}, {"message", message}}}};
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"4-pixel Gabor-mask planar odometry: simulation, decoding, optimization"};
  app.require_subcommand(1);

  CommonOpts opts;
  int tex_index = 0, path_index = 0;
  double height_range = 0.0, height_override = 0.0;
  std::string input_file, estimates_file, gyro_file, est_file, ref_file;

  auto* gen = app.add_subcommand("gen-texture", "Generate a texture from the config");
  add_common(gen, opts);
  gen->add_option("--index", tex_index, "Texture index in the config");

  auto* sim = app.add_subcommand("simulate", "Simulate the four detector signals along a path");
  add_common(sim, opts);
  sim->add_option("--texture-index", tex_index, "Texture index");
  sim->add_option("--path-index", path_index, "Path index");
  sim->add_option("--height-range", height_range, "Per-window height randomization (+/- %)");

  auto* cond = app.add_subcommand("condition", "Condition a raw 4-channel DAQ log to 1 kHz");
  add_common(cond, opts);
  cond->add_option("--input", input_file, "Raw 4-channel CSV")->required();

  auto* dec = app.add_subcommand("decode", "Decode signed speed from a differential trace");
  add_common(dec, opts);
  dec->add_option("--input", input_file, "Differential trace CSV")->required();
  dec->add_option("--height-m", height_override, "Assume this standoff height instead of nominal");

  auto* opt = app.add_subcommand("optimize-masks", "Derivative-free Gabor parameter search");
  add_common(opt, opts);

  auto* odo = app.add_subcommand("odometry", "Integrate speed + gyro into a trajectory");
  add_common(odo, opts);
  odo->add_option("--estimates", estimates_file, "Estimates CSV")->required();
  odo->add_option("--gyro", gyro_file, "Gyro CSV (t,omega_z)")->required();

  auto* eval = app.add_subcommand("evaluate", "Score an estimated path against a reference");
  add_common(eval, opts, false);
  eval->add_option("--est", est_file, "Estimated path CSV")->required();
  eval->add_option("--ref", ref_file, "Reference path CSV")->required();

  auto* exp = app.add_subcommand("experiment", "Run the full config-driven pipeline");
  add_common(exp, opts);

  CLI11_PARSE(app, argc, argv);

  std::string stage = app.get_subcommands().front()->get_name();
  try {
    if (gen->parsed()) return cmd_gen_texture(opts, tex_index);
    if (sim->parsed()) return cmd_simulate(opts, tex_index, path_index, height_range);
    if (cond->parsed()) return cmd_condition(opts, input_file);
    if (dec->parsed()) return cmd_decode(opts, input_file, height_override);
    if (opt->parsed()) return cmd_optimize(opts);
    if (odo->parsed()) return cmd_odometry(opts, estimates_file, gyro_file);
    if (eval->parsed()) return cmd_evaluate(opts, est_file, ref_file);
    if (exp->parsed()) return cmd_experiment(opts);
  } catch (const toml::ParseError& e) {
    print_error_json(stage, e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    print_error_json(stage, e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error_json(stage, e.what());
    return 1;
  }
  return 0;
}

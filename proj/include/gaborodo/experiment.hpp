// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gaborodo/decoder.hpp"
#include "gaborodo/odometry.hpp"
#include "gaborodo/optimizer.hpp"
#include "gaborodo/sensor.hpp"
#include "gaborodo/texture.hpp"
#include "gaborodo/toml.hpp"
#include "gaborodo/trajectory.hpp"

namespace gaborodo {

struct PathEntry {
  PathSpec spec;
  std::string file;  // when set, the path is loaded from CSV instead
};

struct MaskSection {
  GaborParams params;
  std::string raster_file;  // optional JSON raster; overrides params' raster
};

struct HeightSection {
  HeightProfile::Mode mode = HeightProfile::Mode::PerWindow;
  std::vector<double> ranges_pct = {0.0};  // one experiment variant per value
  double constant_h_m = 0.0;               // Constant mode (0 = nominal)
  double window_s = 1.0;
};

struct OptimizerSection {
  bool enabled = false;
  ErrorMetric metric = ErrorMetric::Rmse;
  int windows_per_scenario = 5;
  double height_range_pct = 25.0;
  int max_evals = 200;
  ParamBounds bounds;
  double train_frac = 0.7;
  double val_frac = 0.1;
};

struct RunSection {
  uint64_t seed = 42;
  std::string output_dir = "out";
  int jobs = 0;
  int stride_ms = 33;
  bool save_raw = false;
};

/// Config for the end-to-end experiment pipeline; TOML-serializable with a
/// versioned schema. parse validates before any compute; every run writes the
/// fully resolved config into the output directory.
struct ExperimentConfig {
  int schema_version = 1;
  RunSection run;
  SensorConfig sensor;
  MaskSection masks;
  std::vector<TextureSpec> textures;
  std::vector<PathEntry> paths;
  HeightSection heights;
  DecoderConfig decoder;
  ConditioningConfig conditioning;
  GyroModel gyro;
  OptimizerSection optimizer;

  void validate() const;

  static ExperimentConfig from_toml(const toml::Value& root);
  static ExperimentConfig from_file(const std::filesystem::path& path);
  toml::Value to_toml() const;
};

struct ScenarioRow {
  std::string name;
  std::string texture;
  std::string path;
  double height_range_pct = 0.0;
  size_t windows = 0;
  double accept_rate = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
  double ate_m = 0.0;
  double drift_pct = 0.0;
};

struct MaskComparison {
  GaborParams optimized;
  double fixed_train = 0.0, optimized_train = 0.0;
  double fixed_test = 0.0, optimized_test = 0.0;
};

struct ExperimentSummary {
  std::vector<ScenarioRow> rows;
  std::optional<MaskComparison> masks;
  std::filesystem::path output_dir;
};

/// Runs texture gen -> simulate -> decode -> (optional mask optimization) ->
/// odometry -> evaluate for every (texture, path, height-range) scenario.
/// Scenario outputs land in scenario-scoped subdirectories; a stage manifest
/// is written even on failure.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

/// Combined FNV-1a hash over every regular file under dir (sorted relative
/// paths), for repeat-run determinism checks.
uint64_t hash_output_tree(const std::filesystem::path& dir);

}  // namespace gaborodo

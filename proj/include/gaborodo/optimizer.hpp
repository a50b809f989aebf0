// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaborodo/decoder.hpp"
#include "gaborodo/mask.hpp"
#include "gaborodo/sensor.hpp"
#include "gaborodo/texture.hpp"
#include "gaborodo/trajectory.hpp"

namespace gaborodo {

enum class ErrorMetric { Rmse, Mae };

ErrorMetric metric_from_string(const std::string& s);
std::string to_string(ErrorMetric m);

/// Batch of simulated scenarios (texture x path cross product) the mask
/// parameters are scored against. Scenario RNG streams derive only from
/// (master_seed, scenario index), so every candidate parameter vector sees
/// identical noise and height draws (common random numbers).
struct ObjectiveConfig {
  std::vector<TextureSpec> textures;
  std::vector<PathSpec> paths;
  /// When non-empty, scenarios are these explicit (texture, path) index
  /// pairs instead of the full cross product (used for train/test splits).
  std::vector<std::pair<size_t, size_t>> scenario_pairs;
  double height_range_pct = 25.0;
  int windows_per_scenario = 5;
  int stride_ms = 33;
  uint64_t master_seed = 1;
  ErrorMetric metric = ErrorMetric::Rmse;
  SensorConfig sensor;
  DecoderConfig decoder;
  double rejection_budget = 0.2;        // tolerated rejection fraction
  double rejection_penalty_weight = 1.0;  // m/s per unit excess rejection
  double empty_penalty_m_s = 1.0;       // metric term when nothing is accepted
  int jobs = 0;                          // scenario-level parallelism (0 = auto)

  void validate() const;
  size_t n_scenarios() const {
    return scenario_pairs.empty() ? textures.size() * paths.size() : scenario_pairs.size();
  }
  /// Trace duration needed for windows_per_scenario decode windows.
  double scenario_duration_s() const;
};

/// Pre-generated scenario inputs (textures and paths are identical for every
/// candidate, so they are built once and shared across evaluations).
class ObjectiveContext {
 public:
  explicit ObjectiveContext(ObjectiveConfig cfg);

  /// Speed error of the spectral decoder under the given masks, aggregated
  /// over all scenarios, plus a penalty for rejection above the budget.
  /// Deterministic for a fixed master_seed; scenarios evaluate in parallel.
  double evaluate(const GaborParams& params) const;

  const ObjectiveConfig& config() const { return cfg_; }

 private:
  ObjectiveConfig cfg_;
  std::vector<TextureField> textures_;
  std::vector<PlanarPath> paths_;
};

/// One-shot convenience wrapper (builds a fresh context per call).
double objective(const GaborParams& params, const ObjectiveConfig& cfg);

struct ParamBounds {
  double xi0_lo = 1.0, xi0_hi = 20.0;
  double sigma_lo = 0.2, sigma_hi = 2.0;
  double alpha_lo = 1e-3, alpha_hi = 1.0;

  void validate() const;
  GaborParams clamp(const GaborParams& p) const;
  bool contains(const GaborParams& p) const;
};

struct NelderMeadOptions {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double spread_tol = 1e-4;  // m/s
  int max_evals = 200;       // per start
  double init_step_frac = 0.10;  // initial simplex step as a bound-range fraction
};

struct OptimResult {
  GaborParams best_params;
  double best_objective = 0.0;
  double baseline_objective = 0.0;  // value at the fixed-Gabor start
  std::vector<std::pair<GaborParams, double>> history;  // every evaluation, in order
};

/// Multi-start Nelder-Mead over (xi0, sigma, alpha) with projection onto the
/// bounds. The fixed-Gabor point (6, 1, 1) is always included as a start, so
/// the result can never be worse than that baseline.
OptimResult optimize(const ObjectiveContext& ctx, const ParamBounds& bounds,
                     std::vector<GaborParams> starts = {},
                     const NelderMeadOptions& options = {});
OptimResult optimize(const ObjectiveConfig& cfg, const ParamBounds& bounds,
                     std::vector<GaborParams> starts = {},
                     const NelderMeadOptions& options = {});

std::string optim_result_to_json(const OptimResult& r);
void save_history_csv(const OptimResult& r, const std::filesystem::path& file);

}  // namespace gaborodo

// SPDX-License-Identifier: Apache-2.0
#include "gaborodo/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "gaborodo/csv.hpp"
#include "gaborodo/rng.hpp"
#include "gaborodo/util.hpp"

namespace gaborodo {

ErrorMetric metric_from_string(const std::string& s) {
  if (s == "rmse") return ErrorMetric::Rmse;
  if (s == "mae") return ErrorMetric::Mae;
  throw std::invalid_argument("metric: expected 'rmse' or 'mae', got '" + s + "'");
}

std::string to_string(ErrorMetric m) { return m == ErrorMetric::Rmse ? "rmse" : "mae"; }

void ObjectiveConfig::validate() const {
  require(!textures.empty() && !paths.empty(), "objective: scenario lists must be non-empty");
  for (const auto& [ti, pi] : scenario_pairs)
    require(ti < textures.size() && pi < paths.size(), "objective: scenario pair out of range");
  require(windows_per_scenario >= 1, "objective: need at least one window per scenario");
  require(stride_ms == 1 || stride_ms == 10 || stride_ms == 33, "objective: stride must be 1/10/33");
  require(height_range_pct >= 0 && height_range_pct < 100, "objective: bad height range");
  sensor.validate();
  decoder.validate();
}

double ObjectiveConfig::scenario_duration_s() const {
  double window_s = decoder.window_len / decoder.rate_hz;
  return window_s + (windows_per_scenario - 1) * stride_ms / 1000.0;
}

namespace {

struct ScenarioStats {
  double sq_err = 0.0;
  double abs_err = 0.0;
  size_t accepted = 0;
  size_t total = 0;
};

}  // namespace

ObjectiveContext::ObjectiveContext(ObjectiveConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  for (const auto& spec : cfg_.textures) textures_.push_back(generate(spec));
  double need = cfg_.scenario_duration_s();
  for (PathSpec spec : cfg_.paths) {
    if (spec.duration_s < need) spec.duration_s = need;
    paths_.push_back(generate_path(spec));
  }
}

double ObjectiveContext::evaluate(const GaborParams& params) const {
  params.validate();
  const ObjectiveConfig& cfg = cfg_;
  MaskRaster masks = rasterize(params, cfg.sensor.view_px);
  double xi_g = ground_frequency(params, cfg.sensor, cfg.sensor.h_nom_m);

  auto run_scenario = [&](size_t scenario_index) {
    size_t ti, pi;
    if (cfg.scenario_pairs.empty()) {
      ti = scenario_index / cfg.paths.size();
      pi = scenario_index % cfg.paths.size();
    } else {
      ti = cfg.scenario_pairs[scenario_index].first;
      pi = cfg.scenario_pairs[scenario_index].second;
    }
    const TextureField& field = textures_[ti];
    const PlanarPath& path = paths_[pi];

    HeightProfile hp = cfg.height_range_pct > 0 ? HeightProfile::per_window(cfg.height_range_pct)
                                                : HeightProfile::nominal();
    uint64_t seed = Rng::derive(cfg.master_seed, scenario_index);
    SimResult sim = simulate(field, masks, cfg.sensor, path, hp, seed);

    const size_t w = static_cast<size_t>(cfg.decoder.window_len);
    const size_t stride =
        static_cast<size_t>(std::llround(cfg.stride_ms * cfg.decoder.rate_hz / 1000.0));

    ScenarioStats st;
    std::vector<double> wc(w), ws(w);
    for (int wi = 0; wi < cfg.windows_per_scenario; ++wi) {
      size_t start = static_cast<size_t>(wi) * stride;
      if (start + w > sim.diff.size()) break;
      std::copy_n(sim.diff.s_cos.begin() + static_cast<long>(start), w, wc.begin());
      std::copy_n(sim.diff.s_sin.begin() + static_cast<long>(start), w, ws.begin());
      SpeedEstimate est = decode_window(wc, ws, xi_g, cfg.decoder);
      ++st.total;
      if (!est.accepted) continue;
      double v_true = window_target_speed(path, sim.diff.t[start + w - 1]);
      double err = est.v_hat - v_true;
      st.sq_err += err * err;
      st.abs_err += std::abs(err);
      ++st.accepted;
    }
    return st;
  };

  size_t n = cfg.n_scenarios();
  std::vector<ScenarioStats> stats(n);
  parallel_for(n, cfg.jobs, [&](size_t i) { stats[i] = run_scenario(i); });

  double sq = 0.0, ab = 0.0;
  size_t accepted = 0, total = 0;
  for (const auto& s : stats) {
    sq += s.sq_err;
    ab += s.abs_err;
    accepted += s.accepted;
    total += s.total;
  }
  require(total > 0, "objective: no decodable windows in any scenario");
  double metric_term;
  if (accepted == 0) {
    metric_term = cfg.empty_penalty_m_s;
  } else if (cfg.metric == ErrorMetric::Rmse) {
    metric_term = std::sqrt(sq / static_cast<double>(accepted));
  } else {
    metric_term = ab / static_cast<double>(accepted);
  }
  double rejection = 1.0 - static_cast<double>(accepted) / static_cast<double>(total);
  double penalty = cfg.rejection_penalty_weight * std::max(0.0, rejection - cfg.rejection_budget);
  return metric_term + penalty;
}

double objective(const GaborParams& params, const ObjectiveConfig& cfg) {
  return ObjectiveContext(cfg).evaluate(params);
}

void ParamBounds::validate() const {
  require(xi0_lo > 0 && xi0_lo < xi0_hi, "bounds: bad xi0 range");
  require(sigma_lo > 0 && sigma_lo < sigma_hi, "bounds: bad sigma range");
  require(alpha_lo > 0 && alpha_lo < alpha_hi && alpha_hi <= 1.0, "bounds: bad alpha range");
}

GaborParams ParamBounds::clamp(const GaborParams& p) const {
  return {std::clamp(p.xi0, xi0_lo, xi0_hi), std::clamp(p.sigma, sigma_lo, sigma_hi),
          std::clamp(p.alpha, alpha_lo, alpha_hi)};
}

bool ParamBounds::contains(const GaborParams& p) const {
  return p.xi0 >= xi0_lo && p.xi0 <= xi0_hi && p.sigma >= sigma_lo && p.sigma <= sigma_hi &&
         p.alpha >= alpha_lo && p.alpha <= alpha_hi;
}

namespace {

using Vec3 = std::array<double, 3>;

Vec3 to_vec(const GaborParams& p) { return {p.xi0, p.sigma, p.alpha}; }
GaborParams to_params(const Vec3& v) { return {v[0], v[1], v[2]}; }

struct Vertex {
  Vec3 x;
  double f;
};

}  // namespace

OptimResult optimize(const ObjectiveConfig& cfg, const ParamBounds& bounds,
                     std::vector<GaborParams> starts, const NelderMeadOptions& options) {
  return optimize(ObjectiveContext(cfg), bounds, std::move(starts), options);
}

OptimResult optimize(const ObjectiveContext& ctx, const ParamBounds& bounds,
                     std::vector<GaborParams> starts, const NelderMeadOptions& options) {
  bounds.validate();

  // The fixed-Gabor point always runs first so its value is the baseline.
  const GaborParams fixed_start = bounds.clamp(GaborParams{6.0, 1.0, 1.0});
  auto same = [](const GaborParams& a, const GaborParams& b) {
    return a.xi0 == b.xi0 && a.sigma == b.sigma && a.alpha == b.alpha;
  };
  std::vector<GaborParams> all_starts{fixed_start};
  for (const auto& s : starts) {
    require(bounds.contains(s), "optimize: start point outside bounds");
    if (!same(s, fixed_start)) all_starts.push_back(s);
  }
  starts = std::move(all_starts);

  OptimResult result;
  result.best_objective = std::numeric_limits<double>::infinity();
  bool baseline_recorded = false;

  auto eval = [&](const Vec3& raw) {
    GaborParams p = bounds.clamp(to_params(raw));
    double f = ctx.evaluate(p);
    result.history.emplace_back(p, f);
    if (f < result.best_objective) {
      result.best_objective = f;
      result.best_params = p;
    }
    return f;
  };

  const Vec3 lo{bounds.xi0_lo, bounds.sigma_lo, bounds.alpha_lo};
  const Vec3 hi{bounds.xi0_hi, bounds.sigma_hi, bounds.alpha_hi};

  for (size_t si = 0; si < starts.size(); ++si) {
    const GaborParams& start = starts[si];
    int evals = 0;
    auto counted_eval = [&](const Vec3& v) {
      ++evals;
      return eval(v);
    };

    // Initial simplex: the start plus one step along each axis, kept inside
    // the bounds.
    std::vector<Vertex> simplex;
    Vec3 s0 = to_vec(bounds.clamp(start));
    simplex.push_back({s0, counted_eval(s0)});
    if (si == 0 && !baseline_recorded) {
      result.baseline_objective = simplex[0].f;
      baseline_recorded = true;
    }
    for (int d = 0; d < 3; ++d) {
      Vec3 v = s0;
      double step = options.init_step_frac * (hi[static_cast<size_t>(d)] - lo[static_cast<size_t>(d)]);
      v[static_cast<size_t>(d)] += step;
      if (v[static_cast<size_t>(d)] > hi[static_cast<size_t>(d)])
        v[static_cast<size_t>(d)] = s0[static_cast<size_t>(d)] - step;
      simplex.push_back({v, counted_eval(v)});
    }

    auto sort_simplex = [&] {
      std::sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    };
    sort_simplex();

    while (evals < options.max_evals) {
      if (simplex.back().f - simplex.front().f < options.spread_tol) break;

      Vec3 centroid{0, 0, 0};
      for (size_t i = 0; i + 1 < simplex.size(); ++i)
        for (int d = 0; d < 3; ++d) centroid[static_cast<size_t>(d)] += simplex[i].x[static_cast<size_t>(d)];
      for (int d = 0; d < 3; ++d) centroid[static_cast<size_t>(d)] /= 3.0;

      auto along = [&](double coef) {
        Vec3 v;
        for (int d = 0; d < 3; ++d) {
          size_t dd = static_cast<size_t>(d);
          v[dd] = centroid[dd] + coef * (centroid[dd] - simplex.back().x[dd]);
          v[dd] = std::clamp(v[dd], lo[dd], hi[dd]);
        }
        return v;
      };

      Vec3 xr = along(options.reflection);
      double fr = counted_eval(xr);
      if (fr < simplex.front().f) {
        Vec3 xe = along(options.expansion);
        double fe = counted_eval(xe);
        if (fe < fr)
          simplex.back() = {xe, fe};
        else
          simplex.back() = {xr, fr};
      } else if (fr < simplex[simplex.size() - 2].f) {
        simplex.back() = {xr, fr};
      } else {
        bool outside = fr < simplex.back().f;
        Vec3 xc = along(outside ? options.contraction : -options.contraction);
        double fc = counted_eval(xc);
        if (fc < std::min(fr, simplex.back().f)) {
          simplex.back() = {xc, fc};
        } else {
          // Shrink toward the best vertex.
          for (size_t i = 1; i < simplex.size(); ++i) {
            for (int d = 0; d < 3; ++d) {
              size_t dd = static_cast<size_t>(d);
              simplex[i].x[dd] =
                  simplex[0].x[dd] + options.shrink * (simplex[i].x[dd] - simplex[0].x[dd]);
            }
            simplex[i].f = counted_eval(simplex[i].x);
            if (evals >= options.max_evals) break;
          }
        }
      }
      sort_simplex();
    }
  }
  return result;
}

std::string optim_result_to_json(const OptimResult& r) {
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& [p, f] : r.history)
    hist.push_back({{"xi0", p.xi0}, {"sigma", p.sigma}, {"alpha", p.alpha}, {"objective", f}});
  nlohmann::json j{
      {"best_params", {{"xi0", r.best_params.xi0}, {"sigma", r.best_params.sigma}, {"alpha", r.best_params.alpha}}},
      {"best_objective", r.best_objective},
      {"baseline_objective", r.baseline_objective},
      {"evaluations", r.history.size()},
      {"history", hist}};
  return j.dump(2);
}

void save_history_csv(const OptimResult& r, const std::filesystem::path& file) {
  std::vector<double> idx, xi0, sigma, alpha, obj;
  for (size_t i = 0; i < r.history.size(); ++i) {
    idx.push_back(static_cast<double>(i));
    xi0.push_back(r.history[i].first.xi0);
    sigma.push_back(r.history[i].first.sigma);
    alpha.push_back(r.history[i].first.alpha);
    obj.push_back(r.history[i].second);
  }
  write_csv(file, {"eval", "xi0", "sigma", "alpha", "objective"}, {&idx, &xi0, &sigma, &alpha, &obj},
            {"%.0f", "%.9f", "%.9f", "%.9f", "%.9f"});
}

}  // namespace gaborodo

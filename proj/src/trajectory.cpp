// SPDX-License-Identifier: Apache-2.0
#include "gaborodo/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "gaborodo/csv.hpp"
#include "gaborodo/rng.hpp"

namespace gaborodo {

double PlanarPath::dt() const {
  require(t.size() >= 2, "path: need at least 2 samples");
  return (t.back() - t.front()) / static_cast<double>(t.size() - 1);
}

double PlanarPath::path_length() const {
  double len = 0.0;
  for (size_t i = 1; i < t.size(); ++i) len += std::hypot(x[i] - x[i - 1], y[i] - y[i - 1]);
  return len;
}

void PlanarPath::validate() const {
  size_t n = t.size();
  require(n >= 2, "path: need at least 2 samples");
  require(x.size() == n && y.size() == n && yaw.size() == n && v_x.size() == n && omega_z.size() == n,
          "path: ragged columns");
  double step = dt();
  require(step > 0, "path: non-increasing timestamps");
  for (size_t i = 1; i < n; ++i)
    require(std::abs((t[i] - t[i - 1]) - step) < 1e-9 * std::max(1.0, step * 1e3) + 1e-12,
            "path: non-uniform timestamps");
}

void PathSpec::validate() const {
  require(duration_s > 0, "path spec: duration must be positive");
  require(rate_hz > 0, "path spec: rate must be positive");
  auto check_v = [&](double val) {
    require(std::abs(val) <= v_bound, "path spec: speed exceeds bound");
  };
  switch (profile) {
    case PathProfile::Straight: check_v(v); break;
    case PathProfile::Arc:
      check_v(v);
      require(std::abs(omega) <= omega_bound, "path spec: yaw rate exceeds bound");
      require(omega != 0.0, "path spec: arc needs nonzero omega");
      break;
    case PathProfile::SinusoidSpeed:
      check_v(std::abs(v) + std::abs(amp));
      require(freq_hz > 0, "path spec: sinusoid frequency must be positive");
      break;
    case PathProfile::RandomWaypoints:
      require(v_min <= v_max, "path spec: v_min > v_max");
      check_v(v_max);
      require(omega_max >= 0 && omega_max <= omega_bound, "path spec: omega range exceeds bound");
      require(knot_interval_s > 0, "path spec: knot interval must be positive");
      break;
  }
}

PathProfile path_profile_from_string(const std::string& s) {
  if (s == "straight") return PathProfile::Straight;
  if (s == "arc") return PathProfile::Arc;
  if (s == "sinusoid_speed") return PathProfile::SinusoidSpeed;
  if (s == "random_waypoints") return PathProfile::RandomWaypoints;
  throw std::invalid_argument("path spec: unsupported profile '" + s + "'");
}

std::string to_string(PathProfile p) {
  switch (p) {
    case PathProfile::Straight: return "straight";
    case PathProfile::Arc: return "arc";
    case PathProfile::SinusoidSpeed: return "sinusoid_speed";
    case PathProfile::RandomWaypoints: return "random_waypoints";
  }
  return "?";
}

namespace {

PlanarPath alloc_path(double duration_s, double rate_hz) {
  size_t n = static_cast<size_t>(std::llround(duration_s * rate_hz)) + 1;
  PlanarPath p;
  p.t.resize(n);
  p.x.resize(n);
  p.y.resize(n);
  p.yaw.resize(n);
  p.v_x.resize(n);
  p.omega_z.resize(n);
  for (size_t i = 0; i < n; ++i) p.t[i] = static_cast<double>(i) / rate_hz;
  return p;
}

// Smooth C1 interpolation between knot values with a cosine ramp.
double cosine_interp(double a, double b, double t) {
  double s = 0.5 - 0.5 * std::cos(kPi * t);
  return a + (b - a) * s;
}

}  // namespace

PlanarPath generate_path(const PathSpec& spec) {
  spec.validate();
  PlanarPath p = alloc_path(spec.duration_s, spec.rate_hz);
  size_t n = p.size();
  switch (spec.profile) {
    case PathProfile::Straight: {
      for (size_t i = 0; i < n; ++i) {
        p.x[i] = spec.v * p.t[i];
        p.y[i] = 0.0;
        p.yaw[i] = 0.0;
        p.v_x[i] = spec.v;
        p.omega_z[i] = 0.0;
      }
      break;
    }
    case PathProfile::Arc: {
      double r = spec.v / spec.omega;
      for (size_t i = 0; i < n; ++i) {
        double a = spec.omega * p.t[i];
        p.x[i] = r * std::sin(a);
        p.y[i] = r * (1.0 - std::cos(a));
        p.yaw[i] = a;
        p.v_x[i] = spec.v;
        p.omega_z[i] = spec.omega;
      }
      break;
    }
    case PathProfile::SinusoidSpeed: {
      double w = 2.0 * kPi * spec.freq_hz;
      for (size_t i = 0; i < n; ++i) {
        double t = p.t[i];
        p.x[i] = spec.v * t + spec.amp / w * (1.0 - std::cos(w * t));
        p.y[i] = 0.0;
        p.yaw[i] = 0.0;
        p.v_x[i] = spec.v + spec.amp * std::sin(w * t);
        p.omega_z[i] = 0.0;
      }
      break;
    }
    case PathProfile::RandomWaypoints: {
      // Knot processes for speed and yaw rate, cosine-smoothed, then
      // midpoint-integrated (mirrors the odometry integrator so the stored
      // pose matches re-integration of (v_x, omega_z)).
      Rng rng(Rng::derive(spec.seed, 0x9a7b5));
      size_t knots = static_cast<size_t>(std::ceil(spec.duration_s / spec.knot_interval_s)) + 2;
      std::vector<double> kv(knots), kw(knots);
      for (size_t k = 0; k < knots; ++k) {
        kv[k] = rng.uniform(spec.v_min, spec.v_max);
        kw[k] = rng.uniform(-spec.omega_max, spec.omega_max);
      }
      double dt = 1.0 / spec.rate_hz;
      double xx = 0.0, yy = 0.0, ps = 0.0;
      for (size_t i = 0; i < n; ++i) {
        double pos = p.t[i] / spec.knot_interval_s;
        size_t k0 = static_cast<size_t>(pos);
        double frac = pos - static_cast<double>(k0);
        double v = cosine_interp(kv[k0], kv[k0 + 1], frac);
        double w = cosine_interp(kw[k0], kw[k0 + 1], frac);
        p.v_x[i] = v;
        p.omega_z[i] = w;
        p.x[i] = xx;
        p.y[i] = yy;
        p.yaw[i] = ps;
        if (i + 1 < n) {
          double mid = ps + w * dt / 2.0;
          xx += v * dt * std::cos(mid);
          yy += v * dt * std::sin(mid);
          ps += w * dt;
        }
      }
      break;
    }
  }
  return p;
}

namespace {

std::vector<double> unwrap(const std::vector<double>& a) {
  std::vector<double> out(a.size());
  if (a.empty()) return out;
  out[0] = a[0];
  for (size_t i = 1; i < a.size(); ++i) {
    double d = a[i] - a[i - 1];
    d -= 2.0 * kPi * std::round(d / (2.0 * kPi));
    out[i] = out[i - 1] + d;
  }
  return out;
}

struct Hermite {
  // p(t) over [0,1] with endpoint values/derivatives (derivatives already
  // scaled by the segment length).
  double p0, p1, m0, m1;
  double value(double t) const {
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * p1 +
           (t3 - t2) * m1;
  }
  double deriv(double t) const {  // d/dt over [0,1]
    double t2 = t * t;
    return (6 * t2 - 6 * t) * p0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * p1 +
           (3 * t2 - 2 * t) * m1;
  }
};

}  // namespace

PlanarPath resample(const PlanarPath& path, double rate_hz) {
  path.validate();
  require(path.size() >= 4, "resample: need at least 4 samples");
  require(rate_hz > 0, "resample: rate must be positive");
  double src_dt = path.dt();
  std::vector<double> yaw_u = unwrap(path.yaw);

  PlanarPath out = alloc_path(path.duration(), rate_hz);
  size_t n_src = path.size();
  size_t n = out.size();
  double t0 = path.t.front();
  for (size_t i = 0; i < n; ++i) out.t[i] += t0;
  for (size_t i = 0; i < n; ++i) {
    double tt = std::min(out.t[i], path.t.back());
    double pos = (tt - t0) / src_dt;
    size_t k = std::min(static_cast<size_t>(pos), n_src - 2);
    double u = pos - static_cast<double>(k);
    double vx0 = path.v_x[k] * std::cos(path.yaw[k]);
    double vy0 = path.v_x[k] * std::sin(path.yaw[k]);
    double vx1 = path.v_x[k + 1] * std::cos(path.yaw[k + 1]);
    double vy1 = path.v_x[k + 1] * std::sin(path.yaw[k + 1]);
    Hermite hx{path.x[k], path.x[k + 1], vx0 * src_dt, vx1 * src_dt};
    Hermite hy{path.y[k], path.y[k + 1], vy0 * src_dt, vy1 * src_dt};
    Hermite hp{yaw_u[k], yaw_u[k + 1], path.omega_z[k] * src_dt, path.omega_z[k + 1] * src_dt};
    out.x[i] = hx.value(u);
    out.y[i] = hy.value(u);
    out.yaw[i] = hp.value(u);
    double dxdt = hx.deriv(u) / src_dt;
    double dydt = hy.deriv(u) / src_dt;
    out.v_x[i] = dxdt * std::cos(out.yaw[i]) + dydt * std::sin(out.yaw[i]);
    out.omega_z[i] = hp.deriv(u) / src_dt;
  }
  return out;
}

std::vector<double> gyro_measure(const PlanarPath& path, const GyroModel& model) {
  path.validate();
  model.validate();
  Rng rng(Rng::derive(model.seed, 0x6f2a));
  double dt = path.dt();
  std::vector<double> out(path.size());
  double bias = model.bias;
  double sq = std::sqrt(dt);
  for (size_t i = 0; i < out.size(); ++i) {
    double noise = model.noise_std > 0 ? model.noise_std * rng.gaussian() : 0.0;
    out[i] = path.omega_z[i] + bias + noise;
    if (model.bias_walk_std > 0) bias += model.bias_walk_std * sq * rng.gaussian();
  }
  return out;
}

void save_path_csv(const PlanarPath& path, const std::filesystem::path& file) {
  write_csv(file, {"t", "x", "y", "yaw", "v_x", "omega_z"},
            {&path.t, &path.x, &path.y, &path.yaw, &path.v_x, &path.omega_z},
            {"%.6f", "%.9f", "%.9f", "%.9f", "%.9f", "%.9f"});
}

namespace {

// Five-point central-difference derivative; lower-order one-sided stencils at
// the edges.
std::vector<double> stencil_derivative(const std::vector<double>& f, double dt) {
  size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  for (size_t i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n) {
      d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * dt);
    } else if (i == 0) {
      d[i] = (f[1] - f[0]) / dt;
    } else if (i + 1 == n) {
      d[i] = (f[n - 1] - f[n - 2]) / dt;
    } else {
      d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dt);
    }
  }
  return d;
}

}  // namespace

PlanarPath load_path_csv(const std::filesystem::path& file) {
  CsvTable t = read_csv(file);
  PlanarPath p;
  p.t = t.col("t");
  p.x = t.col("x");
  p.y = t.col("y");
  p.yaw = t.col("yaw");
  if (t.has("v_x") && t.has("omega_z")) {
    p.v_x = t.col("v_x");
    p.omega_z = t.col("omega_z");
  } else {
    require(p.t.size() >= 2, "path csv: need at least 2 rows");
    double dt = (p.t.back() - p.t.front()) / static_cast<double>(p.t.size() - 1);
    auto dx = stencil_derivative(p.x, dt);
    auto dy = stencil_derivative(p.y, dt);
    p.v_x.resize(p.t.size());
    for (size_t i = 0; i < p.t.size(); ++i)
      p.v_x[i] = dx[i] * std::cos(p.yaw[i]) + dy[i] * std::sin(p.yaw[i]);
    p.omega_z = stencil_derivative(unwrap(p.yaw), dt);
  }
  p.validate();
  return p;
}

void save_gyro_csv(const std::vector<double>& t, const std::vector<double>& omega,
                   const std::filesystem::path& file) {
  write_csv(file, {"t", "omega_z"}, {&t, &omega}, {"%.6f", "%.9f"});
}

}  // namespace gaborodo

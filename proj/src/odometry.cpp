// SPDX-License-Identifier: Apache-2.0
#include "gaborodo/odometry.hpp"

#include <algorithm>
#include <cmath>

namespace gaborodo {

PlanarPath integrate_series(const std::vector<double>& t, const std::vector<double>& v,
                            const std::vector<double>& omega, OdometryConfig::Integration method) {
  require(t.size() >= 2, "integrate: empty series");
  require(v.size() == t.size() && omega.size() == t.size(), "integrate: series length mismatch");
  PlanarPath p;
  p.t = t;
  p.x.assign(t.size(), 0.0);
  p.y.assign(t.size(), 0.0);
  p.yaw.assign(t.size(), 0.0);
  p.v_x = v;
  p.omega_z = omega;
  double x = 0.0, y = 0.0, psi = 0.0;
  for (size_t i = 0; i + 1 < t.size(); ++i) {
    double dt = t[i + 1] - t[i];
    require(dt > 0, "integrate: non-increasing timestamps");
    double heading = method == OdometryConfig::Integration::Midpoint ? psi + omega[i] * dt / 2.0 : psi;
    x += v[i] * dt * std::cos(heading);
    y += v[i] * dt * std::sin(heading);
    psi += omega[i] * dt;
    p.x[i + 1] = x;
    p.y[i + 1] = y;
    p.yaw[i + 1] = psi;
  }
  return p;
}

PlanarPath integrate(const std::vector<SpeedEstimate>& speed, const std::vector<double>& gyro_t,
                     const std::vector<double>& gyro_omega, const OdometryConfig& cfg) {
  cfg.validate();
  require(!speed.empty(), "integrate: empty speed series");
  require(gyro_t.size() >= 2 && gyro_t.size() == gyro_omega.size(), "integrate: bad gyro series");
  double dt = (gyro_t.back() - gyro_t.front()) / static_cast<double>(gyro_t.size() - 1);
  require(std::abs(dt - 1.0 / cfg.rate_hz) < 1.5 / cfg.rate_hz,
          "integrate: gyro clock off by more than one sample from the configured rate");

  // Start on the gyro clock at the first estimate.
  double t_first = speed.front().t_s;
  size_t i0 = 0;
  while (i0 < gyro_t.size() && gyro_t[i0] < t_first - 1e-12) ++i0;
  require(i0 + 1 < gyro_t.size(), "integrate: no gyro samples after the first speed estimate");

  // Zero-order hold of the latest accepted estimate onto the gyro clock.
  size_t n = gyro_t.size() - i0;
  std::vector<double> t(gyro_t.begin() + static_cast<long>(i0), gyro_t.end());
  std::vector<double> omega(gyro_omega.begin() + static_cast<long>(i0), gyro_omega.end());
  std::vector<double> v(n, 0.0);
  size_t j = 0;
  double last_v = 0.0;
  double last_t = -1e300;
  for (size_t i = 0; i < n; ++i) {
    while (j < speed.size() && speed[j].t_s <= t[i] + 1e-12) {
      last_v = speed[j].v_hat;
      last_t = speed[j].t_s;
      ++j;
    }
    bool stale = (t[i] - last_t) > cfg.gap_timeout_s;
    if (last_t < -1e299)
      v[i] = 0.0;  // before the first estimate
    else if (cfg.hold == OdometryConfig::HoldPolicy::ZeroSpeed && stale)
      v[i] = 0.0;
    else
      v[i] = last_v;
  }
  return integrate_series(t, v, omega, cfg.integration);
}

PlanarPath rebase(const PlanarPath& path, double t0) {
  require(!path.t.empty(), "rebase: empty path");
  size_t i0 = 0;
  while (i0 < path.t.size() && path.t[i0] < t0 - 1e-12) ++i0;
  require(i0 < path.t.size(), "rebase: t0 is past the end of the path");
  double x0 = path.x[i0], y0 = path.y[i0], psi0 = path.yaw[i0];
  double c = std::cos(psi0), s = std::sin(psi0);
  PlanarPath out;
  size_t n = path.t.size() - i0;
  out.t.reserve(n);
  for (size_t i = i0; i < path.t.size(); ++i) {
    double dx = path.x[i] - x0, dy = path.y[i] - y0;
    out.t.push_back(path.t[i]);
    out.x.push_back(c * dx + s * dy);
    out.y.push_back(-s * dx + c * dy);
    out.yaw.push_back(path.yaw[i] - psi0);
    out.v_x.push_back(path.v_x[i]);
    out.omega_z.push_back(path.omega_z[i]);
  }
  return out;
}

namespace {

// Linear interpolation of ref position onto time tt; requires tt inside the
// reference range.
std::pair<double, double> ref_position(const PlanarPath& ref, double tt) {
  double dt = ref.dt();
  double pos = (tt - ref.t.front()) / dt;
  // Snap to the node when the timestamp matches a reference sample, so that
  // comparing a path against itself is exactly zero.
  double round_pos = std::round(pos);
  if (std::abs(pos - round_pos) < 1e-9) {
    size_t k = static_cast<size_t>(std::clamp(round_pos, 0.0, static_cast<double>(ref.size() - 1)));
    return {ref.x[k], ref.y[k]};
  }
  size_t k = std::min(static_cast<size_t>(std::max(0.0, pos)), ref.size() - 2);
  double u = std::clamp(pos - static_cast<double>(k), 0.0, 1.0);
  return {ref.x[k] + (ref.x[k + 1] - ref.x[k]) * u, ref.y[k] + (ref.y[k + 1] - ref.y[k]) * u};
}

}  // namespace

double ate(const PlanarPath& est, const PlanarPath& ref) {
  require(est.size() >= 1 && ref.size() >= 2, "ate: empty paths");
  double lo = std::max(est.t.front(), ref.t.front());
  double hi = std::min(est.t.back(), ref.t.back());
  require(lo <= hi + 1e-12, "ate: disjoint time ranges");
  double acc = 0.0;
  size_t count = 0;
  for (size_t i = 0; i < est.size(); ++i) {
    double tt = est.t[i];
    if (tt < lo - 1e-12 || tt > hi + 1e-12) continue;
    auto [rx, ry] = ref_position(ref, tt);
    double dx = est.x[i] - rx;
    double dy = est.y[i] - ry;
    acc += dx * dx + dy * dy;
    ++count;
  }
  require(count > 0, "ate: no overlapping samples");
  return std::sqrt(acc / static_cast<double>(count));
}

double drift_percent(const PlanarPath& est, const PlanarPath& ref) {
  require(est.size() >= 1 && ref.size() >= 2, "drift: empty paths");
  double len = ref.path_length();
  require(len > 0, "drift: zero-length reference path");
  double lo = std::max(est.t.front(), ref.t.front());
  double hi = std::min(est.t.back(), ref.t.back());
  require(lo <= hi + 1e-12, "drift: disjoint time ranges");
  // Last estimate sample inside the overlap.
  size_t last = est.size();
  for (size_t i = 0; i < est.size(); ++i)
    if (est.t[i] >= lo - 1e-12 && est.t[i] <= hi + 1e-12) last = i;
  require(last < est.size(), "drift: no overlapping samples");
  auto [rx, ry] = ref_position(ref, est.t[last]);
  double err = std::hypot(est.x[last] - rx, est.y[last] - ry);
  return 100.0 * err / len;
}

TrajectoryScore score_trajectory(const PlanarPath& est, const PlanarPath& ref) {
  TrajectoryScore s;
  s.ate_m = ate(est, ref);
  s.drift_pct = drift_percent(est, ref);
  s.path_length_m = ref.path_length();
  s.duration_s = ref.duration();
  return s;
}

}  // namespace gaborodo

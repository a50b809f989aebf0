// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gaborodo/common.hpp"

namespace gaborodo {

/// Timestamped planar trajectory with per-sample forward speed and yaw rate.
/// v_x and omega_z are stored analytically by the generators, not re-derived
/// by differencing.
struct PlanarPath {
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> yaw;
  std::vector<double> v_x;
  std::vector<double> omega_z;

  size_t size() const { return t.size(); }
  double duration() const { return t.empty() ? 0.0 : t.back() - t.front(); }
  double dt() const;
  double rate_hz() const { return 1.0 / dt(); }
  double path_length() const;
  Pose2 pose(size_t i) const { return {x[i], y[i], yaw[i]}; }

  void validate() const;  // shape + uniform timestamps
};

enum class PathProfile { Straight, Arc, SinusoidSpeed, RandomWaypoints };

struct PathSpec {
  PathProfile profile = PathProfile::Straight;
  double duration_s = 10.0;
  double rate_hz = 1000.0;
  uint64_t seed = 0;

  double v = 0.2;        // straight / arc / sinusoid base speed (signed)
  double omega = 0.0;    // arc yaw rate
  double amp = 0.0;      // sinusoid_speed amplitude
  double freq_hz = 0.5;  // sinusoid_speed frequency

  // random_waypoints: smoothed speed/yaw-rate processes inside these ranges
  double v_min = 0.1;
  double v_max = 0.4;
  double omega_max = 1.0;
  double knot_interval_s = 2.0;

  // hard bounds checked for every profile
  double v_bound = 5.0;
  double omega_bound = 1.0;

  void validate() const;
};

PathProfile path_profile_from_string(const std::string& s);
std::string to_string(PathProfile p);

PlanarPath generate_path(const PathSpec& spec);

/// Cubic-Hermite resampling using the stored velocities; yaw is unwrapped
/// before interpolation and v_x/omega_z come from the interpolant derivative.
PlanarPath resample(const PlanarPath& path, double rate_hz);

struct GyroModel {
  double noise_std = 0.0;       // rad/s, white
  double bias = 0.0;            // rad/s, constant
  double bias_walk_std = 0.0;   // rad/s per sqrt(s)
  uint64_t seed = 0;

  void validate() const {
    require(noise_std >= 0 && bias_walk_std >= 0, "gyro: stds must be >= 0");
  }
};

/// Simulated gyroscope reading of the path's yaw rate.
std::vector<double> gyro_measure(const PlanarPath& path, const GyroModel& model);

/// CSV `t,x,y,yaw,v_x,omega_z`. Import accepts files without v_x/omega_z and
/// reconstructs them with a 5-point central-difference stencil.
void save_path_csv(const PlanarPath& path, const std::filesystem::path& file);
PlanarPath load_path_csv(const std::filesystem::path& file);

void save_gyro_csv(const std::vector<double>& t, const std::vector<double>& omega,
                   const std::filesystem::path& file);

}  // namespace gaborodo

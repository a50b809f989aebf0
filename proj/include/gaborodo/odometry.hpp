// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "gaborodo/decoder.hpp"
#include "gaborodo/trajectory.hpp"

namespace gaborodo {

struct OdometryConfig {
  enum class Integration { Euler, Midpoint };
  enum class HoldPolicy { ZeroOrderHold, ZeroSpeed };

  Integration integration = Integration::Midpoint;
  double rate_hz = 1000.0;
  HoldPolicy hold = HoldPolicy::ZeroOrderHold;
  /// ZeroSpeed policy: treat speed as zero once the latest accepted estimate
  /// is older than this.
  double gap_timeout_s = 0.1;

  void validate() const { require(rate_hz > 0, "odometry: rate must be positive"); }
};

/// Dead-reckon a planar trajectory from decoded speed estimates and a gyro
/// yaw-rate series on the gyro clock, starting at the first estimate (the
/// decoder needs one full window before it can speak). Initial pose is the
/// origin, heading 0.
PlanarPath integrate(const std::vector<SpeedEstimate>& speed, const std::vector<double>& gyro_t,
                     const std::vector<double>& gyro_omega, const OdometryConfig& cfg);

/// Express the tail of a path (t >= t0) in the frame of its pose at t0, so
/// it shares the origin/heading-0 initial pose convention of integrate().
PlanarPath rebase(const PlanarPath& path, double t0);

/// Core integrator over aligned uniform series (also used by tests to close
/// the loop on generated paths).
PlanarPath integrate_series(const std::vector<double>& t, const std::vector<double>& v,
                            const std::vector<double>& omega,
                            OdometryConfig::Integration method = OdometryConfig::Integration::Midpoint);

/// Root-mean-square position difference, with the reference resampled onto
/// the estimate's timestamps. No alignment beyond the shared initial pose.
double ate(const PlanarPath& est, const PlanarPath& ref);

/// Endpoint error as a percentage of the reference path length.
double drift_percent(const PlanarPath& est, const PlanarPath& ref);

struct TrajectoryScore {
  double ate_m = 0.0;
  double drift_pct = 0.0;
  double path_length_m = 0.0;
  double duration_s = 0.0;
};

TrajectoryScore score_trajectory(const PlanarPath& est, const PlanarPath& ref);

}  // namespace gaborodo

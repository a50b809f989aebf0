// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaborodo {

inline constexpr double kPi = std::numbers::pi;

/// Row-major 2D grid of doubles. Used for texture tiles, detector views and
/// mask rasters alike.
struct Grid2D {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Grid2D() = default;
  Grid2D(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
  size_t size() const { return data.size(); }
  bool same_shape(const Grid2D& o) const { return rows == o.rows && cols == o.cols; }
};

/// Planar pose on the ground plane.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace gaborodo

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "gaborodo/trajectory.hpp"

namespace gaborodo {

/// Write an estimated-vs-reference trajectory overlay as a standalone SVG
/// (reference dashed, estimate solid), with an axis frame and a scale bar.
void write_trajectory_svg(const PlanarPath& est, const PlanarPath& ref,
                          const std::filesystem::path& file, const std::string& title = "");

}  // namespace gaborodo

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <utility>

#include "gaborodo/common.hpp"

namespace gaborodo {

/// Gabor transmittance parameters in aperture-normalized units: the raster
/// spans u in [-1, 1] along the stripe axis and the carrier runs xi0 cycles
/// per unit u. sigma is the Gaussian envelope std in the same units; alpha
/// scales amplitude and is capped at 1 so the decomposed masks stay valid
/// transmittances.
struct GaborParams {
  double xi0 = 6.0;
  double sigma = 1.0;
  double alpha = 1.0;

  void validate() const {
    require(xi0 > 0, "gabor: xi0 must be positive");
    require(sigma > 0, "gabor: sigma must be positive");
    require(alpha > 0 && alpha <= 1.0, "gabor: alpha must be in (0, 1]");
  }
};

double eval_gabor_cos(const GaborParams& p, double u);
double eval_gabor_sin(const GaborParams& p, double u);

/// Split a signed transmittance into the non-negative pair
/// (max(g,0), max(-g,0)). Throws if |g| > 1.
std::pair<double, double> decompose(double g);

/// Four rasterized non-negative masks. Stripes are constant along rows
/// (lateral axis); column j samples u_j = (2j - N)/N, which puts a sample
/// exactly at u = 0 for even N.
struct MaskRaster {
  int resolution_px = 0;
  GaborParams params;
  Grid2D cos_plus, cos_minus, sin_plus, sin_minus;

  /// Carrier sample positions along a row.
  static double u_at(int col, int resolution_px) {
    return (2.0 * col - resolution_px) / resolution_px;
  }
};

MaskRaster rasterize(const GaborParams& p, int resolution_px = 128);

/// Writes <stem>_cos_plus.pgm etc. for printing/inspection.
void save_mask_pgms(const MaskRaster& m, const std::filesystem::path& dir,
                    const std::string& stem = "mask");

/// Single JSON blob with base64-encoded float64 grids, for reproducibility.
std::string mask_to_json(const MaskRaster& m);
MaskRaster mask_from_json(const std::string& text);

}  // namespace gaborodo

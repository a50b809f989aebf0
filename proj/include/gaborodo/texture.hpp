// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "gaborodo/common.hpp"

namespace gaborodo {

enum class WrapMode { Tile, Clamp };

/// Reflectance field over the ground plane. Values are in [0,1]; grid node
/// (r, c) sits at physical (c*extent_x/cols, r*extent_y/rows) so sampling at
/// a node returns the stored value exactly. Immutable after construction;
/// sample() is re-entrant.
struct TextureField {
  Grid2D grid;
  double extent_x_m = 1.0;
  double extent_y_m = 1.0;
  WrapMode wrap = WrapMode::Tile;

  /// Bilinear sample at (x, y) meters; any real coordinate is valid.
  double sample(double x_m, double y_m) const;

  void validate() const;
};

enum class TextureKind { BandlimitedNoise, Sinusoid, Checker, PerlinLike, ImageFile };

struct TextureSpec {
  TextureKind kind = TextureKind::BandlimitedNoise;
  int resolution_px = 256;
  double extent_m = 1.0;
  WrapMode wrap = WrapMode::Tile;
  uint64_t seed = 0;

  // sinusoid
  double freq_cpm = 10.0;
  // checker
  double cell_m = 0.05;
  // bandlimited_noise: passband in cycles/m
  double low_cpm = 40.0;
  double high_cpm = 240.0;
  int max_modes = 256;
  // perlin_like
  int octaves = 4;
  int base_cells = 8;
  // image_file
  std::string path;

  void validate() const;
};

TextureKind texture_kind_from_string(const std::string& s);
std::string to_string(TextureKind k);

/// Deterministic generation: identical spec (including seed) gives a
/// byte-identical grid.
TextureField generate(const TextureSpec& spec);

/// Load a grayscale PGM (P5) or PNG image as a reflectance field. Color PNG
/// is converted with luma weights 0.299/0.587/0.114; values scale by the
/// image's maximum code value. extent_m sets the physical width; height
/// follows the aspect ratio.
TextureField load_image(const std::filesystem::path& path, double extent_m,
                        WrapMode wrap = WrapMode::Tile);

void save_pgm(const Grid2D& grid, const std::filesystem::path& path);

}  // namespace gaborodo

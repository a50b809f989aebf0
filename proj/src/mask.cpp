// SPDX-License-Identifier: Apache-2.0
#include "gaborodo/mask.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "gaborodo/texture.hpp"
#include "gaborodo/util.hpp"

namespace gaborodo {

double eval_gabor_cos(const GaborParams& p, double u) {
  return p.alpha * std::exp(-u * u / (2.0 * p.sigma * p.sigma)) * std::cos(2.0 * kPi * p.xi0 * u);
}

double eval_gabor_sin(const GaborParams& p, double u) {
  return p.alpha * std::exp(-u * u / (2.0 * p.sigma * p.sigma)) * std::sin(2.0 * kPi * p.xi0 * u);
}

std::pair<double, double> decompose(double g) {
  require(std::abs(g) <= 1.0, "decompose: |g| must be <= 1");
  return {std::max(g, 0.0), std::max(-g, 0.0)};
}

MaskRaster rasterize(const GaborParams& p, int resolution_px) {
  p.validate();
  require(resolution_px >= 32, "rasterize: resolution_px must be >= 32");
  MaskRaster m;
  m.resolution_px = resolution_px;
  m.params = p;
  const int n = resolution_px;
  m.cos_plus = Grid2D(n, n);
  m.cos_minus = Grid2D(n, n);
  m.sin_plus = Grid2D(n, n);
  m.sin_minus = Grid2D(n, n);
  for (int c = 0; c < n; ++c) {
    double u = MaskRaster::u_at(c, n);
    auto [cp, cm] = decompose(eval_gabor_cos(p, u));
    auto [sp, sm] = decompose(eval_gabor_sin(p, u));
    for (int r = 0; r < n; ++r) {
      m.cos_plus.at(r, c) = cp;
      m.cos_minus.at(r, c) = cm;
      m.sin_plus.at(r, c) = sp;
      m.sin_minus.at(r, c) = sm;
    }
  }
  return m;
}

void save_mask_pgms(const MaskRaster& m, const std::filesystem::path& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  save_pgm(m.cos_plus, dir / (stem + "_cos_plus.pgm"));
  save_pgm(m.cos_minus, dir / (stem + "_cos_minus.pgm"));
  save_pgm(m.sin_plus, dir / (stem + "_sin_plus.pgm"));
  save_pgm(m.sin_minus, dir / (stem + "_sin_minus.pgm"));
}

namespace {

nlohmann::json grid_to_json(const Grid2D& g) {
  return nlohmann::json{{"rows", g.rows},
                        {"cols", g.cols},
                        {"dtype", "float64_le"},
                        {"data", base64_encode(g.data.data(), g.data.size() * sizeof(double))}};
}

Grid2D grid_from_json(const nlohmann::json& j) {
  Grid2D g(j.at("rows").get<int>(), j.at("cols").get<int>());
  auto bytes = base64_decode(j.at("data").get<std::string>());
  if (bytes.size() != g.data.size() * sizeof(double))
    throw std::runtime_error("mask json: grid payload size mismatch");
  std::memcpy(g.data.data(), bytes.data(), bytes.size());
  return g;
}

}  // namespace

std::string mask_to_json(const MaskRaster& m) {
  nlohmann::json j{{"resolution_px", m.resolution_px},
                   {"params", {{"xi0", m.params.xi0}, {"sigma", m.params.sigma}, {"alpha", m.params.alpha}}},
                   {"cos_plus", grid_to_json(m.cos_plus)},
                   {"cos_minus", grid_to_json(m.cos_minus)},
                   {"sin_plus", grid_to_json(m.sin_plus)},
                   {"sin_minus", grid_to_json(m.sin_minus)}};
  return j.dump(2);
}

MaskRaster mask_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  MaskRaster m;
  m.resolution_px = j.at("resolution_px").get<int>();
  m.params.xi0 = j.at("params").at("xi0").get<double>();
  m.params.sigma = j.at("params").at("sigma").get<double>();
  m.params.alpha = j.at("params").at("alpha").get<double>();
  m.cos_plus = grid_from_json(j.at("cos_plus"));
  m.cos_minus = grid_from_json(j.at("cos_minus"));
  m.sin_plus = grid_from_json(j.at("sin_plus"));
  m.sin_minus = grid_from_json(j.at("sin_minus"));
  return m;
}

}  // namespace gaborodo

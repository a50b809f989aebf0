// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "gaborodo/mask.hpp"

using namespace gaborodo;

namespace {

std::vector<double> signed_row(const MaskRaster& m) {
  std::vector<double> g(static_cast<size_t>(m.resolution_px));
  for (int c = 0; c < m.resolution_px; ++c) g[static_cast<size_t>(c)] = m.cos_plus.at(0, c) - m.cos_minus.at(0, c);
  return g;
}

}  // namespace

TEST_CASE("gabor carrier values at pinned points") {
  GaborParams p{6.0, 1.0, 1.0};
  CHECK(eval_gabor_cos(p, 0.0) == 1.0);  // alpha at the origin
  CHECK(eval_gabor_cos({6.0, 1.0, 0.37}, 0.0) == doctest::Approx(0.37));
  // Quarter-period zero at u = 1/(4 xi0).
  CHECK(eval_gabor_cos(p, 1.0 / 24.0) == doctest::Approx(0.0).epsilon(1e-12));
  // Hand evaluation at u = 0.5: exp(-0.125) * cos(6 pi) = exp(-0.125).
  CHECK(eval_gabor_cos(p, 0.5) == doctest::Approx(std::exp(-0.125)));
  CHECK(std::exp(-0.125) == doctest::Approx(0.8825).epsilon(1e-4));

  CHECK(eval_gabor_sin(p, 0.0) == 0.0);
  // Odd carrier under even envelope.
  for (double u : {0.1, 0.37, 0.81})
    CHECK(eval_gabor_sin(p, -u) == doctest::Approx(-eval_gabor_sin(p, u)));
}

TEST_CASE("sine convention approximates a rigid quarter-period translation for broad envelopes") {
  // Carrier-shift vs whole-Gabor-translation: the two conventions agree to
  // within a small fraction of alpha once the envelope is broad. Values
  // below are measured with the direct comparison oracle.
  auto max_diff = [](const GaborParams& p) {
    double shift = 1.0 / (4.0 * p.xi0);
    double worst = 0.0;
    for (int i = 0; i <= 4000; ++i) {
      double u = -1.0 + 2.0 * i / 4000.0;
      double carrier_shift = eval_gabor_sin(p, u);
      double rigid = eval_gabor_cos(p, u - shift);
      worst = std::max(worst, std::abs(carrier_shift - rigid));
    }
    return worst;
  };
  CHECK(max_diff({8.0, 2.0, 1.0}) < 0.01);   // < 1% of alpha
  CHECK(max_diff({6.0, 1.0, 1.0}) < 0.03);   // tighter envelope: ~2.5%
  CHECK(max_diff({6.0, 2.0, 1.0}) < max_diff({6.0, 1.0, 1.0}));  // broader is closer
}

TEST_CASE("decompose splits signed transmittance exactly") {
  CHECK(decompose(0.5) == std::pair<double, double>{0.5, 0.0});
  CHECK(decompose(-0.3) == std::pair<double, double>{0.0, 0.3});
  CHECK(decompose(0.0) == std::pair<double, double>{0.0, 0.0});
  CHECK_THROWS(decompose(1.2));
  CHECK_THROWS(decompose(-1.0001));
}

TEST_CASE("raster reconstruction, disjoint support, range") {
  for (GaborParams p : {GaborParams{6.0, 1.0, 1.0}, GaborParams{3.5, 0.5, 0.8},
                        GaborParams{12.0, 1.7, 0.4}}) {
    MaskRaster m = rasterize(p, 128);
    for (int r = 0; r < 128; r += 37) {
      for (int c = 0; c < 128; ++c) {
        double u = MaskRaster::u_at(c, 128);
        double g = eval_gabor_cos(p, u);
        // Exact reconstruction with zero tolerance.
        CHECK(m.cos_plus.at(r, c) - m.cos_minus.at(r, c) == g);
        CHECK(m.sin_plus.at(r, c) - m.sin_minus.at(r, c) == eval_gabor_sin(p, u));
        // Disjoint support.
        CHECK(m.cos_plus.at(r, c) * m.cos_minus.at(r, c) == 0.0);
        CHECK(m.sin_plus.at(r, c) * m.sin_minus.at(r, c) == 0.0);
        // Transmittances.
        for (double v : {m.cos_plus.at(r, c), m.cos_minus.at(r, c), m.sin_plus.at(r, c),
                         m.sin_minus.at(r, c)}) {
          CHECK(v >= 0.0);
          CHECK(v <= 1.0);
        }
      }
    }
  }
}

TEST_CASE("raster rows are identical (lateral translational symmetry)") {
  MaskRaster m = rasterize({6.0, 1.0, 1.0}, 64);
  for (const Grid2D* g : {&m.cos_plus, &m.cos_minus, &m.sin_plus, &m.sin_minus})
    for (int r = 1; r < g->rows; ++r)
      for (int c = 0; c < g->cols; ++c) CHECK(g->at(r, c) == g->at(0, c));
}

TEST_CASE("center column of cos+ carries the envelope peak") {
  MaskRaster m = rasterize({6.0, 1.0, 1.0}, 128);
  // u_at(64, 128) == 0 exactly, so the peak value is exactly alpha.
  CHECK(MaskRaster::u_at(64, 128) == 0.0);
  CHECK(m.cos_plus.at(0, 64) == 1.0);
}

TEST_CASE("total transmitted energy equals the absolute-value sum") {
  MaskRaster m = rasterize({6.0, 1.0, 1.0}, 128);
  double sum_pm = 0.0, sum_abs = 0.0;
  for (int c = 0; c < 128; ++c) {
    sum_pm += m.cos_plus.at(0, c) + m.cos_minus.at(0, c);
    sum_abs += std::abs(eval_gabor_cos({6.0, 1.0, 1.0}, MaskRaster::u_at(c, 128)));
  }
  CHECK(sum_pm == doctest::Approx(sum_abs).epsilon(1e-12));
}

TEST_CASE("spectral concentration at the carrier bins over a parameter grid") {
  // The raster spans u in [-1,1] (two u-units), so a carrier of xi0 cycles
  // per u-unit lands at DFT bin 2*xi0 cycles/aperture.
  for (double xi0 : {2.0, 3.0, 4.0, 6.0, 8.0, 10.0, 14.0}) {
    for (double sigma : {0.5, 0.75, 1.0, 1.5, 2.0}) {
      MaskRaster m = rasterize({xi0, sigma, 1.0}, 128);
      int expect = static_cast<int>(std::lround(2.0 * xi0));
      int best_bin = -1;
      double best = -1.0;
      // Signed Gabor row spectrum (cos+ - cos-), naive DFT per bin.
      auto g = signed_row(m);
      for (int k = 1; k < 64; ++k) {
        std::complex<double> acc = 0.0;
        for (int c = 0; c < 128; ++c)
          acc += g[static_cast<size_t>(c)] * std::polar(1.0, -2.0 * kPi * k * c / 128.0);
        double mag = std::abs(acc);
        if (mag > best) {
          best = mag;
          best_bin = k;
        }
      }
      INFO("xi0 ", xi0, " sigma ", sigma);
      CHECK(best_bin == expect);
    }
  }
}

TEST_CASE("quadrature: cross-correlation zero at lag 0, peak near an eighth period") {
  for (double sigma : {1.0, 1.5, 2.0}) {
    for (double xi0 : {4.0, 6.0, 8.0}) {
      MaskRaster m = rasterize({xi0, sigma, 1.0}, 128);
      int n = 128;
      std::vector<double> gc(static_cast<size_t>(n)), gs(static_cast<size_t>(n));
      for (int c = 0; c < n; ++c) {
        gc[static_cast<size_t>(c)] = m.cos_plus.at(0, c) - m.cos_minus.at(0, c);
        gs[static_cast<size_t>(c)] = m.sin_plus.at(0, c) - m.sin_minus.at(0, c);
      }
      auto xcorr = [&](int lag) {
        double acc = 0.0;
        for (int c = 0; c < n; ++c) {
          int j = c + lag;
          if (j >= 0 && j < n) acc += gc[static_cast<size_t>(c)] * gs[static_cast<size_t>(j)];
        }
        return acc;
      };
      double peak = 0.0;
      int peak_lag = 0;
      for (int lag = -n / 2; lag <= n / 2; ++lag) {
        double v = std::abs(xcorr(lag));
        if (v > peak) {
          peak = v;
          peak_lag = lag;
        }
      }
      // The carrier period is n/(2 xi0) pixels; quadrature shift is a
      // quarter of that.
      double expect = n / (8.0 * xi0);
      INFO("xi0 ", xi0, " sigma ", sigma, " peak_lag ", peak_lag);
      CHECK(std::abs(std::abs(static_cast<double>(peak_lag)) - expect) <= 1.0);
      CHECK(std::abs(xcorr(0)) < 0.02 * peak);
    }
  }
}

TEST_CASE("rasterize validates inputs") {
  CHECK_THROWS(rasterize({6.0, 1.0, 1.5}, 128));  // alpha out of range
  CHECK_THROWS(rasterize({6.0, 1.0, 0.0}, 128));
  CHECK_THROWS(rasterize({-1.0, 1.0, 1.0}, 128));
  CHECK_THROWS(rasterize({6.0, 1.0, 1.0}, 16));  // below minimum resolution
}

TEST_CASE("mask json round trip is bit exact") {
  MaskRaster m = rasterize({5.5, 0.9, 0.7}, 64);
  MaskRaster back = mask_from_json(mask_to_json(m));
  CHECK(back.resolution_px == 64);
  CHECK(back.params.xi0 == m.params.xi0);
  CHECK(back.cos_plus.data == m.cos_plus.data);
  CHECK(back.cos_minus.data == m.cos_minus.data);
  CHECK(back.sin_plus.data == m.sin_plus.data);
  CHECK(back.sin_minus.data == m.sin_minus.data);
}

TEST_CASE("mask pgm export writes four printable files") {
  auto dir = std::filesystem::temp_directory_path() / "gaborodo_test_mask";
  std::filesystem::create_directories(dir);
  MaskRaster m = rasterize({6.0, 1.0, 1.0}, 64);
  save_mask_pgms(m, dir, "m");
  for (const char* stem : {"m_cos_plus.pgm", "m_cos_minus.pgm", "m_sin_plus.pgm", "m_sin_minus.pgm"})
    CHECK(std::filesystem::exists(dir / stem));
}

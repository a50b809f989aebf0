// SPDX-License-Identifier: Apache-2.0
#include "gaborodo/texture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "gaborodo/rng.hpp"

#ifdef GABORODO_HAVE_PNG
#include <png.h>
#endif

namespace gaborodo {

void TextureField::validate() const {
  require(grid.rows > 0 && grid.cols > 0, "texture: empty grid");
  require(extent_x_m > 0 && extent_y_m > 0, "texture: extent must be positive");
  for (double v : grid.data) require(v >= 0.0 && v <= 1.0, "texture: value outside [0,1]");
}

double TextureField::sample(double x_m, double y_m) const {
  double fx = x_m / extent_x_m * grid.cols;
  double fy = y_m / extent_y_m * grid.rows;
  double c0f = std::floor(fx);
  double r0f = std::floor(fy);
  double tx = fx - c0f;
  double ty = fy - r0f;
  long c0 = static_cast<long>(c0f);
  long r0 = static_cast<long>(r0f);
  long c1 = c0 + 1, r1 = r0 + 1;
  if (wrap == WrapMode::Tile) {
    auto wrap_idx = [](long i, long n) {
      long m = i % n;
      return m < 0 ? m + n : m;
    };
    c0 = wrap_idx(c0, grid.cols);
    c1 = wrap_idx(c1, grid.cols);
    r0 = wrap_idx(r0, grid.rows);
    r1 = wrap_idx(r1, grid.rows);
  } else {
    auto clamp_idx = [](long i, long n) { return std::clamp(i, 0L, n - 1); };
    if (c0 < 0) tx = 0.0;
    if (c0 >= grid.cols - 1) tx = (c0 > grid.cols - 1) ? 0.0 : tx;
    if (r0 < 0) ty = 0.0;
    if (r0 >= grid.rows - 1) ty = (r0 > grid.rows - 1) ? 0.0 : ty;
    c0 = clamp_idx(c0, grid.cols);
    c1 = clamp_idx(c1, grid.cols);
    r0 = clamp_idx(r0, grid.rows);
    r1 = clamp_idx(r1, grid.rows);
  }
  double v00 = grid.at(static_cast<int>(r0), static_cast<int>(c0));
  double v01 = grid.at(static_cast<int>(r0), static_cast<int>(c1));
  double v10 = grid.at(static_cast<int>(r1), static_cast<int>(c0));
  double v11 = grid.at(static_cast<int>(r1), static_cast<int>(c1));
  double top = v00 + (v01 - v00) * tx;
  double bot = v10 + (v11 - v10) * tx;
  return top + (bot - top) * ty;
}

void TextureSpec::validate() const {
  require(resolution_px >= 64, "texture spec: resolution_px must be >= 64");
  require(extent_m > 0, "texture spec: extent must be positive");
  switch (kind) {
    case TextureKind::Sinusoid:
      require(freq_cpm > 0, "texture spec: sinusoid frequency must be positive");
      break;
    case TextureKind::Checker:
      require(cell_m > 0, "texture spec: checker cell must be positive");
      break;
    case TextureKind::BandlimitedNoise:
      require(low_cpm > 0 && high_cpm > low_cpm, "texture spec: need 0 < low < high");
      require(high_cpm * extent_m <= resolution_px / 2.0,
              "texture spec: high cutoff exceeds grid Nyquist");
      break;
    case TextureKind::PerlinLike:
      require(octaves >= 1 && octaves <= 10, "texture spec: octaves in [1,10]");
      require(base_cells >= 2, "texture spec: base_cells >= 2");
      break;
    case TextureKind::ImageFile:
      require(!path.empty(), "texture spec: image path required");
      break;
  }
}

TextureKind texture_kind_from_string(const std::string& s) {
  if (s == "bandlimited_noise") return TextureKind::BandlimitedNoise;
  if (s == "sinusoid") return TextureKind::Sinusoid;
  if (s == "checker") return TextureKind::Checker;
  if (s == "perlin_like") return TextureKind::PerlinLike;
  if (s == "image_file") return TextureKind::ImageFile;
  throw std::invalid_argument("texture spec: unsupported kind '" + s + "'");
}

std::string to_string(TextureKind k) {
  switch (k) {
    case TextureKind::BandlimitedNoise: return "bandlimited_noise";
    case TextureKind::Sinusoid: return "sinusoid";
    case TextureKind::Checker: return "checker";
    case TextureKind::PerlinLike: return "perlin_like";
    case TextureKind::ImageFile: return "image_file";
  }
  return "?";
}

namespace {

void minmax_normalize(Grid2D& g) {
  auto [lo_it, hi_it] = std::minmax_element(g.data.begin(), g.data.end());
  double lo = *lo_it, span = *hi_it - *lo_it;
  if (span <= 0) {
    std::fill(g.data.begin(), g.data.end(), 0.5);
    return;
  }
  for (auto& v : g.data) v = (v - lo) / span;
}

Grid2D gen_sinusoid(const TextureSpec& s) {
  Grid2D g(s.resolution_px, s.resolution_px);
  for (int c = 0; c < g.cols; ++c) {
    double x = static_cast<double>(c) * s.extent_m / g.cols;
    double v = 0.5 + 0.5 * std::cos(2.0 * kPi * s.freq_cpm * x);
    for (int r = 0; r < g.rows; ++r) g.at(r, c) = v;
  }
  return g;
}

Grid2D gen_checker(const TextureSpec& s) {
  Grid2D g(s.resolution_px, s.resolution_px);
  for (int r = 0; r < g.rows; ++r) {
    double y = static_cast<double>(r) * s.extent_m / g.rows;
    long py = static_cast<long>(std::floor(y / s.cell_m));
    for (int c = 0; c < g.cols; ++c) {
      double x = static_cast<double>(c) * s.extent_m / g.cols;
      long px = static_cast<long>(std::floor(x / s.cell_m));
      g.at(r, c) = ((px + py) & 1) ? 1.0 : 0.0;
    }
  }
  return g;
}

// Sum of lattice modes confined to the [low, high] cycles/m annulus. Integer
// cycle counts per extent keep the field exactly extent-periodic.
Grid2D gen_bandlimited(const TextureSpec& s) {
  int n = s.resolution_px;
  struct Mode {
    int kx, ky;
  };
  std::vector<Mode> modes;
  int kmax = static_cast<int>(std::ceil(s.high_cpm * s.extent_m));
  for (int ky = 0; ky <= kmax; ++ky) {
    for (int kx = -kmax; kx <= kmax; ++kx) {
      if (ky == 0 && kx <= 0) continue;  // hermitian half-plane, no DC
      double f = std::hypot(kx, ky) / s.extent_m;
      if (f >= s.low_cpm && f <= s.high_cpm) modes.push_back({kx, ky});
    }
  }
  require(!modes.empty(), "texture spec: passband contains no lattice modes");
  Rng rng(Rng::derive(s.seed, 0xb11d));
  if (static_cast<int>(modes.size()) > s.max_modes) {
    // Deterministic subset: Fisher-Yates prefix shuffle.
    for (int i = 0; i < s.max_modes; ++i) {
      size_t j = i + rng.below(modes.size() - i);
      std::swap(modes[i], modes[j]);
    }
    modes.resize(s.max_modes);
  }
  struct Wave {
    double kx, ky, amp, phase;
  };
  std::vector<Wave> waves(modes.size());
  for (size_t i = 0; i < modes.size(); ++i) {
    double amp = std::sqrt(-2.0 * std::log((rng.uniform01() + 1e-12)));  // Rayleigh
    double phase = rng.uniform(0.0, 2.0 * kPi);
    waves[i] = {2.0 * kPi * modes[i].kx / static_cast<double>(n),
                2.0 * kPi * modes[i].ky / static_cast<double>(n), amp, phase};
  }
  Grid2D g(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      double acc = 0.0;
      for (const auto& w : waves) acc += w.amp * std::cos(w.kx * c + w.ky * r + w.phase);
      g.at(r, c) = acc;
    }
  }
  minmax_normalize(g);
  return g;
}

double hash01(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  uint64_t h = splitmix64(seed ^ splitmix64(a ^ splitmix64(b ^ splitmix64(c))));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Tiling value noise: hashed lattice values, smoothstep-interpolated, octaves
// summed with 0.5 persistence.
Grid2D gen_perlin_like(const TextureSpec& s) {
  int n = s.resolution_px;
  Grid2D g(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      double acc = 0.0;
      double amp = 1.0;
      for (int o = 0; o < s.octaves; ++o) {
        int cells = s.base_cells << o;
        double fx = static_cast<double>(c) / n * cells;
        double fy = static_cast<double>(r) / n * cells;
        int x0 = static_cast<int>(std::floor(fx));
        int y0 = static_cast<int>(std::floor(fy));
        double tx = smoothstep(fx - x0);
        double ty = smoothstep(fy - y0);
        int x1 = (x0 + 1) % cells;
        int y1 = (y0 + 1) % cells;
        x0 %= cells;
        y0 %= cells;
        double v00 = hash01(s.seed, o, x0, y0);
        double v01 = hash01(s.seed, o, x1, y0);
        double v10 = hash01(s.seed, o, x0, y1);
        double v11 = hash01(s.seed, o, x1, y1);
        double top = v00 + (v01 - v00) * tx;
        double bot = v10 + (v11 - v10) * tx;
        acc += amp * (top + (bot - top) * ty);
        amp *= 0.5;
      }
      g.at(r, c) = acc;
    }
  }
  minmax_normalize(g);
  return g;
}

}  // namespace

TextureField generate(const TextureSpec& spec) {
  spec.validate();
  TextureField f;
  f.extent_x_m = spec.extent_m;
  f.extent_y_m = spec.extent_m;
  f.wrap = spec.wrap;
  switch (spec.kind) {
    case TextureKind::Sinusoid: f.grid = gen_sinusoid(spec); break;
    case TextureKind::Checker: f.grid = gen_checker(spec); break;
    case TextureKind::BandlimitedNoise: f.grid = gen_bandlimited(spec); break;
    case TextureKind::PerlinLike: f.grid = gen_perlin_like(spec); break;
    case TextureKind::ImageFile: return load_image(spec.path, spec.extent_m, spec.wrap);
  }
  f.validate();
  return f;
}

namespace {

int pgm_read_token(std::istream& in) {
  // Skips whitespace and '#' comments, then reads a decimal token.
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == EOF || !std::isdigit(c)) throw std::runtime_error("pgm: malformed header");
  int v = 0;
  while (c != EOF && std::isdigit(c)) {
    v = v * 10 + (c - '0');
    c = in.get();
  }
  return v;
}

TextureField load_pgm(const std::filesystem::path& path, double extent_m, WrapMode wrap) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("pgm: cannot open " + path.string());
  char m0 = static_cast<char>(in.get());
  char m1 = static_cast<char>(in.get());
  if (m0 != 'P' || m1 != '5') throw std::runtime_error("pgm: not a P5 file: " + path.string());
  int w = pgm_read_token(in);
  int h = pgm_read_token(in);
  int maxval = pgm_read_token(in);
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
    throw std::runtime_error("pgm: bad dimensions in " + path.string());
  size_t bpp = maxval < 256 ? 1 : 2;
  std::vector<unsigned char> raw(static_cast<size_t>(w) * h * bpp);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<size_t>(in.gcount()) != raw.size())
    throw std::runtime_error("pgm: truncated file " + path.string());
  TextureField f;
  f.grid = Grid2D(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      size_t i = (static_cast<size_t>(r) * w + c) * bpp;
      int v = bpp == 1 ? raw[i] : (raw[i] << 8) | raw[i + 1];
      f.grid.at(r, c) = static_cast<double>(v) / maxval;
    }
  }
  f.extent_x_m = extent_m;
  f.extent_y_m = extent_m * h / w;
  f.wrap = wrap;
  return f;
}

#ifdef GABORODO_HAVE_PNG
TextureField load_png(const std::filesystem::path& path, double extent_m, WrapMode wrap) {
  std::FILE* fp = std::fopen(path.string().c_str(), "rb");
  if (!fp) throw std::runtime_error("png: cannot open " + path.string());
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw std::runtime_error("png: init failed");
  }
  std::vector<std::vector<png_byte>> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw std::runtime_error("png: decode failed for " + path.string());
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  png_uint_32 w = png_get_image_width(png, info);
  png_uint_32 h = png_get_image_height(png, info);
  png_byte color = png_get_color_type(png, info);
  png_byte depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  size_t rowbytes = png_get_rowbytes(png, info);
  rows.assign(h, std::vector<png_byte>(rowbytes));
  std::vector<png_bytep> ptrs(h);
  for (png_uint_32 r = 0; r < h; ++r) ptrs[r] = rows[r].data();
  png_read_image(png, ptrs.data());
  int channels = png_get_channels(png, info);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);

  TextureField f;
  f.grid = Grid2D(static_cast<int>(h), static_cast<int>(w));
  for (png_uint_32 r = 0; r < h; ++r) {
    for (png_uint_32 c = 0; c < w; ++c) {
      double v;
      if (channels >= 3) {
        const png_byte* px = &rows[r][c * channels];
        v = (0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2]) / 255.0;
      } else {
        v = rows[r][c * channels] / 255.0;
      }
      f.grid.at(static_cast<int>(r), static_cast<int>(c)) = std::clamp(v, 0.0, 1.0);
    }
  }
  f.extent_x_m = extent_m;
  f.extent_y_m = extent_m * h / static_cast<double>(w);
  f.wrap = wrap;
  return f;
}
#endif

}  // namespace

TextureField load_image(const std::filesystem::path& path, double extent_m, WrapMode wrap) {
  require(extent_m > 0, "load_image: extent must be positive");
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("load_image: cannot open " + path.string());
  unsigned char sig[8] = {0};
  probe.read(reinterpret_cast<char*>(sig), 8);
  probe.close();
  if (sig[0] == 'P' && sig[1] == '5') return load_pgm(path, extent_m, wrap);
  static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  if (std::equal(std::begin(png_sig), std::end(png_sig), sig)) {
#ifdef GABORODO_HAVE_PNG
    return load_png(path, extent_m, wrap);
#else
    throw std::runtime_error("load_image: PNG support not built in");
#endif
  }
  throw std::runtime_error("load_image: unsupported format (need PGM P5 or PNG): " + path.string());
}

void save_pgm(const Grid2D& grid, const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw std::runtime_error("pgm: cannot write " + path.string());
  std::fprintf(f, "P5\n%d %d\n255\n", grid.cols, grid.rows);
  std::vector<unsigned char> row(static_cast<size_t>(grid.cols));
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      double v = std::clamp(grid.at(r, c), 0.0, 1.0);
      row[static_cast<size_t>(c)] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    std::fwrite(row.data(), 1, row.size(), f);
  }
  std::fclose(f);
}

}  // namespace gaborodo

// SPDX-License-Identifier: Apache-2.0
#include "gaborodo/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace gaborodo {

namespace {

void emit_polyline(std::ofstream& out, const PlanarPath& p, double scale, double ox, double oy,
                   double height, const char* style, size_t max_points = 2000) {
  out << "  <polyline fill=\"none\" " << style << " points=\"";
  size_t stride = std::max<size_t>(1, p.size() / max_points);
  char buf[64];
  for (size_t i = 0; i < p.size(); i += stride) {
    double px = (p.x[i] - ox) * scale;
    double py = height - (p.y[i] - oy) * scale;  // flip y for screen coords
    std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px, py);
    out << buf;
  }
  // Always include the endpoint.
  double px = (p.x.back() - ox) * scale;
  double py = height - (p.y.back() - oy) * scale;
  std::snprintf(buf, sizeof(buf), "%.2f,%.2f", px, py);
  out << buf << "\"/>\n";
}

}  // namespace

void write_trajectory_svg(const PlanarPath& est, const PlanarPath& ref,
                          const std::filesystem::path& file, const std::string& title) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const PlanarPath* p : {&est, &ref}) {
    for (size_t i = 0; i < p->size(); ++i) {
      xmin = std::min(xmin, p->x[i]);
      xmax = std::max(xmax, p->x[i]);
      ymin = std::min(ymin, p->y[i]);
      ymax = std::max(ymax, p->y[i]);
    }
  }
  double span = std::max({xmax - xmin, ymax - ymin, 1e-6});
  const double draw = 640.0, margin = 40.0;
  double scale = draw / span;
  double width = (xmax - xmin) * scale + 2 * margin;
  double height = (ymax - ymin) * scale + 2 * margin;
  width = std::max(width, 320.0);
  height = std::max(height, 240.0);

  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("svg: cannot write " + file.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << static_cast<int>(width)
      << "\" height=\"" << static_cast<int>(height + 30) << "\" viewBox=\"" << -margin << " "
      << -margin - 15 << " " << width << " " << height + 30 << "\">\n";
  out << "  <rect x=\"" << -margin << "\" y=\"" << -margin - 15 << "\" width=\"" << width
      << "\" height=\"" << height + 30 << "\" fill=\"white\" stroke=\"#aaa\"/>\n";
  if (!title.empty())
    out << "  <text x=\"0\" y=\"" << -margin + 10 - 15
        << "\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";

  double inner_h = height - 2 * margin;
  emit_polyline(out, ref, scale, xmin, ymin, inner_h,
                "stroke=\"#333\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"");
  emit_polyline(out, est, scale, xmin, ymin, inner_h, "stroke=\"#1565c0\" stroke-width=\"1.5\"");

  // 1 m scale bar (or a decade that fits).
  double bar_m = std::pow(10.0, std::floor(std::log10(span / 4.0)));
  out << "  <line x1=\"0\" y1=\"" << inner_h + 22 << "\" x2=\"" << bar_m * scale << "\" y2=\""
      << inner_h + 22 << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  char label[64];
  std::snprintf(label, sizeof(label), "%g m", bar_m);
  out << "  <text x=\"" << bar_m * scale + 6 << "\" y=\"" << inner_h + 26
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << label << "</text>\n";
  out << "  <text x=\"" << draw * 0.55 << "\" y=\"" << inner_h + 26
      << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#1565c0\">estimate</text>\n";
  out << "  <text x=\"" << draw * 0.75 << "\" y=\"" << inner_h + 26
      << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">reference (dashed)</text>\n";
  out << "</svg>\n";
}

}  // namespace gaborodo

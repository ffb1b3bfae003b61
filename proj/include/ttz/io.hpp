// CSV point clouds and SVG scatter panels.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ttz/errors.hpp"
#include "ttz/point_cloud.hpp"

namespace ttz {

namespace fs = std::filesystem;

inline std::string format_17g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Writes "re,im" rows at 17 significant digits (round-trips doubles exactly).
inline void write_cloud_csv(const fs::path& path, const PointCloud& cloud) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "re,im\n";
  for (const cplx& z : cloud) out << format_17g(z.real()) << ',' << format_17g(z.imag()) << '\n';
}

/// Reads a two-column complex cloud; the first line is a header.  Extra columns
/// are ignored; the last two numeric columns are taken as (re, im).
inline PointCloud read_cloud_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  PointCloud cloud;
  std::string line;
  std::getline(in, line);  // header
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::vector<double> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        cols.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
      }
    }
    if (cols.size() < 2) throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": need re,im columns");
    cloud.points.emplace_back(cols[cols.size() - 2], cols[cols.size() - 1]);
  }
  return cloud;
}

// ---------------------------------------------------------------------------

struct SvgLayer {
  std::string name;
  std::string color;
  double radius = 1.5;  // in pixels
  double opacity = 1.0;
  PointCloud points;
  std::vector<std::pair<cplx, cplx>> segments;  // drawn as lines
};

struct SvgPanel {
  std::string title;
  ComplexRect window{};
  std::vector<SvgLayer> layers;  // painted in order
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace detail

/// Side-by-side panels, each a fixed square viewport mapped from its window.
inline std::string render_svg(const std::vector<SvgPanel>& panels, double panel_px = 520.0) {
  const double margin = 40.0;
  const double width = static_cast<double>(panels.size()) * (panel_px + margin) + margin;
  const double height = panel_px + 2.0 * margin;
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(width) + "\" height=\"" +
       detail::fmt(height) + "\" viewBox=\"0 0 " + detail::fmt(width) + " " + detail::fmt(height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const SvgPanel& p = panels[k];
    const double x0 = margin + static_cast<double>(k) * (panel_px + margin), y0 = margin;
    // Equal scale on both axes: fit the larger side.
    const double span = std::max(p.window.width(), p.window.height());
    const double scale = span > 0.0 ? panel_px / span : 1.0;
    const double cx = 0.5 * (p.window.re_min + p.window.re_max), cy = 0.5 * (p.window.im_min + p.window.im_max);
    auto px = [&](cplx z) { return x0 + 0.5 * panel_px + (z.real() - cx) * scale; };
    auto py = [&](cplx z) { return y0 + 0.5 * panel_px - (z.imag() - cy) * scale; };

    s += "<g id=\"panel" + std::to_string(k) + "\">\n";
    s += "<rect x=\"" + detail::fmt(x0) + "\" y=\"" + detail::fmt(y0) + "\" width=\"" + detail::fmt(panel_px) +
         "\" height=\"" + detail::fmt(panel_px) + "\" fill=\"none\" stroke=\"#888\"/>\n";
    s += "<text x=\"" + detail::fmt(x0) + "\" y=\"" + detail::fmt(y0 - 12.0) +
         "\" font-family=\"sans-serif\" font-size=\"14\">" + p.title + "</text>\n";
    // Axes through the origin when visible.
    if (p.window.re_min < 0.0 && p.window.re_max > 0.0) {
      const double ax = px({0.0, 0.0});
      if (ax > x0 && ax < x0 + panel_px)
        s += "<line x1=\"" + detail::fmt(ax) + "\" y1=\"" + detail::fmt(y0) + "\" x2=\"" + detail::fmt(ax) +
             "\" y2=\"" + detail::fmt(y0 + panel_px) + "\" stroke=\"#ddd\"/>\n";
    }
    if (p.window.im_min < 0.0 && p.window.im_max > 0.0) {
      const double ay = py({0.0, 0.0});
      if (ay > y0 && ay < y0 + panel_px)
        s += "<line x1=\"" + detail::fmt(x0) + "\" y1=\"" + detail::fmt(ay) + "\" x2=\"" +
             detail::fmt(x0 + panel_px) + "\" y2=\"" + detail::fmt(ay) + "\" stroke=\"#ddd\"/>\n";
    }
    for (const SvgLayer& layer : p.layers) {
      s += "<g id=\"" + layer.name + "\" fill=\"" + layer.color + "\" stroke=\"" + layer.color +
           "\" opacity=\"" + detail::fmt(layer.opacity) + "\">\n";
      for (const auto& [a, b] : layer.segments)
        s += "<line x1=\"" + detail::fmt(px(a)) + "\" y1=\"" + detail::fmt(py(a)) + "\" x2=\"" + detail::fmt(px(b)) +
             "\" y2=\"" + detail::fmt(py(b)) + "\" stroke-width=\"1.5\"/>\n";
      for (const cplx& z : layer.points) {
        const double X = px(z), Y = py(z);
        if (X < x0 - 2 || X > x0 + panel_px + 2 || Y < y0 - 2 || Y > y0 + panel_px + 2) continue;
        s += "<circle cx=\"" + detail::fmt(X) + "\" cy=\"" + detail::fmt(Y) + "\" r=\"" +
             detail::fmt(layer.radius) + "\" stroke=\"none\"/>\n";
      }
      s += "</g>\n";
    }
    s += "</g>\n";
  }
  s += "</svg>\n";
  return s;
}

inline void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

}  // namespace ttz

#include "cvabiplot/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <utility>

namespace cvab {

namespace {

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr std::size_t kShapes = 7;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string label_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c); break;
    }
  }
  return out;
}

// Glyph centred on (x, y); shape and colour cycle independently.
std::string glyph(std::size_t group, double x, double y, double r, const char* cls, const char* stroke) {
  const char* fill = kPalette[group % kPalette.size()];
  std::ostringstream g;
  g << "<";
  switch (group % kShapes) {
    case 0:
      g << "circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << num(r) << "\"";
      break;
    case 1:
      g << "rect x=\"" << num(x - r) << "\" y=\"" << num(y - r) << "\" width=\"" << num(2 * r) << "\" height=\""
        << num(2 * r) << "\"";
      break;
    case 2:
      g << "polygon points=\"" << num(x) << "," << num(y - r * 1.2) << " " << num(x - r * 1.1) << ","
        << num(y + r * 0.8) << " " << num(x + r * 1.1) << "," << num(y + r * 0.8) << "\"";
      break;
    case 3:
      g << "polygon points=\"" << num(x) << "," << num(y - r * 1.3) << " " << num(x + r * 1.3) << "," << num(y)
        << " " << num(x) << "," << num(y + r * 1.3) << " " << num(x - r * 1.3) << "," << num(y) << "\"";
      break;
    case 4:
      g << "polygon points=\"" << num(x) << "," << num(y + r * 1.2) << " " << num(x - r * 1.1) << ","
        << num(y - r * 0.8) << " " << num(x + r * 1.1) << "," << num(y - r * 0.8) << "\"";
      break;
    case 5: {
      const double a = r * 1.2;
      const double b = r * 0.4;
      g << "polygon points=\"" << num(x - b) << "," << num(y - a) << " " << num(x + b) << "," << num(y - a) << " "
        << num(x + b) << "," << num(y - b) << " " << num(x + a) << "," << num(y - b) << " " << num(x + a) << ","
        << num(y + b) << " " << num(x + b) << "," << num(y + b) << " " << num(x + b) << "," << num(y + a) << " "
        << num(x - b) << "," << num(y + a) << " " << num(x - b) << "," << num(y + b) << " " << num(x - a) << ","
        << num(y + b) << " " << num(x - a) << "," << num(y - b) << " " << num(x - b) << "," << num(y - b) << "\"";
      break;
    }
    default: {
      std::ostringstream pts;
      for (int k = 0; k < 10; ++k) {
        const double ang = -M_PI / 2 + k * M_PI / 5;
        const double rad = (k % 2 == 0) ? r * 1.4 : r * 0.6;
        if (k > 0) pts << " ";
        pts << num(x + rad * std::cos(ang)) << "," << num(y + rad * std::sin(ang));
      }
      g << "polygon points=\"" << pts.str() << "\"";
      break;
    }
  }
  g << " class=\"" << cls << "\" fill=\"" << fill << "\"";
  if (stroke != nullptr) g << " stroke=\"" << stroke << "\" stroke-width=\"1.2\"";
  g << "/>";
  return g.str();
}

// Parameter interval of origin + t * d inside the box.
std::optional<std::pair<double, double>> clip_line(const Point2& d, double xmin, double xmax, double ymin,
                                                   double ymax) {
  double lo = -1e300;
  double hi = 1e300;
  const double mins[2] = {xmin, ymin};
  const double maxs[2] = {xmax, ymax};
  for (int k = 0; k < 2; ++k) {
    if (std::abs(d[k]) < 1e-15) {
      if (0.0 < mins[k] || 0.0 > maxs[k]) return std::nullopt;
      continue;
    }
    double t1 = mins[k] / d[k];
    double t2 = maxs[k] / d[k];
    if (t1 > t2) std::swap(t1, t2);
    lo = std::max(lo, t1);
    hi = std::min(hi, t2);
  }
  if (!(lo < hi)) return std::nullopt;
  return std::make_pair(lo, hi);
}

}  // namespace

std::string render_svg(const BiplotLayout& layout, const SvgStyle& style) {
  const double margin_left = 50.0;
  const double margin_top = 50.0;
  const double margin_bottom = 50.0;
  const double legend_width = 170.0;
  const double side = std::max(100.0, std::min(style.width - margin_left - legend_width - 20.0,
                                               style.height - margin_top - margin_bottom));
  const double x0 = margin_left;
  const double y0 = margin_top;

  // Equal scaling: one square world window centred on the bounds.
  const Bounds& b = layout.bounds;
  const double span = std::max({b.xmax - b.xmin, b.ymax - b.ymin, 1e-12});
  const double cx = 0.5 * (b.xmin + b.xmax);
  const double cy = 0.5 * (b.ymin + b.ymax);
  const double wxmin = cx - span / 2;
  const double wxmax = cx + span / 2;
  const double wymin = cy - span / 2;
  const double wymax = cy + span / 2;
  const double scale = side / span;
  auto px = [&](double x) { return x0 + (x - wxmin) * scale; };
  auto py = [&](double y) { return y0 + (wymax - y) * scale; };
  auto inside = [&](const Point2& p) {
    return p[0] >= wxmin && p[0] <= wxmax && p[1] >= wymin && p[1] <= wymax;
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << style.width << "\" height=\""
      << style.height << "\" viewBox=\"0 0 " << style.width << " " << style.height << "\">\n";
  svg << "<defs><clipPath id=\"plot-area\"><rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\""
      << num(side) << "\" height=\"" << num(side) << "\"/></clipPath></defs>\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << num(x0 + side / 2) << "\" y=\"" << num(y0 - 20) << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(style.title) << "</text>\n";
  svg << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(side) << "\" height=\"" << num(side)
      << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";

  // Canonical axes through the origin.
  svg << "<g clip-path=\"url(#plot-area)\" stroke=\"#ddd\" stroke-width=\"1\">\n";
  if (inside(Point2(0.0, cy))) {
    svg << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(px(0)) << "\" y2=\""
        << num(y0 + side) << "\"/>\n";
  }
  if (inside(Point2(cx, 0.0))) {
    svg << "<line x1=\"" << num(x0) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(x0 + side) << "\" y2=\""
        << num(py(0)) << "\"/>\n";
  }
  svg << "</g>\n";

  char share[32];
  std::snprintf(share, sizeof(share), "%.1f", 100.0 * layout.eigenvalue_share);
  svg << "<text x=\"" << num(x0 + side / 2) << "\" y=\"" << num(y0 + side + 32) << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"12\">CV1 (CV1+CV2: " << share << "% of trace)</text>\n";
  svg << "<text x=\"" << num(x0 - 14) << "\" y=\"" << num(y0 + side / 2) << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 " << num(x0 - 14) << " "
      << num(y0 + side / 2) << ")\">" << (layout.degenerate ? "null" : "CV2") << "</text>\n";
  if (layout.degenerate) {
    svg << "<text x=\"" << num(x0 + 6) << "\" y=\"" << num(y0 + 14) << "\" font-family=\"sans-serif\" "
        << "font-size=\"11\" fill=\"#a00\" class=\"degeneracy-note\">one separating dimension; "
        << "vertical coordinate set to 0</text>\n";
  }

  // Calibrated variable axes.
  svg << "<g clip-path=\"url(#plot-area)\" font-family=\"sans-serif\" font-size=\"9\">\n";
  for (const auto& axis : layout.axes) {
    if (!axis.plottable) continue;
    const auto seg = clip_line(axis.direction, wxmin, wxmax, wymin, wymax);
    if (!seg) continue;
    const Point2 a = seg->first * axis.direction;
    const Point2 e = seg->second * axis.direction;
    svg << "<g class=\"axis\">\n";
    svg << "<line x1=\"" << num(px(a[0])) << "\" y1=\"" << num(py(a[1])) << "\" x2=\"" << num(px(e[0]))
        << "\" y2=\"" << num(py(e[1])) << "\" stroke=\"#777\" stroke-width=\"1\"/>\n";
    const Point2 normal(-axis.direction[1], axis.direction[0]);
    for (const auto& marker : axis.markers) {
      if (!inside(marker.position)) continue;
      const double mx = px(marker.position[0]);
      const double my = py(marker.position[1]);
      const double tx = 3.5 * normal[0];
      const double ty = -3.5 * normal[1];
      svg << "<line x1=\"" << num(mx - tx) << "\" y1=\"" << num(my - ty) << "\" x2=\"" << num(mx + tx)
          << "\" y2=\"" << num(my + ty) << "\" stroke=\"#777\" stroke-width=\"1\"/>";
      svg << "<text x=\"" << num(mx + 2.5 * tx) << "\" y=\"" << num(my + 2.5 * ty + 3) << "\" fill=\"#555\" "
          << "text-anchor=\"middle\">" << label_number(marker.value) << "</text>\n";
    }
    svg << "<text x=\"" << num(px(e[0]) - 6 * axis.direction[0]) << "\" y=\"" << num(py(e[1]) + 6 * axis.direction[1])
        << "\" font-size=\"11\" fill=\"#222\" text-anchor=\"middle\">" << xml_escape(axis.name) << "</text>\n";
    svg << "</g>\n";
  }
  svg << "</g>\n";

  // Samples, then group means on top.
  svg << "<g clip-path=\"url(#plot-area)\" fill-opacity=\"0.75\">\n";
  for (const auto& pt : layout.points) {
    svg << glyph(pt.group, px(pt.x), py(pt.y), style.point_radius, "sample", nullptr) << "\n";
  }
  svg << "</g>\n<g clip-path=\"url(#plot-area)\">\n";
  for (std::size_t k = 0; k < layout.group_means.size(); ++k) {
    const auto& m = layout.group_means[k];
    svg << glyph(k, px(m[0]), py(m[1]), style.point_radius * 2.2, "group-mean", "black") << "\n";
  }
  svg << "</g>\n";

  // Legend.
  const double lx = x0 + side + 20;
  svg << "<g font-family=\"sans-serif\" font-size=\"12\" class=\"legend\">\n";
  for (std::size_t k = 0; k < layout.group_names.size(); ++k) {
    const double ly = y0 + 14 + 20.0 * static_cast<double>(k);
    svg << glyph(k, lx + 6, ly - 4, style.point_radius * 1.4, "legend-key", nullptr);
    svg << "<text x=\"" << num(lx + 18) << "\" y=\"" << num(ly) << "\">" << xml_escape(layout.group_names[k])
        << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace cvab

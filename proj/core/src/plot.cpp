#include "flowgnn/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "flowgnn/errors.hpp"

namespace flowgnn::plot {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 60.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string scatter_svg(const std::vector<XY>& points, const ScatterOptions& options) {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (!points.empty()) {
    const auto [xmin, xmax] = std::minmax_element(points.begin(), points.end(),
                                                  [](const XY& a, const XY& b) { return a.x < b.x; });
    const auto [ymin, ymax] = std::minmax_element(points.begin(), points.end(),
                                                  [](const XY& a, const XY& b) { return a.y < b.y; });
    x0 = xmin->x;
    x1 = xmax->x;
    y0 = ymin->y;
    y1 = ymax->y;
  }
  if (options.equal_axes) {
    x0 = y0 = std::min(x0, y0);
    x1 = y1 = std::max(x1, y1);
  }
  if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
  if (y1 - y0 < 1e-12) y1 = y0 + 1.0;
  const double pw = kWidth - 2 * kMargin;
  const double ph = kHeight - 2 * kMargin;
  auto sx = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kHeight - kMargin - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">"
      << escape(options.title) << "</text>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(options.x_label) << "</text>\n";
  svg << "<text x=\"15\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
      << "transform=\"rotate(-90 15 " << kHeight / 2 << ")\">" << escape(options.y_label) << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 + (y1 - y0) * i / 4.0;
    svg << "<text x=\"" << sx(fx) << "\" y=\"" << kHeight - kMargin + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">" << fx << "</text>\n";
    svg << "<text x=\"" << kMargin - 6 << "\" y=\"" << sy(fy) + 3
        << "\" text-anchor=\"end\" font-size=\"10\">" << fy << "</text>\n";
  }
  auto draw_line = [&](const Line& l, const char* style) {
    svg << "<line x1=\"" << sx(x0) << "\" y1=\"" << sy(l.intercept + l.slope * x0) << "\" x2=\""
        << sx(x1) << "\" y2=\"" << sy(l.intercept + l.slope * x1) << "\" " << style << "/>\n";
  };
  svg << "<clipPath id=\"plot\"><rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << pw
      << "\" height=\"" << ph << "\"/></clipPath>\n<g clip-path=\"url(#plot)\">\n";
  if (options.reference) draw_line(*options.reference, "stroke=\"gray\" stroke-dasharray=\"6 4\"");
  if (options.fit) draw_line(*options.fit, "stroke=\"crimson\" stroke-width=\"2\"");
  for (const XY& p : points) {
    svg << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y)
        << "\" r=\"2.5\" fill=\"steelblue\" fill-opacity=\"0.6\"/>\n";
  }
  svg << "</g>\n";
  if (!options.annotation.empty()) {
    svg << "<text x=\"" << kMargin + 8 << "\" y=\"" << kMargin + 18 << "\" font-size=\"12\">"
        << escape(options.annotation) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace flowgnn::plot

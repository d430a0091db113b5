#include "schrolab/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "schrolab/config.hpp"

namespace schrolab {

namespace {

constexpr double W = 640.0, H = 480.0;
constexpr double ML = 70.0, MR = 20.0, MT = 40.0, MB = 50.0;

std::string num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

void write_loglog_svg(const PlotSeries& plot, const std::string& path) {
  if (plot.points.empty())
    throw std::invalid_argument("write_loglog_svg: no points");
  double lx0 = 1e300, lx1 = -1e300, ly0 = 1e300, ly1 = -1e300;
  for (const auto& [x, y] : plot.points) {
    if (!(x > 0.0) || !(y > 0.0))
      throw std::invalid_argument("write_loglog_svg: coordinates must be > 0");
    lx0 = std::min(lx0, std::log10(x));
    lx1 = std::max(lx1, std::log10(x));
    ly0 = std::min(ly0, std::log10(y));
    ly1 = std::max(ly1, std::log10(y));
  }
  // pad degenerate and narrow ranges
  const double padx = std::max(0.05, 0.08 * (lx1 - lx0));
  const double pady = std::max(0.05, 0.08 * (ly1 - ly0));
  lx0 -= padx;
  lx1 += padx;
  ly0 -= pady;
  ly1 += pady;

  const auto X = [&](double lx) {
    return ML + (lx - lx0) / (lx1 - lx0) * (W - ML - MR);
  };
  const auto Y = [&](double ly) {
    return H - MB - (ly - ly0) / (ly1 - ly0) * (H - MT - MB);
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write svg: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H
      << "\">\n";
  out << "<!-- generated " << timestamp_utc() << " -->\n";
  out << "<rect width=\"" << W << "\" height=\"" << H
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"monospace\" font-size=\"15\">"
      << plot.title << "</text>\n";

  // axes
  out << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR
      << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML
      << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"12\">log10 "
      << plot.xlabel << "</text>\n";
  out << "<text x=\"16\" y=\"" << H / 2
      << "\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"12\" transform=\"rotate(-90 16 "
      << H / 2 << ")\">log10 " << plot.ylabel << "</text>\n";
  // range labels at the axis ends
  out << "<text x=\"" << ML << "\" y=\"" << H - MB + 16
      << "\" font-family=\"monospace\" font-size=\"11\">" << num(lx0)
      << "</text>\n";
  out << "<text x=\"" << W - MR << "\" y=\"" << H - MB + 16
      << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">"
      << num(lx1) << "</text>\n";
  out << "<text x=\"" << ML - 6 << "\" y=\"" << H - MB
      << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">"
      << num(ly0) << "</text>\n";
  out << "<text x=\"" << ML - 6 << "\" y=\"" << MT + 10
      << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">"
      << num(ly1) << "</text>\n";

  constexpr double ln10 = 2.302585092994046;
  const auto draw_line = [&](double slope, double intercept, const char* color,
                             const char* dash) {
    // natural-log fit -> log10 coordinates
    const double a = slope;
    const double b = intercept / ln10;
    const double yl = a * lx0 + b, yr = a * lx1 + b;
    out << "<line x1=\"" << X(lx0) << "\" y1=\"" << Y(yl) << "\" x2=\""
        << X(lx1) << "\" y2=\"" << Y(yr) << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"" << dash << "/>\n";
  };
  if (std::isfinite(plot.fit_slope))
    draw_line(plot.fit_slope, plot.fit_intercept, "#1a6faf", "");
  if (std::isfinite(plot.ref_slope) && !plot.points.empty()) {
    // anchor the reference slope at the first data point
    const double lx = std::log10(plot.points.front().first);
    const double ly = std::log10(plot.points.front().second);
    const double intercept_n = (ly - plot.ref_slope * lx) * ln10;
    draw_line(plot.ref_slope, intercept_n, "#b03030",
              " stroke-dasharray=\"6 4\"");
  }

  for (const auto& [x, y] : plot.points)
    out << "<circle cx=\"" << X(std::log10(x)) << "\" cy=\""
        << Y(std::log10(y)) << "\" r=\"3.2\" fill=\"black\"/>\n";

  out << "</svg>\n";
  if (!out) throw std::runtime_error("svg write failed: " + path);
}

}  // namespace schrolab

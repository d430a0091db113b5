#pragma once
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace schrolab {

// Minimal log-log scatter: axes, the data points, the fitted power law and
// a dashed reference-slope line.  Slopes/intercepts are in natural-log
// space (y = e^intercept * x^slope).  NaN slope disables the line.
struct PlotSeries {
  std::string title;
  std::string xlabel = "x";
  std::string ylabel = "y";
  std::vector<std::pair<double, double>> points;  // positive coordinates
  double fit_slope = std::nan("");
  double fit_intercept = 0.0;
  double ref_slope = std::nan("");
};

// Writes the plot; the only run-dependent content is a timestamp comment.
void write_loglog_svg(const PlotSeries& plot, const std::string& path);

}  // namespace schrolab

#pragma once

#include <string>
#include <vector>

// Minimal self-contained SVG line plots for run artifacts. No styling hooks,
// no interactivity; just enough to eyeball convergence curves and paths.

namespace slamobs {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotMarker {
  double x = 0.0;
  double y = 0.0;
};

/// Time-series plot. With log_y set, values are clamped to 1e-16 and drawn on
/// a log10 scale with decade ticks.
std::string line_plot_svg(const std::string& title, const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<PlotSeries>& series, bool log_y);

/// Same frame, but meant for paths in a plane; markers are drawn as circles.
std::string scatter_plot_svg(const std::string& title, const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<PlotSeries>& series,
                             const std::vector<PlotMarker>& markers);

}  // namespace slamobs

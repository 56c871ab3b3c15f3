#include "slamobs/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace slamobs {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 74.0;
constexpr double kRight = 24.0;
constexpr double kTop = 44.0;
constexpr double kBottom = 56.0;
constexpr double kLogFloor = 1e-16;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string tick_label(double v) {
  // %g keeps axis labels short without committing to a fixed precision.
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  void widen(double v) {
    if (!std::isfinite(v)) {
      return;
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  void finish() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      const double pad = std::max(1.0, std::abs(hi)) * 0.5;
      lo -= pad;
      hi += pad;
    }
  }
};

Range data_range(const std::vector<PlotSeries>& series, bool use_x,
                 const std::vector<PlotMarker>* markers) {
  Range r;
  r.lo = std::numeric_limits<double>::infinity();
  r.hi = -std::numeric_limits<double>::infinity();
  for (const PlotSeries& s : series) {
    const std::vector<double>& vals = use_x ? s.x : s.y;
    for (double v : vals) {
      r.widen(v);
    }
  }
  if (markers != nullptr) {
    for (const PlotMarker& m : *markers) {
      r.widen(use_x ? m.x : m.y);
    }
  }
  r.finish();
  return r;
}

// Tick step rounded to a 1/2/5 decade multiple, aiming for about five ticks.
double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double mult = 10.0;
  if (frac <= 1.5) {
    mult = 1.0;
  } else if (frac <= 3.5) {
    mult = 2.0;
  } else if (frac <= 7.5) {
    mult = 5.0;
  }
  return mult * mag;
}

std::vector<double> linear_ticks(const Range& r) {
  std::vector<double> ticks;
  const double step = nice_step(r.hi - r.lo);
  double v = std::ceil(r.lo / step) * step;
  for (; v <= r.hi + step * 1e-9; v += step) {
    ticks.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
  }
  return ticks;
}

std::vector<double> decade_ticks(const Range& r) {
  std::vector<double> ticks;
  const int lo = static_cast<int>(std::ceil(r.lo - 1e-9));
  const int hi = static_cast<int>(std::floor(r.hi + 1e-9));
  int stride = 1;
  while ((hi - lo) / stride > 8) {
    ++stride;
  }
  for (int d = lo; d <= hi; d += stride) {
    ticks.push_back(static_cast<double>(d));
  }
  return ticks;
}

class Frame {
 public:
  Frame(Range x, Range y) : x_(x), y_(y) {}

  double px(double x) const {
    return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kHeight - kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom);
  }

  const Range& x() const { return x_; }
  const Range& y() const { return y_; }

 private:
  Range x_;
  Range y_;
};

void emit_header(std::ostringstream& out, const std::string& title) {
  out << "<svg version=\"1.1\" xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 "
      << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-size=\"16\">"
      << title << "</text>\n";
}

void emit_axes(std::ostringstream& out, const Frame& f, const std::string& x_label,
               const std::string& y_label, const std::vector<double>& xticks,
               const std::vector<double>& yticks, bool log_y) {
  for (double t : yticks) {
    const double y = f.py(t);
    out << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(y) << "\" x2=\""
        << kWidth - kRight << "\" y2=\"" << fmt(y)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    const std::string label = log_y ? ("1e" + tick_label(t)) : tick_label(t);
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-size=\"12\">" << label << "</text>\n";
  }
  for (double t : xticks) {
    const double x = f.px(t);
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << kTop << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << kHeight - kBottom
        << "\" stroke=\"#eeeeee\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(x) << "\" y=\"" << kHeight - kBottom + 18
        << "\" text-anchor=\"middle\" font-size=\"12\">" << tick_label(t)
        << "</text>\n";
  }
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << kWidth - kLeft - kRight << "\" height=\"" << kHeight - kTop - kBottom
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << (kTop + kHeight - kBottom) / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
      << (kTop + kHeight - kBottom) / 2 << ")\">" << y_label << "</text>\n";
}

void emit_polyline(std::ostringstream& out, const Frame& f, const PlotSeries& s,
                   const char* color, bool log_y) {
  const size_t n = std::min(s.x.size(), s.y.size());
  if (n == 0) {
    return;
  }
  // Long traces are thinned; the final sample is always kept.
  const size_t stride = std::max<size_t>(1, n / 1600);
  out << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" points=\"";
  for (size_t i = 0; i < n; i += stride) {
    const size_t idx = (i + stride >= n) ? n - 1 : i;
    double y = s.y[idx];
    if (log_y) {
      y = std::log10(std::max(y, kLogFloor));
    }
    out << fmt(f.px(s.x[idx])) << ',' << fmt(f.py(y)) << ' ';
    if (idx == n - 1) {
      break;
    }
  }
  out << "\"/>\n";
}

void emit_legend(std::ostringstream& out, const std::vector<PlotSeries>& series) {
  double y = kTop + 16;
  for (size_t i = 0; i < series.size(); ++i) {
    const double x = kWidth - kRight - 150;
    out << "<line x1=\"" << x << "\" y1=\"" << y - 4 << "\" x2=\"" << x + 26
        << "\" y2=\"" << y - 4 << "\" stroke=\""
        << kPalette[i % std::size(kPalette)] << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << x + 32 << "\" y=\"" << y
        << "\" font-size=\"12\">" << series[i].label << "</text>\n";
    y += 18;
  }
}

}  // namespace

std::string line_plot_svg(const std::string& title, const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<PlotSeries>& series, bool log_y) {
  std::vector<PlotSeries> drawn = series;
  if (log_y) {
    for (PlotSeries& s : drawn) {
      for (double& v : s.y) {
        v = std::log10(std::max(v, kLogFloor));
      }
    }
  }
  const Range xr = data_range(drawn, true, nullptr);
  const Range yr = data_range(drawn, false, nullptr);
  const Frame f(xr, yr);

  std::ostringstream out;
  emit_header(out, title);
  emit_axes(out, f, x_label, y_label, linear_ticks(xr),
            log_y ? decade_ticks(yr) : linear_ticks(yr), log_y);
  for (size_t i = 0; i < series.size(); ++i) {
    emit_polyline(out, f, series[i], kPalette[i % std::size(kPalette)], log_y);
  }
  emit_legend(out, series);
  out << "</svg>\n";
  return out.str();
}

std::string scatter_plot_svg(const std::string& title, const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<PlotSeries>& series,
                             const std::vector<PlotMarker>& markers) {
  const Range xr = data_range(series, true, &markers);
  const Range yr = data_range(series, false, &markers);
  const Frame f(xr, yr);

  std::ostringstream out;
  emit_header(out, title);
  emit_axes(out, f, x_label, y_label, linear_ticks(xr), linear_ticks(yr), false);
  for (size_t i = 0; i < series.size(); ++i) {
    emit_polyline(out, f, series[i], kPalette[i % std::size(kPalette)], false);
  }
  for (const PlotMarker& m : markers) {
    out << "<circle cx=\"" << fmt(f.px(m.x)) << "\" cy=\"" << fmt(f.py(m.y))
        << "\" r=\"5\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1.5\"/>\n";
  }
  emit_legend(out, series);
  out << "</svg>\n";
  return out.str();
}

}  // namespace slamobs

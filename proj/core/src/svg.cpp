#include "memkern/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "memkern/errors.hpp"
#include "memkern/io.hpp"

namespace memkern {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 520.0;
constexpr double kMarginLeft = 72.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 46.0;
constexpr double kMarginBottom = 56.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    hi = lo + 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

/// Tick spacing on the 1-2-5 ladder giving 4..8 ticks across the range.
double tick_step(const Range& r) {
  const double raw = (r.hi - r.lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double mult : {1.0, 2.0, 5.0}) {
    if (raw <= mult * mag) {
      return mult * mag;
    }
  }
  return 10.0 * mag;
}

std::string trim_number(double x) {
  // %g with few digits for ticks
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

}  // namespace

void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series) {
  if (series.empty()) {
    throw std::invalid_argument("write_line_chart: no series");
  }
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size() || s.x.empty()) {
      throw std::invalid_argument("write_line_chart: series sizes mismatch");
    }
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      xlo = std::min(xlo, s.x[k]);
      xhi = std::max(xhi, s.x[k]);
      ylo = std::min(ylo, s.y[k]);
      yhi = std::max(yhi, s.y[k]);
    }
  }
  const Range rx = padded(xlo, xhi);
  const Range ry = padded(ylo, yhi);
  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double x) {
    return kMarginLeft + (x - rx.lo) / (rx.hi - rx.lo) * plot_w;
  };
  auto py = [&](double y) {
    return kMarginTop + (ry.hi - y) / (ry.hi - ry.lo) * plot_h;
  };

  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot open " + path.string() + " for writing");
  }

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  // gridlines and ticks
  const double sx = tick_step(rx);
  const double sy = tick_step(ry);
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">\n";
  for (double x = std::ceil(rx.lo / sx) * sx; x <= rx.hi + 1e-12 * sx; x += sx) {
    out << "<line x1=\"" << px(x) << "\" y1=\"" << py(ry.lo) << "\" x2=\"" << px(x)
        << "\" y2=\"" << py(ry.hi) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << px(x) << "\" y=\"" << py(ry.lo) + 16
        << "\" text-anchor=\"middle\">" << trim_number(x) << "</text>\n";
  }
  for (double y = std::ceil(ry.lo / sy) * sy; y <= ry.hi + 1e-12 * sy; y += sy) {
    out << "<line x1=\"" << px(rx.lo) << "\" y1=\"" << py(y) << "\" x2=\"" << px(rx.hi)
        << "\" y2=\"" << py(y) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << px(rx.lo) - 6 << "\" y=\"" << py(y) + 4
        << "\" text-anchor=\"end\">" << trim_number(y) << "</text>\n";
  }
  out << "</g>\n";

  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
      << plot_w << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";

  // axis labels
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << kMarginTop + plot_h / 2 << ")\">" << y_label
      << "</text>\n";

  // series
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const std::string color =
        s.color.empty() ? kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))]
                        : s.color;
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\"";
    if (s.dashed) {
      out << " stroke-dasharray=\"6 4\"";
    }
    out << " points=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      out << px(s.x[k]) << ',' << py(s.y[k]) << ' ';
    }
    out << "\"/>\n";
  }

  // legend
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  double ly = kMarginTop + 14.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    if (s.label.empty()) {
      continue;
    }
    const std::string color =
        s.color.empty() ? kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))]
                        : s.color;
    const double lx = kWidth - kMarginRight - 170.0;
    out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 22
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (s.dashed) {
      out << " stroke-dasharray=\"6 4\"";
    }
    out << "/>\n";
    out << "<text x=\"" << lx + 28 << "\" y=\"" << ly << "\">" << s.label
        << "</text>\n";
    ly += 16.0;
  }
  out << "</g>\n</svg>\n";
  if (!out) {
    throw Error("failed writing " + path.string());
  }
}

}  // namespace memkern

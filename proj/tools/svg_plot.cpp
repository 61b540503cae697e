#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace wpcn_tools {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 160;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                         "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                         "#17becf", "#bcbd22", "#aec7e8", "#ff9896"};

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  void widen(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

double nice_step(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  if (norm < 1.5) return mag;
  if (norm < 3.5) return 2.0 * mag;
  if (norm < 7.5) return 5.0 * mag;
  return 10.0 * mag;
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<Curve>& curves) {
  if (curves.empty()) {
    throw std::invalid_argument("write_svg_plot: no curves");
  }
  Range xr{1e300, -1e300};
  Range yr{1e300, -1e300};
  std::size_t total_points = 0;
  for (const Curve& c : curves) {
    for (const auto& [x, y] : c.points) {
      xr.widen(x);
      yr.widen(y);
      ++total_points;
    }
  }
  if (total_points == 0) {
    throw std::invalid_argument("write_svg_plot: curves have no points");
  }
  if (xr.hi <= xr.lo) {
    xr.lo -= 0.5;
    xr.hi += 0.5;
  }
  if (yr.hi <= yr.lo) {
    yr.lo -= 0.5;
    yr.hi += 0.5;
  }
  const double ypad = 0.05 * (yr.hi - yr.lo);
  yr.lo -= ypad;
  yr.hi += ypad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto sx = [&](double x) {
    return kMarginLeft + plot_w * (x - xr.lo) / (xr.hi - xr.lo);
  };
  const auto sy = [&](double y) {
    return kMarginTop + plot_h * (1.0 - (y - yr.lo) / (yr.hi - yr.lo));
  };

  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  std::fprintf(f,
               "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
               "viewBox=\"0 0 %d %d\" font-family=\"sans-serif\" font-size=\"12\">\n",
               kWidth, kHeight, kWidth, kHeight);
  std::fprintf(f, "<rect width=\"%d\" height=\"%d\" fill=\"white\"/>\n", kWidth,
               kHeight);
  std::fprintf(f,
               "<text x=\"%d\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
               "%s</text>\n",
               kWidth / 2, title.c_str());

  // Gridlines and tick labels.
  const double xstep = nice_step(xr.hi - xr.lo);
  for (double x = std::ceil(xr.lo / xstep) * xstep; x <= xr.hi + 1e-12 * xstep;
       x += xstep) {
    const double px = sx(x);
    std::fprintf(f,
                 "<line x1=\"%.1f\" y1=\"%d\" x2=\"%.1f\" y2=\"%.1f\" "
                 "stroke=\"#dddddd\"/>\n",
                 px, kMarginTop, px, kMarginTop + plot_h);
    std::fprintf(f,
                 "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%g</text>\n",
                 px, kMarginTop + plot_h + 18.0, x);
  }
  const double ystep = nice_step(yr.hi - yr.lo);
  for (double y = std::ceil(yr.lo / ystep) * ystep; y <= yr.hi + 1e-12 * ystep;
       y += ystep) {
    const double py = sy(y);
    std::fprintf(f,
                 "<line x1=\"%d\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                 "stroke=\"#dddddd\"/>\n",
                 kMarginLeft, py, kMarginLeft + plot_w, py);
    std::fprintf(f,
                 "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%g</text>\n",
                 kMarginLeft - 6.0, py + 4.0, y);
  }

  // Axes.
  std::fprintf(f,
               "<rect x=\"%d\" y=\"%d\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
               "stroke=\"black\"/>\n",
               kMarginLeft, kMarginTop, plot_w, plot_h);
  std::fprintf(f,
               "<text x=\"%.1f\" y=\"%d\" text-anchor=\"middle\">%s</text>\n",
               kMarginLeft + plot_w / 2.0, kHeight - 12, x_label.c_str());
  std::fprintf(f,
               "<text x=\"18\" y=\"%.1f\" text-anchor=\"middle\" "
               "transform=\"rotate(-90 18 %.1f)\">%s</text>\n",
               kMarginTop + plot_h / 2.0, kMarginTop + plot_h / 2.0, y_label.c_str());

  // Curves with point markers.
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const char* color = kColors[i % (sizeof(kColors) / sizeof(kColors[0]))];
    std::fprintf(f, "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"1.8\" points=\"",
                 color);
    for (const auto& [x, y] : curves[i].points) {
      std::fprintf(f, "%.2f,%.2f ", sx(x), sy(y));
    }
    std::fputs("\"/>\n", f);
    for (const auto& [x, y] : curves[i].points) {
      std::fprintf(f, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n", sx(x),
                   sy(y), color);
    }
  }

  // Legend.
  const double lx = kMarginLeft + plot_w + 12.0;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const double ly = kMarginTop + 10.0 + 18.0 * static_cast<double>(i);
    const char* color = kColors[i % (sizeof(kColors) / sizeof(kColors[0]))];
    std::fprintf(f,
                 "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                 "stroke=\"%s\" stroke-width=\"2\"/>\n",
                 lx, ly, lx + 18.0, ly, color);
    std::fprintf(f, "<text x=\"%.1f\" y=\"%.1f\">%s</text>\n", lx + 24.0, ly + 4.0,
                 curves[i].label.c_str());
  }

  std::fputs("</svg>\n", f);
  std::fclose(f);
}

}  // namespace wpcn_tools

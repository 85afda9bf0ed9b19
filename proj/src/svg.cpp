#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cli.hpp"

namespace onoff::cli {

// Minimal self-contained line chart: axes, ticks, series, legend. No external
// assets, no scripting; enough to eyeball sweep shapes.

static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                 "#9467bd", "#ff7f0e", "#8c564b"};

static std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string render_line_chart(const std::string& title, const std::string& xlabel,
                              const std::string& ylabel, bool log_x,
                              const std::vector<Series>& series) {
  const double W = 800, H = 500, L = 70, R = 160, T = 40, B = 55;
  const double pw = W - L - R, ph = H - T - B;

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (auto [x, y] : s.pts) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmin > xmax) { xmin = 0; xmax = 1; }
  if (ymin > ymax) { ymin = 0; ymax = 1; }
  if (xmin == xmax) { xmin -= 0.5; xmax += 0.5; }
  if (ymin == ymax) { ymin -= 0.5; ymax += 0.5; }
  double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  if (log_x && xmin <= 0) log_x = false;

  auto tx = [&](double x) {
    double u = log_x ? (std::log(x) - std::log(xmin)) / (std::log(xmax) - std::log(xmin))
                     : (x - xmin) / (xmax - xmin);
    return L + u * pw;
  };
  auto ty = [&](double y) { return T + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << L + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">"
     << title << "</text>\n";

  // axes
  os << "<line x1=\"" << L << "\" y1=\"" << T + ph << "\" x2=\"" << L + pw << "\" y2=\"" << T + ph
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << T + ph
     << "\" stroke=\"black\"/>\n";

  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    double f = (double)i / nticks;
    double xv = log_x ? std::exp(std::log(xmin) + f * (std::log(xmax) - std::log(xmin)))
                      : xmin + f * (xmax - xmin);
    double px = tx(xv);
    os << "<line x1=\"" << px << "\" y1=\"" << T + ph << "\" x2=\"" << px << "\" y2=\""
       << T + ph + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px << "\" y=\"" << T + ph + 20
       << "\" text-anchor=\"middle\" font-size=\"11\">" << num(xv) << "</text>\n";
    double yv = ymin + f * (ymax - ymin);
    double py = ty(yv);
    os << "<line x1=\"" << L - 5 << "\" y1=\"" << py << "\" x2=\"" << L << "\" y2=\"" << py
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << L - 8 << "\" y=\"" << py + 4
       << "\" text-anchor=\"end\" font-size=\"11\">" << num(yv) << "</text>\n";
  }
  os << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 12
     << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel << "</text>\n";
  os << "<text x=\"18\" y=\"" << T + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
     << "transform=\"rotate(-90 18 " << T + ph / 2 << ")\">" << ylabel << "</text>\n";

  int ci = 0;
  double ly = T + 10;
  for (const auto& s : series) {
    const char* color = kPalette[ci % 6];
    ++ci;
    if (s.markers) {
      for (auto [x, y] : s.pts)
        if (std::isfinite(x) && std::isfinite(y))
          os << "<circle cx=\"" << tx(x) << "\" cy=\"" << ty(y) << "\" r=\"3\" fill=\"" << color
             << "\"/>\n";
    } else {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (auto [x, y] : s.pts)
        if (std::isfinite(x) && std::isfinite(y)) os << tx(x) << "," << ty(y) << " ";
      os << "\"/>\n";
    }
    os << "<rect x=\"" << L + pw + 15 << "\" y=\"" << ly - 8 << "\" width=\"12\" height=\"4\" "
       << "fill=\"" << color << "\"/>\n";
    os << "<text x=\"" << L + pw + 32 << "\" y=\"" << ly - 2 << "\" font-size=\"11\">" << s.name
       << "</text>\n";
    ly += 18;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace onoff::cli

#include "ppmwords/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "ppmwords/error.hpp"

namespace ppmwords {
namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 170, kTop = 60, kBottom = 60;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double exponent10) {
  const double v = std::pow(10.0, exponent10);
  char buf[32];
  if (exponent10 >= 0 && exponent10 < 6) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
  } else {
    std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(exponent10));
  }
  return buf;
}

}  // namespace

std::string render_loglog_svg(const Plot& plot) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& c : plot.curves) {
    for (std::size_t i = 0; i < std::min(c.x.size(), c.y.size()); ++i) {
      if (c.x[i] <= 0 || c.y[i] <= 0) continue;
      x_lo = std::min(x_lo, std::log10(c.x[i]));
      x_hi = std::max(x_hi, std::log10(c.x[i]));
      y_lo = std::min(y_lo, std::log10(c.y[i]));
      y_hi = std::max(y_hi, std::log10(c.y[i]));
    }
  }
  if (!std::isfinite(x_lo)) fail(ErrorKind::InsufficientData, "nothing to plot: no positive points");
  x_lo = std::floor(x_lo);
  x_hi = std::max(std::ceil(x_hi), x_lo + 1);
  y_lo = std::floor(y_lo);
  y_hi = std::max(std::ceil(y_hi), y_lo + 1);

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double lx) { return kLeft + (lx - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double ly) { return kTop + ph - (ly - y_lo) / (y_hi - y_lo) * ph; };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(plot.title)
    << "</text>\n";
  double note_y = 40;
  for (const auto& note : plot.notes) {
    s << "<text x=\"" << kWidth / 2 << "\" y=\"" << note_y << "\" text-anchor=\"middle\" fill=\"#555\">"
      << escape(note) << "</text>\n";
    note_y += 14;
  }

  s << "<g stroke=\"#ddd\" stroke-width=\"1\">\n";
  for (double e = x_lo; e <= x_hi + 1e-9; e += 1)
    s << "<line x1=\"" << num(px(e)) << "\" y1=\"" << num(py(y_lo)) << "\" x2=\"" << num(px(e)) << "\" y2=\""
      << num(py(y_hi)) << "\"/>\n";
  for (double e = y_lo; e <= y_hi + 1e-9; e += 1)
    s << "<line x1=\"" << num(px(x_lo)) << "\" y1=\"" << num(py(e)) << "\" x2=\"" << num(px(x_hi)) << "\" y2=\""
      << num(py(e)) << "\"/>\n";
  s << "</g>\n";
  s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double e = x_lo; e <= x_hi + 1e-9; e += 1)
    s << "<text x=\"" << num(px(e)) << "\" y=\"" << num(py(y_lo) + 16) << "\" text-anchor=\"middle\">"
      << tick_label(e) << "</text>\n";
  for (double e = y_lo; e <= y_hi + 1e-9; e += 1)
    s << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(e) + 4) << "\" text-anchor=\"end\">" << tick_label(e)
      << "</text>\n";
  s << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 16) << "\" text-anchor=\"middle\">"
    << escape(plot.x_label) << "</text>\n";
  s << "<text x=\"18\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << num(kTop + ph / 2) << ")\">" << escape(plot.y_label) << "</text>\n";

  for (std::size_t ci = 0; ci < plot.curves.size(); ++ci) {
    const auto& c = plot.curves[ci];
    const char* color = kColors[ci % std::size(kColors)];
    std::ostringstream pts;
    for (std::size_t i = 0; i < std::min(c.x.size(), c.y.size()); ++i) {
      if (c.x[i] <= 0 || c.y[i] <= 0) continue;
      pts << num(px(std::log10(c.x[i]))) << ',' << num(py(std::log10(c.y[i]))) << ' ';
    }
    const std::string points = pts.str();
    if (!points.empty()) {
      s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << points
        << "\"/>\n";
      std::istringstream ps(points);
      std::string p;
      while (ps >> p) {
        const auto comma = p.find(',');
        s << "<circle cx=\"" << p.substr(0, comma) << "\" cy=\"" << p.substr(comma + 1) << "\" r=\"2.5\" fill=\""
          << color << "\"/>\n";
      }
    }
    std::string legend = c.label;
    if (c.fit) {
      const auto& f = *c.fit;
      auto fy = [&](double x) { return (f.intercept + f.slope * std::log(x)) / std::log(10.0); };
      s << "<line x1=\"" << num(px(std::log10(f.x_lo))) << "\" y1=\"" << num(py(fy(f.x_lo))) << "\" x2=\""
        << num(px(std::log10(f.x_hi))) << "\" y2=\"" << num(py(fy(f.x_hi))) << "\" stroke=\"" << color
        << "\" stroke-dasharray=\"6,4\" stroke-width=\"1.2\"/>\n";
      char buf[48];
      std::snprintf(buf, sizeof buf, " (slope %.3f)", f.slope);
      legend += buf;
    }
    const double ly = kTop + 14 + 18 * static_cast<double>(ci);
    s << "<line x1=\"" << num(kWidth - kRight + 10) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
      << num(kWidth - kRight + 30) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << num(kWidth - kRight + 34) << "\" y=\"" << num(ly) << "\" font-size=\"11\">"
      << escape(legend) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace ppmwords

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ppmwords {

struct PlotCurve {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  /// Fitted power law y = exp(intercept) x^slope drawn over [fit_lo, fit_hi].
  struct Fit {
    double slope;
    double intercept;
    double x_lo;
    double x_hi;
  };
  std::optional<Fit> fit;
};

struct Plot {
  std::string title;
  std::string x_label = "n";
  std::string y_label;
  std::vector<PlotCurve> curves;
  std::vector<std::string> notes;  // printed under the title (warnings, timestamp)
};

/// Static SVG 1.1 log-log plot. Points with non-positive coordinates are
/// skipped. Output depends only on the plot contents.
std::string render_loglog_svg(const Plot& plot);

}  // namespace ppmwords

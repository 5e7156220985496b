#pragma once

#include <string>
#include <vector>

namespace dss {

// Minimal static SVG figure: bands, lines, points, horizontal rules, axis ticks.
// Rendering is pure string assembly with fixed-precision coordinates, so equal
// inputs give byte-identical output.
struct SvgFigure {
  double width = 640.0;
  double height = 420.0;
  std::string title, xlabel, ylabel;

  struct Band {
    std::vector<double> x, lo, hi;
    std::string fill;
  };
  struct Line {
    std::vector<double> x, y;
    std::string stroke;
    double stroke_width = 2.0;
    bool dashed = false;
  };
  struct Points {
    std::vector<double> x, y;
    std::string fill;
    double radius = 3.0;
  };
  struct HLine {
    double y = 0.0;
    std::string stroke;
    std::string label;
  };
  struct Label {
    double x = 0.0, y = 0.0;  // data coordinates
    std::string text;
    std::string fill;
  };

  std::vector<Band> bands;
  std::vector<Line> lines;
  std::vector<Points> points;
  std::vector<HLine> hlines;
  std::vector<Label> labels;

  std::string render() const;
};

std::string rho_plot_svg(const std::vector<double>& cardinality, const std::vector<double>& mean,
                         const std::vector<double>& lo, const std::vector<double>& hi,
                         double benchmark);

std::string psi_plot_svg(const std::vector<double>& cardinality, const std::vector<double>& mean,
                         const std::vector<double>& lo, const std::vector<double>& hi);

// Coefficient magnitudes against the mean excess error of each retained model
// size; one polyline per variable.
std::string coef_plot_svg(const std::vector<double>& psi_x,
                          const std::vector<std::vector<double>>& coef_abs,
                          const std::vector<std::string>& names);

}  // namespace dss

#include "dss/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "dss/errors.hpp"

namespace dss {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

// tick spacing from the 1/2/5 progression giving roughly the target count
double nice_step(double span, int target) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * mult >= raw) return mag * mult;
  }
  return mag * 10.0;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    }
    if (lo == hi) {
      const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
      lo -= pad;
      hi += pad;
    }
  }
};

const char* kPalette[] = {"#1f6f8b", "#c1553d", "#5a8a3c", "#8557a3", "#b08421",
                          "#3f7f7f", "#a34d78", "#6b6b6b", "#2f5597", "#99582a"};

}  // namespace

std::string SvgFigure::render() const {
  const double ml = 58.0, mr = 16.0, mt = title.empty() ? 16.0 : 32.0, mb = 46.0;
  const double pw = width - ml - mr;
  const double ph = height - mt - mb;
  if (pw <= 0.0 || ph <= 0.0) throw ArgumentError("figure too small");

  Range rx, ry;
  for (const auto& b : bands)
    for (std::size_t i = 0; i < b.x.size(); ++i) {
      rx.add(b.x[i]);
      ry.add(b.lo[i]);
      ry.add(b.hi[i]);
    }
  for (const auto& l : lines)
    for (std::size_t i = 0; i < l.x.size(); ++i) {
      rx.add(l.x[i]);
      ry.add(l.y[i]);
    }
  for (const auto& pt : points)
    for (std::size_t i = 0; i < pt.x.size(); ++i) {
      rx.add(pt.x[i]);
      ry.add(pt.y[i]);
    }
  for (const auto& h : hlines) ry.add(h.y);
  rx.finish();
  ry.finish();
  const double padx = (rx.hi - rx.lo) * 0.04;
  const double pady = (ry.hi - ry.lo) * 0.06;
  const double x0 = rx.lo - padx, x1 = rx.hi + padx;
  const double y0 = ry.lo - pady, y1 = ry.hi + pady;

  auto sx = [&](double v) { return ml + (v - x0) / (x1 - x0) * pw; };
  auto sy = [&](double v) { return mt + (1.0 - (v - y0) / (y1 - y0)) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  svg += "<rect width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"#ffffff\"/>\n";

  const char* font = "font-family=\"Helvetica,Arial,sans-serif\"";

  // axes box and ticks
  const double xstep = nice_step(x1 - x0, 6);
  const double ystep = nice_step(y1 - y0, 6);
  svg += "<g stroke=\"#cccccc\" stroke-width=\"1\">\n";
  for (double t = std::ceil(x0 / xstep) * xstep; t <= x1 + 1e-9 * xstep; t += xstep)
    svg += "<line x1=\"" + num(sx(t)) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(sx(t)) +
           "\" y2=\"" + num(mt + ph) + "\"/>\n";
  for (double t = std::ceil(y0 / ystep) * ystep; t <= y1 + 1e-9 * ystep; t += ystep)
    svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(sy(t)) + "\" x2=\"" + num(ml + pw) +
           "\" y2=\"" + num(sy(t)) + "\"/>\n";
  svg += "</g>\n";
  svg += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(pw) +
         "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  svg += "<g " + std::string(font) + " font-size=\"12\" fill=\"#333333\">\n";
  for (double t = std::ceil(x0 / xstep) * xstep; t <= x1 + 1e-9 * xstep; t += xstep)
    svg += "<text x=\"" + num(sx(t)) + "\" y=\"" + num(mt + ph + 16.0) +
           "\" text-anchor=\"middle\">" + tick_label(t) + "</text>\n";
  for (double t = std::ceil(y0 / ystep) * ystep; t <= y1 + 1e-9 * ystep; t += ystep)
    svg += "<text x=\"" + num(ml - 6.0) + "\" y=\"" + num(sy(t) + 4.0) +
           "\" text-anchor=\"end\">" + tick_label(t) + "</text>\n";
  svg += "</g>\n";

  for (const auto& b : bands) {
    if (b.x.empty()) continue;
    std::string d = "M";
    for (std::size_t i = 0; i < b.x.size(); ++i)
      d += (i == 0 ? " " : " L ") + num(sx(b.x[i])) + " " + num(sy(b.hi[i]));
    for (std::size_t i = b.x.size(); i-- > 0;)
      d += " L " + num(sx(b.x[i])) + " " + num(sy(b.lo[i]));
    d += " Z";
    svg += "<path d=\"" + d + "\" fill=\"" + b.fill + "\" fill-opacity=\"0.30\" stroke=\"none\"/>\n";
  }
  for (const auto& h : hlines) {
    svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(sy(h.y)) + "\" x2=\"" + num(ml + pw) +
           "\" y2=\"" + num(sy(h.y)) + "\" stroke=\"" + h.stroke +
           "\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
    if (!h.label.empty())
      svg += "<text x=\"" + num(ml + pw - 4.0) + "\" y=\"" + num(sy(h.y) - 5.0) +
             "\" text-anchor=\"end\" " + font + " font-size=\"12\" fill=\"" + h.stroke + "\">" +
             escape(h.label) + "</text>\n";
  }
  for (const auto& l : lines) {
    if (l.x.empty()) continue;
    std::string pts;
    for (std::size_t i = 0; i < l.x.size(); ++i)
      pts += (i ? " " : "") + num(sx(l.x[i])) + "," + num(sy(l.y[i]));
    svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + l.stroke +
           "\" stroke-width=\"" + num(l.stroke_width) + "\"" +
           (l.dashed ? " stroke-dasharray=\"5 3\"" : "") + "/>\n";
  }
  for (const auto& pt : points) {
    for (std::size_t i = 0; i < pt.x.size(); ++i)
      svg += "<circle cx=\"" + num(sx(pt.x[i])) + "\" cy=\"" + num(sy(pt.y[i])) + "\" r=\"" +
             num(pt.radius) + "\" fill=\"" + pt.fill + "\"/>\n";
  }
  for (const auto& lb : labels) {
    svg += "<text x=\"" + num(sx(lb.x) + 4.0) + "\" y=\"" + num(sy(lb.y) - 3.0) + "\" " + font +
           " font-size=\"11\" fill=\"" + lb.fill + "\">" + escape(lb.text) + "</text>\n";
  }

  if (!title.empty())
    svg += "<text x=\"" + num(ml + pw / 2.0) + "\" y=\"20.00\" text-anchor=\"middle\" " + font +
           " font-size=\"15\" fill=\"#111111\">" + escape(title) + "</text>\n";
  if (!xlabel.empty())
    svg += "<text x=\"" + num(ml + pw / 2.0) + "\" y=\"" + num(height - 10.0) +
           "\" text-anchor=\"middle\" " + font + " font-size=\"13\" fill=\"#111111\">" +
           escape(xlabel) + "</text>\n";
  if (!ylabel.empty())
    svg += "<text x=\"16.00\" y=\"" + num(mt + ph / 2.0) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 16.00 " + num(mt + ph / 2.0) +
           ")\" " + font + " font-size=\"13\" fill=\"#111111\">" + escape(ylabel) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

namespace {

void check_series(const std::vector<double>& x, const std::vector<double>& a,
                  const std::vector<double>& b) {
  if (x.empty() || x.size() != a.size() || x.size() != b.size())
    throw ArgumentError("plot series must be nonempty and equal length");
}

}  // namespace

std::string rho_plot_svg(const std::vector<double>& cardinality, const std::vector<double>& mean,
                         const std::vector<double>& lo, const std::vector<double>& hi,
                         double benchmark) {
  check_series(cardinality, lo, hi);
  if (mean.size() != cardinality.size())
    throw ArgumentError("plot series must be nonempty and equal length");
  SvgFigure fig;
  fig.title = "Variation explained by model size";
  fig.xlabel = "model size";
  fig.ylabel = "variation explained";
  fig.bands.push_back({cardinality, lo, hi, "#1f6f8b"});
  fig.lines.push_back({cardinality, mean, "#1f6f8b", 2.0, false});
  fig.points.push_back({cardinality, mean, "#1f6f8b", 3.0});
  fig.hlines.push_back({benchmark, "#c1553d", "full-model benchmark"});
  return fig.render();
}

std::string psi_plot_svg(const std::vector<double>& cardinality, const std::vector<double>& mean,
                         const std::vector<double>& lo, const std::vector<double>& hi) {
  check_series(cardinality, lo, hi);
  if (mean.size() != cardinality.size())
    throw ArgumentError("plot series must be nonempty and equal length");
  SvgFigure fig;
  fig.title = "Excess error by model size";
  fig.xlabel = "model size";
  fig.ylabel = "excess error";
  fig.bands.push_back({cardinality, lo, hi, "#5a8a3c"});
  fig.lines.push_back({cardinality, mean, "#5a8a3c", 2.0, false});
  fig.points.push_back({cardinality, mean, "#5a8a3c", 3.0});
  return fig.render();
}

std::string coef_plot_svg(const std::vector<double>& psi_x,
                          const std::vector<std::vector<double>>& coef_abs,
                          const std::vector<std::string>& names) {
  if (psi_x.empty() || coef_abs.empty()) throw ArgumentError("empty coefficient plot data");
  if (names.size() != coef_abs.size())
    throw ArgumentError("one name per coefficient series required");
  for (const auto& series : coef_abs)
    if (series.size() != psi_x.size())
      throw ArgumentError("coefficient series length must match the psi axis");
  SvgFigure fig;
  fig.title = "Coefficient magnitudes along the path";
  fig.xlabel = "excess error of the sparsified model";
  fig.ylabel = "|coefficient|";
  const std::size_t ncol = sizeof(kPalette) / sizeof(kPalette[0]);
  for (std::size_t j = 0; j < coef_abs.size(); ++j) {
    const char* color = kPalette[j % ncol];
    fig.lines.push_back({psi_x, coef_abs[j], color, 1.6, false});
    // name each series where it is largest, skipping all-zero series
    std::size_t best = 0;
    for (std::size_t i = 1; i < psi_x.size(); ++i)
      if (coef_abs[j][i] > coef_abs[j][best]) best = i;
    if (coef_abs[j][best] > 0.0)
      fig.labels.push_back({psi_x[best], coef_abs[j][best], names[j], color});
  }
  return fig.render();
}

}  // namespace dss

#include "expanderlab_cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace expanderlab::cli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kMargin = 50.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string polyline(const std::vector<double>& xs, const std::vector<double>& ys, double x0, double x1, double y0,
                     double y1, const char* color) {
  std::string pts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double px = kMargin + (xs[i] - x0) / (x1 - x0) * (kWidth - 2 * kMargin);
    const double py = kHeight - kMargin - (std::clamp(ys[i], y0, y1) - y0) / (y1 - y0) * (kHeight - 2 * kMargin);
    if (!pts.empty()) pts += ' ';
    pts += fmt(px) + "," + fmt(py);
  }
  return "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts +
         "\"/>\n";
}

}  // namespace

std::string spectrum_plot_svg(const WeightedOperator1D& op, const SpectrumResult& result, const std::string& title) {
  const auto& xs = op.grid;
  const double x0 = xs.front();
  const double x1 = xs.back();

  const auto& v = op.effective_potential;
  double vmin = *std::min_element(v.begin(), v.end());
  double vmax = *std::max_element(v.begin(), v.end());
  if (vmax - vmin < 1e-12) vmax = vmin + 1.0;

  // The eigenfunction is drawn on its own scale, sharing the x axis.
  std::vector<double> psi = result.eigenvectors.empty() ? std::vector<double>(xs.size(), 0.0) : result.eigenvectors[0];
  double pmax = 0.0;
  for (double p : psi) pmax = std::max(pmax, std::abs(p));
  if (pmax == 0.0) pmax = 1.0;
  for (double& p : psi) p = vmin + (vmax - vmin) * (0.5 + 0.45 * p / pmax);

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt(kMargin) + "\" y=\"30\" font-family=\"sans-serif\" font-size=\"14\">" + title + "</text>\n";
  out += "<line x1=\"" + fmt(kMargin) + "\" y1=\"" + fmt(kHeight - kMargin) + "\" x2=\"" + fmt(kWidth - kMargin) +
         "\" y2=\"" + fmt(kHeight - kMargin) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + fmt(kMargin) + "\" y1=\"" + fmt(kMargin) + "\" x2=\"" + fmt(kMargin) + "\" y2=\"" +
         fmt(kHeight - kMargin) + "\" stroke=\"black\"/>\n";
  out += polyline(xs, v, x0, x1, vmin, vmax, "#1f77b4");
  out += polyline(xs, psi, x0, x1, vmin, vmax, "#d62728");
  const double ly = kHeight - 15;
  out += "<text x=\"" + fmt(kMargin) + "\" y=\"" + fmt(ly) +
         "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#1f77b4\">V(s), range [" + fmt(vmin) + ", " +
         fmt(vmax) + "]</text>\n";
  out += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"" + fmt(ly) +
         "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#d62728\">first eigenfunction (rescaled)</text>\n";
  out += "<text x=\"" + fmt(kMargin) + "\" y=\"" + fmt(kHeight - kMargin + 15) +
         "\" font-family=\"sans-serif\" font-size=\"11\">s = " + fmt(x0) + "</text>\n";
  out += "<text x=\"" + fmt(kWidth - kMargin - 60) + "\" y=\"" + fmt(kHeight - kMargin + 15) +
         "\" font-family=\"sans-serif\" font-size=\"11\">s = " + fmt(x1) + "</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace expanderlab::cli

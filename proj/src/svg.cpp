#include "wassmap/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wassmap/io.hpp"

namespace wassmap {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string scatter_svg(const Matrix& points, const std::vector<int>& labels,
                        const Matrix& truth, const std::string& title) {
  if (points.cols() < 2) throw Error("scatter needs at least two coordinates");
  const int n = static_cast<int>(points.rows());

  double lo_x = points.col(0).minCoeff(), hi_x = points.col(0).maxCoeff();
  double lo_y = points.col(1).minCoeff(), hi_y = points.col(1).maxCoeff();
  if (truth.rows() > 0) {
    lo_x = std::min(lo_x, truth.col(0).minCoeff());
    hi_x = std::max(hi_x, truth.col(0).maxCoeff());
    lo_y = std::min(lo_y, truth.col(1).minCoeff());
    hi_y = std::max(hi_y, truth.col(1).maxCoeff());
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
  const double pad = 0.05 * span;
  const double scale = 560.0 / (span + 2 * pad);
  const auto px = [&](double x) { return 20.0 + (x - lo_x + pad) * scale; };
  const auto py = [&](double y) { return 580.0 - (y - lo_y + pad) * scale; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" "
         "viewBox=\"0 0 600 600\">\n";
  svg += "<rect width=\"600\" height=\"600\" fill=\"white\"/>\n";
  if (!title.empty())
    svg += "<text x=\"300\" y=\"16\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\">" + title + "</text>\n";

  // axes through the data origin when visible
  svg += "<line x1=\"20\" y1=\"580\" x2=\"580\" y2=\"580\" stroke=\"#999\"/>\n";
  svg += "<line x1=\"20\" y1=\"20\" x2=\"20\" y2=\"580\" stroke=\"#999\"/>\n";

  if (truth.rows() > 0) {
    for (int i = 0; i < truth.rows(); ++i) {
      const double cx = px(truth(i, 0)), cy = py(truth(i, 1));
      svg += "<path d=\"M " + num(cx - 4) + " " + num(cy) + " H " + num(cx + 4) +
             " M " + num(cx) + " " + num(cy - 4) + " V " + num(cy + 4) +
             "\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    }
  }
  for (int i = 0; i < n; ++i) {
    const char* color = kPalette[0];
    if (!labels.empty()) color = kPalette[std::abs(labels[i]) % 10];
    svg += "<circle cx=\"" + num(px(points(i, 0))) + "\" cy=\"" + num(py(points(i, 1))) +
           "\" r=\"3.5\" fill=\"" + color + "\" fill-opacity=\"0.8\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void save_scatter_svg(const std::string& path, const Matrix& points,
                      const std::vector<int>& labels, const Matrix& truth,
                      const std::string& title) {
  write_text_file(path, scatter_svg(points, labels, truth, title));
}

}  // namespace wassmap

#pragma once

// Synthetic 28x28 digit-like glyphs for MNIST-scale pipeline runs when
// the real IDX files are not on disk: class 0 is an elliptic annulus,
// class 1 a thick bar, classes 2-9 polygon outlines with 3-11 sides.
// Per-sample jitter in center, size, rotation and stroke width gives
// each class a smooth appearance manifold.

#include <algorithm>
#include <cmath>
#include <random>

#include "wassmap/ingest.hpp"

namespace testsupport {

namespace digits_detail {

inline double segment_distance(double px, double py, double ax, double ay, double bx,
                               double by) {
  const double vx = bx - ax, vy = by - ay;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((px - ax) * vx + (py - ay) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = px - (ax + t * vx), dy = py - (ay + t * vy);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace digits_detail

inline wassmap::GridImage render_digit(int label, std::mt19937& rng) {
  using digits_detail::segment_distance;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const double cx = 13.5 + 3.0 * (unit(rng) - 0.5);
  const double cy = 13.5 + 3.0 * (unit(rng) - 0.5);
  const double rot = 2.0 * M_PI * unit(rng);
  const double stroke = 1.4 + 1.0 * unit(rng);

  wassmap::GridImage img;
  img.shape = {28, 28};
  img.origin = wassmap::Vector::Zero(2);
  img.spacing = wassmap::Vector::Ones(2);
  img.values = wassmap::Vector::Zero(784);

  const auto paint_by_distance = [&](auto&& boundary_distance) {
    for (int r = 0; r < 28; ++r)
      for (int c = 0; c < 28; ++c) {
        const double x = r + 0.5, y = c + 0.5;
        const double d = boundary_distance(x, y);
        double v = 0.0;
        if (d <= stroke) v = 220.0;
        else if (d <= stroke + 1.0) v = 220.0 * (stroke + 1.0 - d);  // soft edge
        img.values(r * 28 + c) = std::floor(v);
      }
  };

  if (label == 0) {
    const double rx = 6.5 + 2.0 * unit(rng), ry = 8.0 + 2.0 * unit(rng);
    const double tilt = 0.6 * (unit(rng) - 0.5);
    paint_by_distance([&](double x, double y) {
      const double dx0 = x - cx, dy0 = y - cy;
      const double dx = std::cos(tilt) * dx0 + std::sin(tilt) * dy0;
      const double dy = -std::sin(tilt) * dx0 + std::cos(tilt) * dy0;
      // distance to the ellipse ring, approximated radially
      const double rho = std::sqrt((dx / rx) * (dx / rx) + (dy / ry) * (dy / ry));
      return std::abs(rho - 1.0) * std::min(rx, ry);
    });
  } else if (label == 1) {
    const double slant = 3.0 * (unit(rng) - 0.5);
    const double top = 4.0 + 2.0 * unit(rng), bottom = 23.0 - 2.0 * unit(rng);
    paint_by_distance([&](double x, double y) {
      return segment_distance(x, y, top, cy + slant, bottom, cy - slant);
    });
  } else {
    const int sides = label + 1;  // classes 2..9 -> 3..10 sides
    const double radius = 7.0 + 3.0 * unit(rng);
    std::vector<double> vx(sides), vy(sides);
    for (int k = 0; k < sides; ++k) {
      const double a = rot + 2.0 * M_PI * k / sides;
      vx[k] = cx + radius * std::cos(a);
      vy[k] = cy + 0.85 * radius * std::sin(a);
    }
    paint_by_distance([&](double x, double y) {
      double best = 1e9;
      for (int k = 0; k < sides; ++k)
        best = std::min(best, segment_distance(x, y, vx[k], vy[k], vx[(k + 1) % sides],
                                               vy[(k + 1) % sides]));
      return best;
    });
  }
  return img;
}

inline wassmap::LabeledImageSet make_synthetic_digits(const std::vector<int>& classes,
                                                      int per_class,
                                                      std::uint64_t seed) {
  std::mt19937 rng(static_cast<unsigned>(seed * 2654435761u + 17));
  wassmap::LabeledImageSet set;
  for (const int label : classes)
    for (int k = 0; k < per_class; ++k) {
      set.images.push_back(render_digit(label, rng));
      set.labels.push_back(label);
    }
  return set;
}

}  // namespace testsupport

#include "wassmap/synth.hpp"

#include <cmath>
#include <functional>

namespace wassmap {

namespace {

double elliptic_norm2(const Vector& x, const Vector& center, const Vector& radii) {
  double s = 0.0;
  for (int a = 0; a < x.size(); ++a) {
    const double t = (x(a) - center(a)) / radii(a);
    s += t * t;
  }
  return s;
}

// Rasterizes the indicator of `inside` over the frame and converts to
// a measure. Throws EmptyShape when nothing survives.
DiscreteMeasure rasterize(const std::function<bool(const Vector&)>& inside,
                          const std::vector<int>& resolution, const Frame& frame) {
  const int m = static_cast<int>(resolution.size());
  GridImage img;
  img.shape = resolution;
  img.origin = frame.lo;
  img.spacing.resize(m);
  for (int a = 0; a < m; ++a) {
    if (resolution[a] <= 0) throw Error("resolution entries must be positive");
    img.spacing(a) = (frame.hi(a) - frame.lo(a)) / resolution[a];
    if (!(img.spacing(a) > 0.0)) throw Error("frame must have positive extent");
  }
  img.values = Vector::Zero(img.pixel_count());

  std::vector<int> index(m, 0);
  Vector point(m);
  int positive = 0;
  for (std::int64_t n = 0; n < img.pixel_count(); ++n) {
    for (int a = 0; a < m; ++a)
      point(a) = img.origin(a) + (index[a] + 0.5) * img.spacing(a);
    if (inside(point)) {
      img.values(n) = 1.0;
      ++positive;
    }
    for (int a = m - 1; a >= 0; --a) {
      if (++index[a] < img.shape[a]) break;
      index[a] = 0;
    }
  }
  if (positive == 0) throw EmptyShape("no raster cell center falls inside the shape");
  return image_to_measure(img);
}

Matrix rotation2(double angle) {
  Matrix r(2, 2);
  const double c = std::cos(angle), s = std::sin(angle);
  r << c, -s, s, c;
  return r;
}

}  // namespace

int ShapeSpec::dim() const {
  switch (kind) {
    case Kind::rectangle:
      return static_cast<int>(lo.size());
    default:
      return static_cast<int>(center.size());
  }
}

void ShapeSpec::validate() const {
  switch (kind) {
    case Kind::disk:
      if (radii.size() != 1 || !(radii(0) > 0.0))
        throw Error("disk needs a single positive radius");
      if (center.size() < 1) throw Error("disk needs a center");
      break;
    case Kind::ellipse:
      if (radii.size() != center.size()) throw Error("ellipse radii/center mismatch");
      for (int a = 0; a < radii.size(); ++a)
        if (!(radii(a) > 0.0)) throw Error("ellipse radii must be positive");
      break;
    case Kind::rectangle:
      if (lo.size() != hi.size() || lo.size() < 1)
        throw Error("rectangle needs matching lo/hi corners");
      for (int a = 0; a < lo.size(); ++a)
        if (!(lo(a) < hi(a))) throw Error("rectangle endpoints must be ordered");
      break;
    case Kind::annulus:
      if (radii.size() != center.size() || inner_radii.size() != center.size())
        throw Error("annulus radii/center mismatch");
      for (int a = 0; a < radii.size(); ++a) {
        if (!(inner_radii(a) > 0.0)) throw Error("annulus inner radii must be positive");
        if (!(inner_radii(a) < radii(a)))
          throw Error("annulus inner radii must lie strictly inside the outer");
      }
      break;
  }
}

bool ShapeSpec::contains(const Vector& point) const {
  switch (kind) {
    case Kind::disk:
      return (point - center).squaredNorm() <= radii(0) * radii(0);
    case Kind::ellipse:
      return elliptic_norm2(point, center, radii) <= 1.0;
    case Kind::rectangle:
      for (int a = 0; a < lo.size(); ++a)
        if (point(a) < lo(a) || point(a) > hi(a)) return false;
      return true;
    case Kind::annulus:
      return elliptic_norm2(point, center, radii) <= 1.0 &&
             elliptic_norm2(point, center, inner_radii) >= 1.0;
  }
  return false;
}

void ManifoldSpec::validate() const {
  base.validate();
  if (parameters.empty()) throw Error("parameter list must be nonempty");
  if (family == Family::dilation) {
    for (std::size_t p = 0; p < parameters.size(); ++p)
      for (int a = 0; a < parameters[p].size(); ++a)
        if (!(parameters[p](a) > 0.0))
          throw NonPositiveDilation("dilation parameter " + std::to_string(p) +
                                    " has a nonpositive entry");
  }
  if (family == Family::rotation) {
    for (std::size_t p = 0; p < parameters.size(); ++p) {
      if (parameters[p].size() != 1) throw Error("rotation parameters are single angles");
      const double a = parameters[p](0);
      if (a < 0.0 || a >= 2.0 * M_PI)
        throw Error("rotation angle " + std::to_string(p) + " outside [0, 2pi)");
    }
  }
  if (family == Family::grid_deformation) {
    if (mode != Mode::raster)
      throw Error("grid deformation is raster-only");
    if (base.kind != ShapeSpec::Kind::annulus)
      throw Error("grid deformation expects an annulus base");
  }
}

DiscreteMeasure base_measure(const ShapeSpec& shape, const std::vector<int>& resolution,
                             const Frame& frame) {
  shape.validate();
  return rasterize([&](const Vector& p) { return shape.contains(p); }, resolution, frame);
}

std::vector<DiscreteMeasure> translation_family(const DiscreteMeasure& base,
                                                const std::vector<Vector>& thetas) {
  std::vector<DiscreteMeasure> out;
  out.reserve(thetas.size());
  for (const Vector& theta : thetas)
    out.push_back(pushforward(base, AffineMap::translation(theta)));
  return out;
}

std::vector<DiscreteMeasure> dilation_family(const DiscreteMeasure& base,
                                             const std::vector<Vector>& thetas) {
  std::vector<DiscreteMeasure> out;
  out.reserve(thetas.size());
  for (std::size_t p = 0; p < thetas.size(); ++p) {
    for (int a = 0; a < thetas[p].size(); ++a)
      if (!(thetas[p](a) > 0.0))
        throw NonPositiveDilation("dilation parameter " + std::to_string(p) +
                                  " has a nonpositive entry");
    out.push_back(pushforward(base, AffineMap::scaling(thetas[p])));
  }
  return out;
}

std::vector<DiscreteMeasure> rotation_family(const DiscreteMeasure& base,
                                             const std::vector<double>& angles) {
  std::vector<DiscreteMeasure> out;
  out.reserve(angles.size());
  for (const double a : angles) out.push_back(pushforward(base, AffineMap::rotation(a)));
  return out;
}

std::vector<DiscreteMeasure> grid_deformation_family(const ShapeSpec& base_shape,
                                                     const std::vector<Vector>& params,
                                                     const std::vector<int>& resolution,
                                                     const Frame& frame) {
  base_shape.validate();
  std::vector<DiscreteMeasure> out;
  out.reserve(params.size());
  for (std::size_t p = 0; p < params.size(); ++p) {
    const double t1 = params[p](0), t2 = params[p](1);
    auto inside = [&](const Vector& x) {
      const double alpha = t1 * std::cos(x(0) + t2 * x(1)) * std::cos(x(1));
      Vector warped(2);
      const double c = std::cos(alpha), s = std::sin(alpha);
      warped << c * x(0) - s * x(1), s * x(0) + c * x(1);
      return base_shape.contains(warped);
    };
    try {
      out.push_back(rasterize(inside, resolution, frame));
    } catch (const EmptyShape&) {
      throw EmptyShape("deformation parameter " + std::to_string(p) +
                       " moved all mass outside the frame");
    }
  }
  return out;
}

FamilyResult generate_family(const ManifoldSpec& spec) {
  spec.validate();
  FamilyResult out;
  const int count = static_cast<int>(spec.parameters.size());

  if (spec.family == ManifoldSpec::Family::grid_deformation) {
    out.measures =
        grid_deformation_family(spec.base, spec.parameters, spec.resolution, spec.frame);
    out.truth = Matrix(count, 2);
    for (int p = 0; p < count; ++p) out.truth.row(p) = spec.parameters[p].transpose();
    return out;
  }

  if (spec.mode == ManifoldSpec::Mode::pushforward) {
    const DiscreteMeasure base = base_measure(spec.base, spec.resolution, spec.frame);
    switch (spec.family) {
      case ManifoldSpec::Family::translation:
        out.measures = translation_family(base, spec.parameters);
        break;
      case ManifoldSpec::Family::dilation:
        out.measures = dilation_family(base, spec.parameters);
        break;
      case ManifoldSpec::Family::rotation: {
        std::vector<double> angles;
        for (const Vector& p : spec.parameters) angles.push_back(p(0));
        out.measures = rotation_family(base, angles);
        break;
      }
      default:
        break;
    }
  } else {
    // raster mode: rasterize each transformed shape on the shared frame
    for (int p = 0; p < count; ++p) {
      const Vector& theta = spec.parameters[p];
      std::function<bool(const Vector&)> inside;
      switch (spec.family) {
        case ManifoldSpec::Family::translation:
          inside = [&](const Vector& x) {
            return spec.base.contains(x - theta);
          };
          break;
        case ManifoldSpec::Family::dilation:
          inside = [&](const Vector& x) {
            Vector back = x;
            for (int a = 0; a < back.size(); ++a) back(a) /= theta(a);
            return spec.base.contains(back);
          };
          break;
        case ManifoldSpec::Family::rotation: {
          inside = [&](const Vector& x) {
            return spec.base.contains(rotation2(-theta(0)) * x);
          };
          break;
        }
        default:
          break;
      }
      out.measures.push_back(rasterize(inside, spec.resolution, spec.frame));
    }
  }

  if (spec.family == ManifoldSpec::Family::rotation) {
    out.truth = Matrix(count, 2);
    for (int p = 0; p < count; ++p)
      out.truth.row(p) << std::cos(spec.parameters[p](0)), std::sin(spec.parameters[p](0));
  } else {
    const int m = static_cast<int>(spec.parameters[0].size());
    out.truth = Matrix(count, m);
    for (int p = 0; p < count; ++p) out.truth.row(p) = spec.parameters[p].transpose();
  }
  return out;
}

Matrix family_pixel_matrix(std::span<const DiscreteMeasure> measures, const Frame& frame,
                           const std::vector<int>& resolution) {
  const int m = static_cast<int>(resolution.size());
  std::int64_t pixels = 1;
  for (int r : resolution) {
    if (r <= 0) throw Error("resolution entries must be positive");
    pixels *= r;
  }
  Matrix out = Matrix::Zero(measures.size(), pixels);
  for (std::size_t k = 0; k < measures.size(); ++k) {
    const DiscreteMeasure& mu = measures[k];
    if (mu.dim() != m) throw DimensionMismatch("measure dimension mismatches raster");
    for (int i = 0; i < mu.size(); ++i) {
      std::int64_t flat = 0;
      bool inside = true;
      for (int a = 0; a < m && inside; ++a) {
        const double t = (mu.locations()(i, a) - frame.lo(a)) /
                         (frame.hi(a) - frame.lo(a)) * resolution[a];
        const int cell = static_cast<int>(std::floor(t));
        if (cell < 0 || cell >= resolution[a])
          inside = false;
        else
          flat = flat * resolution[a] + cell;
      }
      if (inside) out(k, flat) += mu.weight(i);
    }
  }
  return out;
}

std::vector<Vector> parameter_grid(const Vector& lo, const Vector& hi,
                                   const std::vector<int>& counts) {
  const int m = static_cast<int>(counts.size());
  if (lo.size() != m || hi.size() != m) throw Error("grid bounds/counts mismatch");
  std::int64_t total = 1;
  for (int c : counts) {
    if (c < 1) throw Error("grid counts must be >= 1");
    total *= c;
  }
  std::vector<Vector> out;
  out.reserve(total);
  std::vector<int> index(m, 0);
  for (std::int64_t n = 0; n < total; ++n) {
    Vector p(m);
    for (int a = 0; a < m; ++a)
      p(a) = counts[a] == 1 ? lo(a)
                            : lo(a) + (hi(a) - lo(a)) * index[a] / (counts[a] - 1);
    out.push_back(p);
    for (int a = m - 1; a >= 0; --a) {
      if (++index[a] < counts[a]) break;
      index[a] = 0;
    }
  }
  return out;
}

}  // namespace wassmap

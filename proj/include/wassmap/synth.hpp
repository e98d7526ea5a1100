#pragma once

#include <span>
#include <vector>

#include "wassmap/measure.hpp"

namespace wassmap {

/// Planar shapes used as manifold generators. All membership tests
/// are closed (boundary counts as inside).
struct ShapeSpec {
  enum class Kind { disk, ellipse, rectangle, annulus };
  Kind kind = Kind::disk;
  Vector center;       // disk/ellipse/annulus center
  Vector radii;        // disk: (r); ellipse/annulus outer: (rx, ry)
  Vector inner_radii;  // annulus inner elliptic radii
  Vector lo, hi;       // rectangle corners, lo < hi per axis

  int dim() const;
  void validate() const;
  bool contains(const Vector& point) const;
};

/// Axis-aligned bounding box a raster covers.
struct Frame {
  Vector lo, hi;
};

/// Declarative description of a manifold sample: base shape, family,
/// parameter list, representation mode and raster geometry.
struct ManifoldSpec {
  enum class Family { translation, dilation, rotation, grid_deformation };
  enum class Mode { pushforward, raster };

  ShapeSpec base;
  Family family = Family::translation;
  Mode mode = Mode::pushforward;
  std::vector<Vector> parameters;  // R^m per element (rotation: length-1 angle)
  std::vector<int> resolution;     // per-axis pixel counts
  Frame frame;

  void validate() const;
};

/// Uniform measure on raster-cell centers inside the shape.
/// Throws EmptyShape when no cell center is inside.
DiscreteMeasure base_measure(const ShapeSpec& shape, const std::vector<int>& resolution,
                             const Frame& frame);

/// Exact pushforward families (weights ride along with the atoms).
std::vector<DiscreteMeasure> translation_family(const DiscreteMeasure& base,
                                                const std::vector<Vector>& thetas);
// atoms map through diag(theta): x -> (theta_1 x_1, ..., theta_m x_m)
std::vector<DiscreteMeasure> dilation_family(const DiscreteMeasure& base,
                                             const std::vector<Vector>& thetas);
std::vector<DiscreteMeasure> rotation_family(const DiscreteMeasure& base,
                                             const std::vector<double>& angles);

/// Backward-warped raster family f_theta(x) = f_0(T_theta(x)) where
/// T_theta rotates x by the position-dependent angle
/// alpha(x) = theta1 * cos(x1 + theta2 * x2) * cos(x2).
std::vector<DiscreteMeasure> grid_deformation_family(const ShapeSpec& base_shape,
                                                     const std::vector<Vector>& params,
                                                     const std::vector<int>& resolution,
                                                     const Frame& frame);

struct FamilyResult {
  std::vector<DiscreteMeasure> measures;
  Matrix truth;  // one parameter row per measure (rotation: (cos, sin))
};

/// Generates the family a ManifoldSpec describes, dispatching on
/// family and mode. Raster mode rasterizes each transformed shape on
/// the spec's fixed frame.
FamilyResult generate_family(const ManifoldSpec& spec);

/// Uniform inclusive grid over [lo, hi] per axis, row-major order.
std::vector<Vector> parameter_grid(const Vector& lo, const Vector& hi,
                                   const std::vector<int>& counts);

/// Bins each measure's mass onto the shared raster and returns one
/// flattened row per measure; the pixel-vector input of the ISOMAP
/// baseline. Atoms outside the frame are dropped.
Matrix family_pixel_matrix(std::span<const DiscreteMeasure> measures, const Frame& frame,
                           const std::vector<int>& resolution);

}  // namespace wassmap

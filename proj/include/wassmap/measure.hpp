#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "wassmap/errors.hpp"

namespace wassmap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Discrete probability measure: atoms in R^m with strictly positive
/// weights summing to 1. Immutable after construction; construction
/// prunes zero-weight atoms and renormalizes the weights.
class DiscreteMeasure {
 public:
  // locations: one atom per row, weights: matching nonnegative masses.
  DiscreteMeasure(Matrix locations, Vector weights);

  int size() const { return static_cast<int>(locations_.rows()); }
  int dim() const { return static_cast<int>(locations_.cols()); }
  const Matrix& locations() const { return locations_; }
  const Vector& weights() const { return weights_; }
  Eigen::RowVectorXd location(int i) const { return locations_.row(i); }
  double weight(int i) const { return weights_(i); }

  Eigen::RowVectorXd mean() const { return weights_.transpose() * locations_; }

 private:
  Matrix locations_;
  Vector weights_;
};

/// Raster image with physical geometry: values in row-major order over
/// `shape`, pixel (i0,...,ik) centered at origin + (i + 0.5) * spacing.
struct GridImage {
  Vector values;
  std::vector<int> shape;
  Vector origin;
  Vector spacing;

  int dim() const { return static_cast<int>(shape.size()); }
  std::int64_t pixel_count() const;
  void validate() const;
};

/// Affine map x -> matrix * x + offset.
struct AffineMap {
  Matrix matrix;
  Vector offset;

  static AffineMap identity(int dim);
  static AffineMap translation(const Vector& t);
  // diag(factors); factors are the per-axis multipliers applied to atoms.
  static AffineMap scaling(const Vector& factors);
  // counterclockwise rotation about the origin in R^2
  static AffineMap rotation(double angle);

  int dim() const { return static_cast<int>(offset.size()); }
  Vector operator()(const Vector& x) const { return matrix * x + offset; }
};

/// Eq-style image-to-measure map: atoms at pixel centers of nonzero
/// pixels, weights proportional to pixel values. Throws AllZeroImage.
DiscreteMeasure image_to_measure(const GridImage& img);

/// Exact discrete pushforward: atoms move through the map, weights stay.
DiscreteMeasure pushforward(const DiscreteMeasure& mu, const AffineMap& map);

/// Sum_n w_n |x_n|^2
double second_moment(const DiscreteMeasure& mu);

/// Sum_n w_n x_n[axis]^2
double marginal_second_moment(const DiscreteMeasure& mu, int axis);

/// FNV-1a over the measure's raw bytes; used as a cache key.
std::uint64_t measure_digest(const DiscreteMeasure& mu);

}  // namespace wassmap

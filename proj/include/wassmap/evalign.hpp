#pragma once

#include <vector>

#include "wassmap/embedding.hpp"

namespace wassmap {

/// Least-squares rigid (optionally scaled) alignment x -> scale *
/// rotation * x + translation. The orthogonal factor may be a
/// reflection.
struct RigidAlignment {
  Matrix rotation;     // d x d orthogonal
  Vector translation;  // R^d
  double scale = 1.0;
  double rmse = 0.0;

  Matrix apply(const Matrix& x) const;
};

/// Orthogonal Procrustes fit of X onto Y (rows are points), closed
/// form via the SVD of the centered cross-covariance.
RigidAlignment procrustes(const Matrix& x, const Matrix& y, bool with_scale = false);

/// Procrustes rmse normalized by the truth's root-mean-square radius
/// about its centroid; dimensionless.
double recovery_error(const Matrix& points, const Matrix& truth, bool with_scale = false);
double recovery_error(const Embedding& embedding, const Matrix& truth,
                      bool with_scale = false);

/// Leave-one-out k-nearest-neighbor classification accuracy in [0, 1].
double knn_separation(const Matrix& points, const std::vector<int>& labels, int k = 1);

}  // namespace wassmap

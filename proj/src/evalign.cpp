#include "wassmap/evalign.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace wassmap {

Matrix RigidAlignment::apply(const Matrix& x) const {
  Matrix moved = scale * (x * rotation.transpose());
  moved.rowwise() += translation.transpose();
  return moved;
}

RigidAlignment procrustes(const Matrix& x, const Matrix& y, bool with_scale) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw ShapeMismatch("point sets must have identical shapes");
  const int n = static_cast<int>(x.rows());
  if (n < 1) throw ShapeMismatch("point sets must be nonempty");

  const Eigen::RowVectorXd cx = x.colwise().mean();
  const Eigen::RowVectorXd cy = y.colwise().mean();
  const Matrix xc = x.rowwise() - cx;
  const Matrix yc = y.rowwise() - cy;

  const Matrix cross = xc.transpose() * yc;  // d x d
  Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);

  RigidAlignment out;
  // reflections permitted: no determinant correction
  out.rotation = svd.matrixV() * svd.matrixU().transpose();

  const double x_norm2 = xc.squaredNorm();
  if (with_scale) {
    const double trace = svd.singularValues().sum();
    out.scale = x_norm2 > 0.0 ? trace / x_norm2 : 1.0;
  }
  out.translation = (cy - out.scale * (cx * out.rotation.transpose())).transpose();

  const Matrix residual = out.apply(x) - y;
  out.rmse = std::sqrt(residual.squaredNorm() / n);
  return out;
}

double recovery_error(const Matrix& points, const Matrix& truth, bool with_scale) {
  const RigidAlignment fit = procrustes(points, truth, with_scale);
  const Matrix centered = truth.rowwise() - truth.colwise().mean();
  const double rms_radius = std::sqrt(centered.squaredNorm() / truth.rows());
  if (rms_radius <= 0.0) return fit.rmse;
  return fit.rmse / rms_radius;
}

double recovery_error(const Embedding& embedding, const Matrix& truth, bool with_scale) {
  return recovery_error(embedding.points, truth, with_scale);
}

double knn_separation(const Matrix& points, const std::vector<int>& labels, int k) {
  const int n = static_cast<int>(points.rows());
  if (static_cast<int>(labels.size()) != n)
    throw ShapeMismatch("labels must match point count");
  if (k < 1) throw Error("k must be >= 1");
  {
    bool two_classes = false;
    for (int i = 1; i < n; ++i)
      if (labels[i] != labels[0]) two_classes = true;
    if (!two_classes) throw DegenerateLabels("need at least two classes");
  }

  int correct = 0;
  std::vector<std::pair<double, int>> dist(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      dist[j] = {(points.row(i) - points.row(j)).squaredNorm(), j};
    dist[i].first = std::numeric_limits<double>::infinity();  // leave self out
    std::sort(dist.begin(), dist.end());  // distance, then index

    std::map<int, int> votes;
    for (int r = 0; r < std::min(k, n - 1); ++r) ++votes[labels[dist[r].second]];
    int best_label = votes.begin()->first, best_count = votes.begin()->second;
    for (const auto& [lab, cnt] : votes)
      if (cnt > best_count) {
        best_label = lab;
        best_count = cnt;
      }
    if (best_label == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / n;
}

}  // namespace wassmap

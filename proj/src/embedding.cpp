#include "wassmap/embedding.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace wassmap {

Matrix double_center(const SquaredDistanceMatrix& w) {
  const int n = w.size();
  const Matrix h = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / n);
  Matrix b = -0.5 * h * w.entries * h;
  // symmetrize away the last-ulp asymmetry of the triple product
  b = 0.5 * (b + b.transpose()).eval();
  return b;
}

Embedding classical_mds(const SquaredDistanceMatrix& w, int d) {
  const int n = w.size();
  if (d < 1) throw Error("embedding dimension must be >= 1");
  if (d >= n)
    throw DimensionTooLarge("embedding dimension " + std::to_string(d) +
                            " must be < point count " + std::to_string(n));

  const Matrix b = double_center(w);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(b);
  if (solver.info() != Eigen::Success)
    throw Error("eigendecomposition failed");

  // order descending by value, stable in the solver's original index
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int p, int q) {
    return solver.eigenvalues()(p) > solver.eigenvalues()(q);
  });

  Embedding out;
  out.points = Matrix::Zero(n, d);
  out.eigenvalues = Vector::Zero(d);
  out.raw_top = Vector::Zero(d);
  out.discarded_top = (d < n) ? solver.eigenvalues()(order[d]) : 0.0;

  for (int c = 0; c < d; ++c) {
    const double raw = solver.eigenvalues()(order[c]);
    out.raw_top(c) = raw;
    const double lambda = std::max(0.0, raw);
    if (raw < 0.0) ++out.clamped_count;
    out.eigenvalues(c) = lambda;
    Vector vec = solver.eigenvectors().col(order[c]);
    // sign convention: largest-magnitude component positive
    int arg = 0;
    for (int r = 1; r < n; ++r)
      if (std::abs(vec(r)) > std::abs(vec(arg))) arg = r;
    if (vec(arg) < 0.0) vec = -vec;
    out.points.col(c) = std::sqrt(lambda) * vec;
  }
  return out;
}

Embedding wassmap_embedding(std::span<const DiscreteMeasure> measures, int d,
                            int threads) {
  return classical_mds(pairwise_w2_squared(measures, threads), d);
}

}  // namespace wassmap

#pragma once

#include <span>

#include "wassmap/transport.hpp"

namespace wassmap {

/// Low-dimensional embedding from classical MDS: points(i, :) is the
/// i-th embedded point, eigenvalues holds the retained top-d spectrum
/// (descending, clamped at zero) and discarded_top the next raw
/// eigenvalue after truncation.
struct Embedding {
  Matrix points;         // N x d
  Vector eigenvalues;    // d retained values, descending, >= 0
  Vector raw_top;        // same d values before clamping
  double discarded_top = 0.0;
  int clamped_count = 0;
};

/// B = -1/2 H W H with H = I - (1/N) * ones
Matrix double_center(const SquaredDistanceMatrix& w);

/// Classical multidimensional scaling: symmetric eigendecomposition of
/// the double-centered matrix, top d eigenpairs, points = V_d
/// Lambda_d^(1/2). Negative retained eigenvalues are clamped to zero
/// and counted in clamped_count. Eigenvector signs are fixed so the
/// largest-magnitude component is positive.
Embedding classical_mds(const SquaredDistanceMatrix& w, int d);

/// The full pipeline: pairwise W_2^2 matrix, then classical MDS.
Embedding wassmap_embedding(std::span<const DiscreteMeasure> measures, int d,
                            int threads = 0);

}  // namespace wassmap

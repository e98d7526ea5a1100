#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wassmap/measure.hpp"

namespace wassmap {

/// Optimal coupling between two discrete measures, with the dual
/// certificate returned by the solver. Row sums equal the source
/// weights, column sums the target weights; at most rows+cols-1
/// entries are strictly positive.
struct TransportPlan {
  struct Entry {
    int i, j;
    double mass;
  };

  int rows = 0;
  int cols = 0;
  std::vector<Entry> entries;
  double cost = 0.0;          // sum pi_ij |x_i - y_j|^2
  Vector source_potential;    // phi, one per source atom
  Vector target_potential;    // psi, one per target atom

  Vector row_sums() const;
  Vector col_sums() const;
};

/// Symmetric N x N matrix of squared distances with zero diagonal.
struct SquaredDistanceMatrix {
  Matrix entries;

  int size() const { return static_cast<int>(entries.rows()); }

  // Checks symmetry, zero diagonal and nonnegativity; with
  // check_triangle also the triangle inequality on the square roots
  // (O(N^3), 1e-7 absolute slack).
  void validate(bool check_triangle = false) const;
};

/// Exact quadratic-cost transport between mu and nu via the
/// transportation network simplex. The returned plan carries the
/// optimal cost W_2^2(mu, nu) and feasible dual potentials.
TransportPlan solve_w2(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// sqrt(solve_w2(mu, nu).cost)
double w2(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Brute-force oracle for uniform-weight instances with equal atom
/// counts n <= 8: minimum of the transport cost over all n!
/// permutation matchings. Throws UnsupportedInstance otherwise.
double permutation_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Pairwise W_2^2 matrix over a family of measures. Pairs are
/// independent work items distributed over `threads` workers
/// (0 = hardware concurrency); every entry comes from one
/// deterministic single-threaded solve, so the result does not depend
/// on the schedule.
SquaredDistanceMatrix pairwise_w2_squared(std::span<const DiscreteMeasure> measures,
                                          int threads = 0);

/// Cache hook for pairwise_w2_squared_cached: lookup(i, j) returns true
/// and fills cost on a hit; store(i, j, cost) records a computed value.
struct PairwiseCache {
  std::function<bool(int, int, double&)> lookup;
  std::function<void(int, int, double)> store;
};

struct PairwiseStats {
  std::int64_t solved = 0;
  std::int64_t cache_hits = 0;
};

SquaredDistanceMatrix pairwise_w2_squared_cached(std::span<const DiscreteMeasure> measures,
                                                 const PairwiseCache& cache,
                                                 PairwiseStats& stats, int threads = 0);

/// Count of solve_w2 calls in this process; lets callers verify that
/// cached reruns do no solver work.
std::uint64_t solve_call_count();

struct SinkhornResult {
  double value = 0.0;  // entropic W_2 estimate, biased >= exact
  int iterations = 0;
};

/// Entropic approximation of w2 (log-domain scaling iterations).
/// Converges when the worst marginal violation drops below tol;
/// throws MaxIterExceeded otherwise.
SinkhornResult sinkhorn_w2(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           double regularization, double tol = 1e-9,
                           int max_iter = 10000);

}  // namespace wassmap

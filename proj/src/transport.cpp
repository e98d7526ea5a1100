#include "wassmap/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "network_simplex.hpp"

namespace wassmap {

namespace {

std::atomic<std::uint64_t> g_solve_calls{0};

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(p) for p in [0, count) on `threads` workers pulling from a
// shared counter. Results must go to disjoint slots.
template <typename Fn>
void parallel_for(std::int64_t count, int threads, Fn&& fn) {
  threads = std::min<std::int64_t>(resolve_threads(threads), count);
  if (threads <= 1) {
    for (std::int64_t p = 0; p < count; ++p) fn(p);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::int64_t p = next.fetch_add(1);
      if (p >= count) return;
      try {
        fn(p);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

Vector TransportPlan::row_sums() const {
  Vector s = Vector::Zero(rows);
  for (const auto& e : entries) s(e.i) += e.mass;
  return s;
}

Vector TransportPlan::col_sums() const {
  Vector s = Vector::Zero(cols);
  for (const auto& e : entries) s(e.j) += e.mass;
  return s;
}

void SquaredDistanceMatrix::validate(bool check_triangle) const {
  const int n = size();
  if (entries.cols() != n) throw ShapeMismatch("distance matrix must be square");
  for (int i = 0; i < n; ++i) {
    if (entries(i, i) != 0.0)
      throw Error("distance matrix diagonal must be zero at " + std::to_string(i));
    for (int j = i + 1; j < n; ++j) {
      if (entries(i, j) < 0.0) throw Error("negative squared distance");
      if (entries(i, j) != entries(j, i))
        throw Error("distance matrix not symmetric at (" + std::to_string(i) + "," +
                    std::to_string(j) + ")");
    }
  }
  if (check_triangle) {
    const Matrix d = entries.array().sqrt();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (d(i, j) > d(i, k) + d(k, j) + 1e-7)
            throw Error("triangle inequality violated at (" + std::to_string(i) + "," +
                        std::to_string(j) + "," + std::to_string(k) + ")");
  }
}

TransportPlan solve_w2(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim())
    throw DimensionMismatch("measures live in different ambient dimensions (" +
                            std::to_string(mu.dim()) + " vs " + std::to_string(nu.dim()) + ")");
  g_solve_calls.fetch_add(1, std::memory_order_relaxed);

  detail::TransportSimplex simplex(mu.locations(), mu.weights(), nu.locations(),
                                   nu.weights());
  simplex.solve();

  TransportPlan plan;
  plan.rows = mu.size();
  plan.cols = nu.size();
  plan.entries.reserve(simplex.basis_size());
  for (int k = 0; k < simplex.basis_size(); ++k)
    if (!simplex.arc_artificial(k) && simplex.arc_flow(k) > 0.0)
      plan.entries.push_back({simplex.arc_source(k), simplex.arc_target(k),
                              simplex.arc_flow(k)});
  std::sort(plan.entries.begin(), plan.entries.end(),
            [](const TransportPlan::Entry& a, const TransportPlan::Entry& b) {
              return a.i != b.i ? a.i < b.i : a.j < b.j;
            });
  plan.cost = simplex.cost();
  plan.source_potential.resize(mu.size());
  plan.target_potential.resize(nu.size());
  for (int i = 0; i < mu.size(); ++i) plan.source_potential(i) = simplex.source_potential(i);
  for (int j = 0; j < nu.size(); ++j) plan.target_potential(j) = simplex.target_potential(j);
  return plan;
}

double w2(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return std::sqrt(std::max(0.0, solve_w2(mu, nu).cost));
}

double permutation_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const int n = mu.size();
  if (n != nu.size() || n > 8)
    throw UnsupportedInstance("permutation oracle needs equal atom counts <= 8");
  for (int i = 0; i < n; ++i)
    if (std::abs(mu.weight(i) - 1.0 / n) > 1e-12 ||
        std::abs(nu.weight(i) - 1.0 / n) > 1e-12)
      throw UnsupportedInstance("permutation oracle needs uniform weights");

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int i = 0; i < n; ++i)
      cost += (mu.locations().row(i) - nu.locations().row(perm[i])).squaredNorm() / n;
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

SquaredDistanceMatrix pairwise_w2_squared(std::span<const DiscreteMeasure> measures,
                                          int threads) {
  PairwiseCache no_cache;
  PairwiseStats stats;
  return pairwise_w2_squared_cached(measures, no_cache, stats, threads);
}

SquaredDistanceMatrix pairwise_w2_squared_cached(std::span<const DiscreteMeasure> measures,
                                                 const PairwiseCache& cache,
                                                 PairwiseStats& stats, int threads) {
  const int n = static_cast<int>(measures.size());
  if (n < 2) throw Error("pairwise distances need at least two measures");
  for (int i = 1; i < n; ++i)
    if (measures[i].dim() != measures[0].dim())
      throw DimensionMismatch("measure " + std::to_string(i) +
                              " has mismatched ambient dimension");

  SquaredDistanceMatrix result;
  result.entries = Matrix::Zero(n, n);

  // upper-triangle pairs as a flat work list
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  std::atomic<std::int64_t> solved{0}, hits{0};
  parallel_for(static_cast<std::int64_t>(pairs.size()), threads, [&](std::int64_t p) {
    const auto [i, j] = pairs[p];
    double cost = 0.0;
    if (cache.lookup && cache.lookup(i, j, cost)) {
      hits.fetch_add(1, std::memory_order_relaxed);
    } else {
      try {
        cost = solve_w2(measures[i], measures[j]).cost;
      } catch (const Error& e) {
        throw Error("pair (" + std::to_string(i) + "," + std::to_string(j) +
                    "): " + e.what());
      }
      solved.fetch_add(1, std::memory_order_relaxed);
      if (cache.store) cache.store(i, j, cost);
    }
    result.entries(i, j) = cost;
    result.entries(j, i) = cost;
  });
  stats.solved += solved.load();
  stats.cache_hits += hits.load();
  return result;
}

std::uint64_t solve_call_count() { return g_solve_calls.load(); }

SinkhornResult sinkhorn_w2(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           double regularization, double tol, int max_iter) {
  if (mu.dim() != nu.dim())
    throw DimensionMismatch("measures live in different ambient dimensions");
  if (!(regularization > 0.0)) throw Error("regularization must be positive");

  const int n1 = mu.size(), n2 = nu.size();
  Matrix cost_matrix(n1, n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      cost_matrix(i, j) = (mu.locations().row(i) - nu.locations().row(j)).squaredNorm();

  const Vector log_a = mu.weights().array().log();
  const Vector log_b = nu.weights().array().log();

  // log-domain scaling: f, g are the entropic dual potentials
  Vector f = Vector::Zero(n1), g = Vector::Zero(n2);
  const auto plan_log = [&](const Vector& fv, const Vector& gv) {
    Matrix lp = (-cost_matrix).rowwise() + gv.transpose();
    lp.colwise() += fv;
    lp /= regularization;
    lp.colwise() += log_a;
    lp.rowwise() += log_b.transpose();
    return lp;
  };

  int iter = 0;
  double violation = std::numeric_limits<double>::infinity();
  for (; iter < max_iter; ++iter) {
    // f-update: row log-sum-exp of ((g - C)/eps + log b)
    for (int i = 0; i < n1; ++i) {
      double m = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < n2; ++j)
        m = std::max(m, (g(j) - cost_matrix(i, j)) / regularization + log_b(j));
      double s = 0.0;
      for (int j = 0; j < n2; ++j)
        s += std::exp((g(j) - cost_matrix(i, j)) / regularization + log_b(j) - m);
      f(i) = -regularization * (m + std::log(s));
    }
    for (int j = 0; j < n2; ++j) {
      double m = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < n1; ++i)
        m = std::max(m, (f(i) - cost_matrix(i, j)) / regularization + log_a(i));
      double s = 0.0;
      for (int i = 0; i < n1; ++i)
        s += std::exp((f(i) - cost_matrix(i, j)) / regularization + log_a(i) - m);
      g(j) = -regularization * (m + std::log(s));
    }
    // after a g-update column sums are exact; check the row marginals
    const Matrix lp = plan_log(f, g);
    violation = 0.0;
    for (int i = 0; i < n1; ++i) {
      double row = 0.0;
      for (int j = 0; j < n2; ++j) row += std::exp(lp(i, j));
      violation = std::max(violation, std::abs(row - mu.weight(i)));
    }
    if (violation <= tol) break;
  }
  if (violation > tol)
    throw MaxIterExceeded("sinkhorn marginal violation " + std::to_string(violation) +
                          " after " + std::to_string(max_iter) + " iterations");

  const Matrix lp = plan_log(f, g);
  double transport_cost = 0.0;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      transport_cost += std::exp(lp(i, j)) * cost_matrix(i, j);
  return {std::sqrt(std::max(0.0, transport_cost)), iter + 1};
}

}  // namespace wassmap

#include "wassmap/isomap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <thread>

namespace wassmap {

namespace {

std::vector<std::vector<std::pair<int, double>>> adjacency(const NeighborGraph& g) {
  std::vector<std::vector<std::pair<int, double>>> adj(g.n);
  for (const auto& e : g.edges) {
    adj[e.i].emplace_back(e.j, e.weight);
    adj[e.j].emplace_back(e.i, e.weight);
  }
  return adj;
}

std::vector<int> component_labels(const NeighborGraph& g, int& count) {
  const auto adj = adjacency(g);
  std::vector<int> label(g.n, -1);
  count = 0;
  for (int s = 0; s < g.n; ++s) {
    if (label[s] >= 0) continue;
    std::vector<int> stack = {s};
    label[s] = count;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      for (const auto& [other, w] : adj[node])
        if (label[other] < 0) {
          label[other] = count;
          stack.push_back(other);
        }
    }
    ++count;
  }
  return label;
}

// single-source Dijkstra over the restricted node set (ids are
// positions in `nodes`)
void dijkstra(const std::vector<std::vector<std::pair<int, double>>>& adj, int source,
              std::vector<double>& dist) {
  const int n = static_cast<int>(adj.size());
  dist.assign(n, std::numeric_limits<double>::infinity());
  dist[source] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, node] = heap.top();
    heap.pop();
    if (d > dist[node]) continue;
    for (const auto& [other, w] : adj[node]) {
      const double nd = d + w;
      if (nd < dist[other]) {
        dist[other] = nd;
        heap.emplace(nd, other);
      }
    }
  }
}

SquaredDistanceMatrix all_pairs_squared(
    const std::vector<std::vector<std::pair<int, double>>>& adj, int threads) {
  const int n = static_cast<int>(adj.size());
  SquaredDistanceMatrix out;
  out.entries = Matrix::Zero(n, n);

  int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, n);
  std::atomic<int> next{0};
  auto run = [&] {
    std::vector<double> dist;
    while (true) {
      const int s = next.fetch_add(1);
      if (s >= n) return;
      dijkstra(adj, s, dist);
      for (int t = 0; t < n; ++t) out.entries(s, t) = dist[t] * dist[t];
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  // exact symmetry: keep the upper triangle
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.entries(j, i) = out.entries(i, j);
  return out;
}

}  // namespace

NeighborGraph build_graph(const Matrix& vectors, const NeighborRule& rule) {
  const int n = static_cast<int>(vectors.rows());
  if (n < 2) throw Error("neighbor graph needs at least two points");

  NeighborGraph g;
  g.n = n;
  g.rule = rule;

  Matrix dist(n, n);
  for (int i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double d = (vectors.row(i) - vectors.row(j)).norm();
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }

  if (rule.kind == NeighborRule::Kind::epsilon) {
    if (!(rule.epsilon > 0.0)) throw Error("epsilon must be positive");
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (dist(i, j) <= rule.epsilon && dist(i, j) > 0.0)
          g.edges.push_back({i, j, dist(i, j)});
  } else {
    if (rule.k < 1 || rule.k >= n) throw Error("k must satisfy 1 <= k < n");
    std::vector<std::pair<int, int>> chosen;  // normalized (min, max)
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) {
      std::iota(order.begin(), order.end(), 0);
      // nearest first; ties broken by lower index
      std::sort(order.begin(), order.end(), [&](int p, int q) {
        if (dist(i, p) != dist(i, q)) return dist(i, p) < dist(i, q);
        return p < q;
      });
      int taken = 0;
      for (int r = 0; r < n && taken < rule.k; ++r) {
        const int j = order[r];
        if (j == i || dist(i, j) == 0.0) continue;  // exact duplicates carry no edge
        chosen.emplace_back(std::min(i, j), std::max(i, j));
        ++taken;
      }
    }
    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    for (const auto& [i, j] : chosen) g.edges.push_back({i, j, dist(i, j)});
  }
  return g;
}

SquaredDistanceMatrix geodesic_squared_distances(const NeighborGraph& g, int threads) {
  int count = 0;
  const auto label = component_labels(g, count);
  if (count != 1) {
    std::vector<int> sizes(count, 0);
    for (int l : label) ++sizes[l];
    std::sort(sizes.rbegin(), sizes.rend());
    std::string msg = "graph has " + std::to_string(count) + " components of sizes";
    for (int s : sizes) msg += " " + std::to_string(s);
    throw DisconnectedGraph(msg, sizes);
  }
  return all_pairs_squared(adjacency(g), threads);
}

GeodesicResult geodesic_squared_distances_largest_component(const NeighborGraph& g,
                                                            int threads) {
  int count = 0;
  const auto label = component_labels(g, count);
  std::vector<int> sizes(count, 0);
  for (int l : label) ++sizes[l];
  // largest component; ties resolved toward the lowest component id,
  // which is the one holding the lowest node index
  int best = 0;
  for (int c = 1; c < count; ++c)
    if (sizes[c] > sizes[best]) best = c;

  GeodesicResult out;
  std::vector<int> position(g.n, -1);
  for (int i = 0; i < g.n; ++i) {
    if (label[i] == best) {
      position[i] = static_cast<int>(out.kept.size());
      out.kept.push_back(i);
    } else {
      out.dropped.push_back(i);
    }
  }

  NeighborGraph sub;
  sub.n = static_cast<int>(out.kept.size());
  sub.rule = g.rule;
  for (const auto& e : g.edges)
    if (position[e.i] >= 0 && position[e.j] >= 0)
      sub.edges.push_back({position[e.i], position[e.j], e.weight});

  out.distances = all_pairs_squared(adjacency(sub), threads);
  return out;
}

IsomapResult isomap(const Matrix& vectors, const NeighborRule& rule, int d,
                    bool largest_component_only, int threads) {
  const NeighborGraph g = build_graph(vectors, rule);
  IsomapResult out;
  if (largest_component_only) {
    GeodesicResult geo = geodesic_squared_distances_largest_component(g, threads);
    out.kept = std::move(geo.kept);
    out.dropped = std::move(geo.dropped);
    out.embedding = classical_mds(geo.distances, d);
  } else {
    const SquaredDistanceMatrix w = geodesic_squared_distances(g, threads);
    out.kept.resize(g.n);
    std::iota(out.kept.begin(), out.kept.end(), 0);
    out.embedding = classical_mds(w, d);
  }
  return out;
}

}  // namespace wassmap

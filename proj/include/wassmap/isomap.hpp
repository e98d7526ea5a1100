#pragma once

#include "wassmap/embedding.hpp"

namespace wassmap {

/// Graph construction rule: connect within epsilon, or k nearest
/// neighbors symmetrized by union.
struct NeighborRule {
  enum class Kind { epsilon, knn };
  Kind kind = Kind::epsilon;
  double epsilon = 0.0;
  int k = 0;

  static NeighborRule eps(double e) { return {Kind::epsilon, e, 0}; }
  static NeighborRule knn(int k) { return {Kind::knn, 0.0, k}; }
};

/// Undirected proximity graph with Euclidean edge weights.
struct NeighborGraph {
  struct Edge {
    int i, j;      // i < j
    double weight; // Euclidean distance, > 0
  };
  int n = 0;
  std::vector<Edge> edges;
  NeighborRule rule;
};

/// vectors: one point per row.
NeighborGraph build_graph(const Matrix& vectors, const NeighborRule& rule);

/// All-pairs squared shortest-path distances via one Dijkstra per
/// source. Throws DisconnectedGraph (with component sizes) when the
/// graph is not connected.
SquaredDistanceMatrix geodesic_squared_distances(const NeighborGraph& g,
                                                 int threads = 0);

struct GeodesicResult {
  SquaredDistanceMatrix distances;
  std::vector<int> kept;     // original indices of retained nodes
  std::vector<int> dropped;  // original indices outside the largest component
};

/// Like geodesic_squared_distances but restricted to the largest
/// connected component instead of erroring (ties by lowest node index).
GeodesicResult geodesic_squared_distances_largest_component(const NeighborGraph& g,
                                                            int threads = 0);

struct IsomapResult {
  Embedding embedding;
  std::vector<int> kept;     // rows of `embedding.points` map to these inputs
  std::vector<int> dropped;
};

/// build_graph -> geodesics -> classical_mds. With
/// largest_component_only the pipeline embeds the largest component
/// and reports dropped indices; otherwise disconnection is an error.
IsomapResult isomap(const Matrix& vectors, const NeighborRule& rule, int d,
                    bool largest_component_only = false, int threads = 0);

}  // namespace wassmap

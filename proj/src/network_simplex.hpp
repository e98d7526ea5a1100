#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "wassmap/errors.hpp"

namespace wassmap::detail {

// Transportation network simplex for the quadratic ground cost
// c(i,j) = |x_i - y_j|^2. Ground costs are evaluated on demand from the
// coordinates, so memory stays O(n1 + n2) even for dense instances.
//
// The basis is the northwest-corner staircase hung from an artificial
// root above source 0. Every zero-flow staircase arc has its source
// endpoint as the child, so the start is strongly feasible, and
// pivoting keeps the tree strongly feasible via the classic leaving
// rule (last blocking arc along the cycle from the apex), which keeps
// the heavily degenerate uniform-weight instances from stalling.
// Pricing is a wrapping block search (block ~ sqrt(arc count)) taking
// the most negative reduced cost in the block, ties to the lowest arc
// index; a long degenerate streak switches to Bland's rule (first
// improving arc) until progress resumes.
class TransportSimplex {
 public:
  TransportSimplex(const Eigen::MatrixXd& x, const Eigen::VectorXd& a,
                   const Eigen::MatrixXd& y, const Eigen::VectorXd& b)
      : n1_(static_cast<int>(x.rows())),
        n2_(static_cast<int>(y.rows())),
        dim_(static_cast<int>(x.cols())),
        root_(n1_ + n2_),
        a_(a),
        b_(b) {
    xs_.assign(x.data(), x.data() + x.size());  // column-major: xs_[k*n1+i]
    ys_.assign(y.data(), y.data() + y.size());
    sx_.resize(n1_);
    sy_.resize(n2_);
    double cmax = 0.0;
    for (int i = 0; i < n1_; ++i) sx_[i] = x.row(i).squaredNorm();
    for (int j = 0; j < n2_; ++j) sy_[j] = y.row(j).squaredNorm();
    for (int i = 0; i < n1_; ++i)
      for (int k = 0; k < dim_; ++k) cmax = std::max(cmax, std::abs(xs_[k * n1_ + i]));
    for (int j = 0; j < n2_; ++j)
      for (int k = 0; k < dim_; ++k) cmax = std::max(cmax, std::abs(ys_[k * n2_ + j]));
    big_m_ = 4.0 * dim_ * (cmax + 1.0) * (cmax + 1.0) + 1.0;
  }

  void solve() {
    init_northwest_basis();

    const std::int64_t arc_count = static_cast<std::int64_t>(n1_) * n2_;
    const std::int64_t block = std::max<std::int64_t>(
        64, static_cast<std::int64_t>(std::sqrt(double(arc_count))));
    const std::int64_t max_pivots = 10000 + 100LL * (n1_ + n2_ + 1);
    const int bland_after = 4 * (n1_ + n2_);

    int degen_streak = 0;
    while (true) {
      int ei, ej;
      const bool bland = degen_streak >= bland_after;
      if (!find_entering(block, bland, ei, ej)) break;
      if (++pivots_ > max_pivots)
        throw NonConvergence("network simplex pivot limit exceeded (" +
                             std::to_string(max_pivots) + ")");
      const bool degenerate = pivot(ei, ej);
      degen_streak = degenerate ? degen_streak + 1 : 0;
    }

    for (int k = 0; k < static_cast<int>(arc_tail_.size()); ++k)
      if (arc_artificial_[k] && arc_flow_[k] > 1e-9)
        throw NonConvergence("artificial arc still carries flow " +
                             std::to_string(arc_flow_[k]));
  }

  double cost() const {
    double total = 0.0;
    for (std::size_t k = 0; k < arc_tail_.size(); ++k)
      if (!arc_artificial_[k] && arc_flow_[k] > 0.0)
        total += arc_flow_[k] * ground_cost(arc_tail_[k], arc_head_[k] - n1_);
    return total;
  }

  int basis_size() const { return static_cast<int>(arc_tail_.size()); }
  bool arc_artificial(int k) const { return arc_artificial_[k] != 0; }
  int arc_source(int k) const { return arc_tail_[k]; }
  int arc_target(int k) const { return arc_head_[k] - n1_; }
  double arc_flow(int k) const { return arc_flow_[k]; }
  std::int64_t pivots() const { return pivots_; }

  // phi_i = pi_i, psi_j = -pi_{n1+j}: phi_i + psi_j = c on basic arcs
  double source_potential(int i) const { return pi_[i]; }
  double target_potential(int j) const { return -pi_[n1_ + j]; }

  double ground_cost(int i, int j) const {
    double dot = 0.0;
    for (int k = 0; k < dim_; ++k) dot += xs_[k * n1_ + i] * ys_[k * n2_ + j];
    return sx_[i] + sy_[j] - 2.0 * dot;
  }

 private:
  static constexpr double kEps = 1e-9;  // absolute reduced-cost tolerance

  double arc_cost(int k) const {
    return arc_artificial_[k] ? big_m_ : ground_cost(arc_tail_[k], arc_head_[k] - n1_);
  }

  void init_northwest_basis() {
    const int arcs = n1_ + n2_;  // n1+n2-1 staircase arcs plus the root leaf
    arc_tail_.resize(arcs);
    arc_head_.resize(arcs);
    arc_flow_.resize(arcs);
    arc_artificial_.assign(arcs, 0);
    adj_.assign(n1_ + n2_ + 1, {});
    parent_node_.assign(n1_ + n2_ + 1, -1);
    parent_arc_.assign(n1_ + n2_ + 1, -1);
    depth_.assign(n1_ + n2_ + 1, 0);
    pi_.assign(n1_ + n2_ + 1, 0.0);

    int next = 0;
    const auto add_arc = [&](int i, int j, double flow) {
      arc_tail_[next] = i;
      arc_head_[next] = n1_ + j;
      arc_flow_[next] = flow;
      adj_[i].push_back(next);
      adj_[n1_ + j].push_back(next);
      ++next;
    };

    int i = 0, j = 0;
    double ra = a_(0), rb = b_(0);
    while (true) {
      const double f = std::max(0.0, std::min(ra, rb));
      add_arc(i, j, f);
      ra -= f;
      rb -= f;
      if (i == n1_ - 1 && j == n2_ - 1) break;
      if (ra <= rb && i < n1_ - 1) {
        ++i;
        ra = a_(i);
      } else if (j < n2_ - 1) {
        ++j;
        rb = b_(j);
      } else {
        ++i;
        ra = a_(i);
      }
    }

    // root hangs above source 0 through a zero-flow artificial leaf;
    // the root never lies on a pivot cycle, so the arc stays put
    const int art = next;
    arc_tail_[art] = 0;
    arc_head_[art] = root_;
    arc_flow_[art] = 0.0;
    arc_artificial_[art] = 1;
    adj_[0].push_back(art);
    adj_[root_].push_back(art);

    parent_node_[root_] = root_;
    reattach_subtree(0, root_, art);
  }

  // Scans the arc space from the cursor in blocks, keeping the most
  // negative reduced cost seen in the current block (first hit wins a
  // tie). In Bland mode the scan starts at arc 0 and returns the first
  // improving arc.
  bool find_entering(std::int64_t block, bool bland, int& ei, int& ej) {
    const std::int64_t arc_count = static_cast<std::int64_t>(n1_) * n2_;
    std::int64_t pos = bland ? 0 : cursor_;
    int i = static_cast<int>(pos / n2_);
    int j = static_cast<int>(pos % n2_);

    double best = -kEps;
    std::int64_t best_e = -1;
    std::int64_t remaining = arc_count;
    std::int64_t until_check = bland ? 1 : block;

    while (remaining > 0) {
      const int seg = static_cast<int>(std::min<std::int64_t>(
          {static_cast<std::int64_t>(n2_ - j), remaining, until_check}));
      scan_row_segment(i, j, seg, best, best_e);
      remaining -= seg;
      until_check -= seg;
      j += seg;
      if (j == n2_) {
        j = 0;
        i = (i + 1 == n1_) ? 0 : i + 1;
      }
      if (until_check == 0) {
        if (best_e >= 0) break;
        until_check = bland ? 1 : block;
      }
    }
    if (best_e < 0) return false;
    ei = static_cast<int>(best_e / n2_);
    ej = static_cast<int>(best_e % n2_);
    cursor_ = (best_e + 1) % arc_count;
    return true;
  }

  void scan_row_segment(int i, int j0, int len, double& best, std::int64_t& best_e) {
    // r(i,j) = c(i,j) - pi_i + pi_{n1+j}
    const double pi_row = sx_[i] - pi_[i];
    const double* sy = sy_.data();
    const double* pj = pi_.data() + n1_;
    if (dim_ == 2) {
      const double xi0 = xs_[i], xi1 = xs_[n1_ + i];
      const double* y0 = ys_.data();
      const double* y1 = ys_.data() + n2_;
      for (int j = j0; j < j0 + len; ++j) {
        const double r = pi_row + sy[j] + pj[j] - 2.0 * (xi0 * y0[j] + xi1 * y1[j]);
        if (r < best) {
          best = r;
          best_e = static_cast<std::int64_t>(i) * n2_ + j;
        }
      }
    } else {
      for (int j = j0; j < j0 + len; ++j) {
        double dot = 0.0;
        for (int k = 0; k < dim_; ++k) dot += xs_[k * n1_ + i] * ys_[k * n2_ + j];
        const double r = pi_row + sy[j] + pj[j] - 2.0 * dot;
        if (r < best) {
          best = r;
          best_e = static_cast<std::int64_t>(i) * n2_ + j;
        }
      }
    }
  }

  // One pivot with entering real arc (ei -> sink ej). Returns true when
  // the pivot is degenerate.
  bool pivot(int ei, int ej) {
    const int u = ei, v = n1_ + ej;

    // paths from both endpoints up to their lowest common ancestor
    path_u_.clear();
    path_v_.clear();
    {
      int a = u, b = v;
      while (depth_[a] > depth_[b]) {
        path_u_.push_back(a);
        a = parent_node_[a];
      }
      while (depth_[b] > depth_[a]) {
        path_v_.push_back(b);
        b = parent_node_[b];
      }
      while (a != b) {
        path_u_.push_back(a);
        path_v_.push_back(b);
        a = parent_node_[a];
        b = parent_node_[b];
      }
    }

    // Cycle in the entering arc's direction: apex -> u, arc (u,v),
    // v -> apex. A tree arc is backward when the traversal runs against
    // its stored direction; backward arcs lose flow.
    double theta = std::numeric_limits<double>::infinity();
    int leaving = -1;
    bool leaving_on_u_side = false;

    // segment apex -> u: nodes in path_u_ from the apex end downward
    for (int p = static_cast<int>(path_u_.size()) - 1; p >= 0; --p) {
      const int child = path_u_[p];
      const int k = parent_arc_[child];
      // traversal direction here is parent -> child
      const bool backward = arc_tail_[k] == child;
      if (backward && arc_flow_[k] <= theta) {
        theta = arc_flow_[k];
        leaving = k;
        leaving_on_u_side = true;
      }
    }
    // segment v -> apex: child -> parent steps
    for (std::size_t p = 0; p < path_v_.size(); ++p) {
      const int child = path_v_[p];
      const int k = parent_arc_[child];
      // traversal direction here is child -> parent
      const bool backward = arc_head_[k] == child;
      if (backward && arc_flow_[k] <= theta) {
        theta = arc_flow_[k];
        leaving = k;
        leaving_on_u_side = false;
      }
    }
    if (leaving < 0) throw NonConvergence("no blocking arc on the pivot cycle");

    // apply the flow change
    if (theta > 0.0) {
      for (const int child : path_u_) {
        const int k = parent_arc_[child];
        arc_flow_[k] += (arc_tail_[k] == child) ? -theta : theta;
      }
      for (const int child : path_v_) {
        const int k = parent_arc_[child];
        arc_flow_[k] += (arc_head_[k] == child) ? -theta : theta;
      }
    }

    // swap: the leaving arc's slot becomes the entering arc
    detach_adjacency(leaving, arc_tail_[leaving], arc_head_[leaving]);
    arc_tail_[leaving] = u;
    arc_head_[leaving] = v;
    arc_flow_[leaving] = theta;
    arc_artificial_[leaving] = 0;
    adj_[u].push_back(leaving);
    adj_[v].push_back(leaving);

    // The cut subtree hangs off the entering arc's endpoint on the cut
    // side; rebuild parents, depths and potentials there. The shift of
    // pi is uniform (by construction of reduced costs) but parents and
    // depths genuinely change, so one subtree walk handles all three.
    const int inside = leaving_on_u_side ? u : v;
    const int outside = leaving_on_u_side ? v : u;
    reattach_subtree(inside, outside, leaving);
    return !(theta > 0.0);
  }

  void detach_adjacency(int k, int node_a, int node_b) {
    for (const int node : {node_a, node_b}) {
      auto& lst = adj_[node];
      for (std::size_t p = 0; p < lst.size(); ++p) {
        if (lst[p] == k) {
          lst[p] = lst.back();
          lst.pop_back();
          break;
        }
      }
    }
  }

  // DFS over the detached component starting from `inside` (an endpoint
  // of the new arc `via`), whose parent becomes `outside`.
  void reattach_subtree(int inside, int outside, int via) {
    stack_.clear();
    parent_node_[inside] = outside;
    parent_arc_[inside] = via;
    depth_[inside] = depth_[outside] + 1;
    pi_[inside] = (arc_tail_[via] == inside) ? pi_[outside] + arc_cost(via)
                                             : pi_[outside] - arc_cost(via);
    stack_.push_back(inside);
    while (!stack_.empty()) {
      const int node = stack_.back();
      stack_.pop_back();
      for (const int k : adj_[node]) {
        if (k == parent_arc_[node]) continue;
        const int other = (arc_tail_[k] == node) ? arc_head_[k] : arc_tail_[k];
        parent_node_[other] = node;
        parent_arc_[other] = k;
        depth_[other] = depth_[node] + 1;
        pi_[other] = (arc_tail_[k] == other) ? pi_[node] + arc_cost(k)
                                             : pi_[node] - arc_cost(k);
        stack_.push_back(other);
      }
    }
  }

  int n1_, n2_, dim_, root_;
  Eigen::VectorXd a_, b_;
  std::vector<double> xs_, ys_, sx_, sy_;
  double big_m_ = 0.0;

  std::vector<int> arc_tail_, arc_head_;
  std::vector<double> arc_flow_;
  std::vector<char> arc_artificial_;
  std::vector<std::vector<int>> adj_;

  std::vector<int> parent_node_, parent_arc_, depth_;
  std::vector<double> pi_;

  std::int64_t cursor_ = 0;
  std::int64_t pivots_ = 0;
  std::vector<int> path_u_, path_v_, stack_;
};

}  // namespace wassmap::detail

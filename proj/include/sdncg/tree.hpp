#pragma once

#include <cstdint>
#include <vector>

#include "sdncg/graph.hpp"

namespace sdncg {

/// A spanning-tree state rooted at a fixed node, with the cached quantities
/// that make swap evaluation O(n): parent/depth, subtree sizes, an Euler
/// interval per node for subtree membership, and d_T(v,V) for every v.
class TreeScaffold {
 public:
  explicit TreeScaffold(GameState tree, Node root = 0) : state_(std::move(tree)), root_(root) {
    const int n = state_.node_count();
    if (!state_.is_tree()) {
      throw structural_error("state with " + std::to_string(state_.edge_count()) + " edges on " +
                             std::to_string(n) + " nodes is not a spanning tree");
    }
    std::vector<std::vector<Node>> adj(n);
    state_.active().for_each([&](std::size_t i) {
      const auto& e = state_.host().edge(i);
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    });

    parent_.assign(n, -1);
    depth_.assign(n, 0);
    size_.assign(n, 1);
    enter_.assign(n, 0);
    exit_.assign(n, 0);
    order_.clear();
    order_.reserve(n);

    // Iterative DFS: preorder gives Euler entry times, reverse preorder
    // accumulates subtree sizes.
    std::vector<std::pair<Node, std::size_t>> stack{{root_, 0}};
    std::vector<char> seen(n, 0);
    seen[root_] = 1;
    enter_[root_] = 0;
    order_.push_back(root_);
    while (!stack.empty()) {
      auto& [x, next] = stack.back();
      if (next < adj[x].size()) {
        Node y = adj[x][next++];
        if (seen[y]) continue;
        seen[y] = 1;
        parent_[y] = x;
        depth_[y] = depth_[x] + 1;
        enter_[y] = static_cast<std::int32_t>(order_.size());
        order_.push_back(y);
        stack.emplace_back(y, 0);
      } else {
        exit_[x] = static_cast<std::int32_t>(order_.size());
        stack.pop_back();
      }
    }
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      if (parent_[*it] >= 0) size_[parent_[*it]] += size_[*it];
    }

    // Rerooting: moving from parent to child brings size(child) nodes one
    // step closer and the remaining n - size(child) one step farther.
    per_node_.assign(n, 0);
    for (Node v = 0; v < n; ++v) per_node_[root_] += depth_[v];
    for (Node v : order_) {
      if (parent_[v] >= 0) per_node_[v] = per_node_[parent_[v]] + n - 2 * static_cast<std::int64_t>(size_[v]);
    }
    total_ = 0;
    for (auto s : per_node_) total_ += s;
  }

  const GameState& state() const noexcept { return state_; }
  const HostGraph& host() const noexcept { return state_.host(); }
  int node_count() const noexcept { return state_.node_count(); }
  Node root() const noexcept { return root_; }
  Node parent(Node v) const { return parent_[v]; }
  std::int32_t depth(Node v) const { return depth_[v]; }
  std::int32_t subtree_size(Node v) const { return size_[v]; }
  std::int64_t per_node_sum(Node v) const { return per_node_[v]; }
  std::int64_t total() const noexcept { return total_; }

  /// Nodes in DFS preorder from the root.
  const std::vector<Node>& order() const noexcept { return order_; }

  bool in_subtree(Node x, Node top) const { return enter_[top] <= enter_[x] && enter_[x] < exit_[top]; }

  /// The endpoint of a tree edge farther from the root.
  Node child_endpoint(const Edge& e) const {
    if (parent_[e.v] == e.u) return e.v;
    if (parent_[e.u] == e.v) return e.u;
    throw structural_error("edge " + to_string(e) + " is not a tree edge");
  }

  std::int64_t distance(Node a, Node b) const {
    std::int64_t d = 0;
    while (depth_[a] > depth_[b]) a = parent_[a], ++d;
    while (depth_[b] > depth_[a]) b = parent_[b], ++d;
    while (a != b) a = parent_[a], b = parent_[b], d += 2;
    return d;
  }

 private:
  GameState state_;
  Node root_;
  std::vector<Node> parent_;
  std::vector<std::int32_t> depth_;
  std::vector<std::int32_t> size_;
  std::vector<std::int32_t> enter_;
  std::vector<std::int32_t> exit_;
  std::vector<Node> order_;
  std::vector<std::int64_t> per_node_;
  std::int64_t total_ = 0;
};

/// Routing cost from the path-counting identity 2 * sum_e s_e (n - s_e).
inline std::int64_t tree_routing_cost(const TreeScaffold& t) {
  const std::int64_t n = t.node_count();
  std::int64_t sum = 0;
  for (Node v = 0; v < n; ++v) {
    if (t.parent(v) >= 0) sum += static_cast<std::int64_t>(t.subtree_size(v)) * (n - t.subtree_size(v));
  }
  return 2 * sum;
}

namespace detail {

struct SwapGeometry {
  Node child;       // endpoint of the removed edge inside the detached subtree A
  Node parent;      // other endpoint, in the remainder B
  Node inside;      // endpoint of the added edge in A
  Node outside;     // endpoint of the added edge in B
};

inline SwapGeometry swap_geometry(const TreeScaffold& t, const Edge& remove, const Edge& add) {
  if (!t.state().contains(remove)) throw structural_error("swap removes non-tree edge " + to_string(remove));
  if (!t.host().contains(add)) throw structural_error("swap adds edge " + to_string(add) + " outside the host");
  if (t.state().contains(add) && add != remove) {
    throw structural_error("swap adds edge " + to_string(add) + " already in the tree");
  }
  Node c = t.child_endpoint(remove);
  bool u_in = t.in_subtree(add.u, c);
  bool v_in = t.in_subtree(add.v, c);
  if (u_in == v_in) {
    throw structural_error("swap " + to_string(remove) + " -> " + to_string(add) + " disconnects the tree");
  }
  return {c, t.parent(c), u_in ? add.u : add.v, u_in ? add.v : add.u};
}

}  // namespace detail

/// routing_cost(T - remove + add) - routing_cost(T) in O(n).
///
/// With A the subtree cut off by `remove` (size s) and B the rest, only the
/// cross term changes: every A-B path now runs through `add` instead of
/// `remove`, so the delta is 2[(n-s)(S_A(a)-S_A(c)) + s(S_B(b)-S_B(p))],
/// where the within-part sums S follow from the cached d_T(v,V).
inline std::int64_t tree_swap_delta(const TreeScaffold& t, const Edge& remove, const Edge& add) {
  auto g = detail::swap_geometry(t, remove, add);
  const std::int64_t n = t.node_count();
  const std::int64_t s = t.subtree_size(g.child);
  const std::int64_t inside_dist = t.depth(g.inside) - t.depth(g.child);
  const std::int64_t outside_dist = t.distance(g.outside, g.parent);
  const std::int64_t shift_a = t.per_node_sum(g.inside) - t.per_node_sum(g.child) - (n - s) * inside_dist;
  const std::int64_t shift_b = t.per_node_sum(g.outside) - t.per_node_sum(g.parent) - s * outside_dist;
  return 2 * ((n - s) * shift_a + s * shift_b);
}

/// T - remove + add as a fresh scaffold with the same root.
inline TreeScaffold apply_swap(const TreeScaffold& t, const Edge& remove, const Edge& add) {
  detail::swap_geometry(t, remove, add);
  EdgeSet next = t.state().active();
  next.reset(static_cast<std::size_t>(t.host().index_of(remove)));
  next.set(static_cast<std::size_t>(t.host().index_of(add)));
  return TreeScaffold(GameState(t.state().host_ptr(), std::move(next)), t.root());
}

}  // namespace sdncg

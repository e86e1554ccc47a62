#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sdncg/graph.hpp"
#include "sdncg/tree.hpp"

namespace sdncg {

struct LongPath {
  std::vector<Node> nodes;
  bool exact_fallback = false;  // greedy fell short and the exact search ran
  bool below_bound = false;     // length * n < m even after the fallback

  std::size_t length() const { return nodes.empty() ? 0 : nodes.size() - 1; }
};

namespace detail {

inline constexpr int kExactLongestPathLimit = 20;

/// Longest simple path by DP over (node set, end node); n <= 20.
inline std::vector<Node> exact_longest_path(const HostGraph& g) {
  const int n = g.node_count();
  if (n > kExactLongestPathLimit) throw parameter_error("exact longest path limited to n <= 20");
  const std::uint32_t full = (std::uint32_t{1} << n);
  std::vector<std::uint32_t> ends(full, 0);
  for (Node v = 0; v < n; ++v) ends[std::uint32_t{1} << v] = std::uint32_t{1} << v;
  std::uint32_t best = 1;
  for (std::uint32_t set = 1; set < full; ++set) {
    if (ends[set] == 0) continue;
    if (std::popcount(set) > std::popcount(best)) best = set;
    for (auto bits = ends[set]; bits != 0; bits &= bits - 1) {
      Node v = std::countr_zero(bits);
      for (Node w : g.neighbors(v)) {
        if (!(set >> w & 1U)) ends[set | (std::uint32_t{1} << w)] |= std::uint32_t{1} << w;
      }
    }
  }
  std::vector<Node> path;
  std::uint32_t set = best;
  Node end = std::countr_zero(ends[set]);
  path.push_back(end);
  while (std::popcount(set) > 1) {
    std::uint32_t rest = set & ~(std::uint32_t{1} << end);
    Node prev = -1;
    for (auto bits = ends[rest]; bits != 0; bits &= bits - 1) {
      Node u = std::countr_zero(bits);
      if (g.contains(Edge(u, end))) {
        prev = u;
        break;
      }
    }
    path.push_back(prev);
    set = rest;
    end = prev;
  }
  return path;
}

}  // namespace detail

/// Two-sided greedy path growth from a minimum-degree node: the tail is
/// extended while possible, then the head, each time to the unvisited
/// neighbor of minimum host degree (lowest label on ties). If the result is
/// shorter than m/n and n <= 20 the exact longest path replaces it.
inline LongPath greedy_long_path(const HostGraph& g) {
  const int n = g.node_count();
  Node start = 0;
  for (Node v = 1; v < n; ++v) {
    if (g.degree(v) < g.degree(start)) start = v;
  }
  std::vector<char> used(n, 0);
  std::deque<Node> path{start};
  used[start] = 1;
  auto pick = [&](Node end) -> Node {
    Node best = -1;
    for (Node w : g.neighbors(end)) {
      if (!used[w] && (best < 0 || g.degree(w) < g.degree(best))) best = w;
    }
    return best;
  };
  for (;;) {
    if (Node w = pick(path.back()); w >= 0) {
      used[w] = 1;
      path.push_back(w);
    } else if (Node w2 = pick(path.front()); w2 >= 0) {
      used[w2] = 1;
      path.push_front(w2);
    } else {
      break;
    }
  }
  LongPath out;
  out.nodes.assign(path.begin(), path.end());
  auto meets_bound = [&] { return out.length() * static_cast<std::size_t>(n) >= g.edge_count(); };
  if (!meets_bound()) {
    if (n <= detail::kExactLongestPathLimit) {
      out.nodes = detail::exact_longest_path(g);
      out.exact_fallback = true;
    }
    out.below_bound = !meets_bound();
  }
  return out;
}

/// Spanning tree containing every edge of `path`; remaining host edges are
/// scanned in index order and kept when they join two components.
inline TreeScaffold extend_to_spanning_tree(const HostPtr& host, std::span<const Node> path) {
  const int n = host->node_count();
  std::vector<Node> parent(n);
  for (Node v = 0; v < n; ++v) parent[v] = v;
  auto find = [&](Node x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  EdgeSet chosen(host->edge_count());
  std::vector<char> on_path(n, 0);
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] < 0 || path[i] >= n || on_path[path[i]]) throw structural_error("path is not simple");
    on_path[path[i]] = 1;
    if (i == 0) continue;
    auto index = host->index_of(path[i - 1], path[i]);
    if (index < 0) throw structural_error("path uses edge " + to_string(Edge(path[i - 1], path[i])) + " outside the host");
    chosen.set(static_cast<std::size_t>(index));
    parent[find(path[i - 1])] = find(path[i]);
  }
  for (std::size_t i = 0; i < host->edge_count(); ++i) {
    const auto& e = host->edge(i);
    Node a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      chosen.set(i);
    }
  }
  return TreeScaffold(GameState(host, std::move(chosen)));
}

enum class Pivot { BestSwap, FirstSwap };

struct SwapCandidate {
  Edge remove;
  Edge add;
  std::int64_t delta = 0;
};

/// Scans every (tree edge, reconnecting host edge) pair in index order and
/// returns an improving swap: the first one (FirstSwap) or one of maximum
/// delta, earliest on ties (BestSwap). Empty iff the tree is swap-maximal.
inline std::optional<SwapCandidate> find_improving_swap(const TreeScaffold& t, Pivot pivot) {
  const auto& host = t.host();
  const auto& active = t.state().active();
  std::optional<SwapCandidate> best;
  for (std::size_t i = 0; i < host.edge_count(); ++i) {
    if (!active.test(i)) continue;
    const Edge& remove = host.edge(i);
    Node child = t.child_endpoint(remove);
    for (std::size_t j = 0; j < host.edge_count(); ++j) {
      if (active.test(j)) continue;
      const Edge& add = host.edge(j);
      if (t.in_subtree(add.u, child) == t.in_subtree(add.v, child)) continue;
      auto delta = tree_swap_delta(t, remove, add);
      if (delta <= 0) continue;
      if (pivot == Pivot::FirstSwap) return SwapCandidate{remove, add, delta};
      if (!best || delta > best->delta) best = SwapCandidate{remove, add, delta};
    }
  }
  return best;
}

/// Iteration ceiling for the local search: the path's routing cost
/// (n-1)n(n+1)/3 bounds every tree and each swap gains at least 1.
inline std::int64_t smrcst_iteration_bound(int n) {
  return static_cast<std::int64_t>(n - 1) * n * (n + 1) / 3;
}

struct SmrcstResult {
  TreeScaffold tree;
  LongPath seed;
  std::size_t seed_path_length = 0;
  std::size_t iterations = 0;
  std::int64_t initial_routing_cost = 0;
  std::int64_t routing_cost = 0;
};

/// Swap-maximal routing-cost spanning tree: seed with a long path, extend it
/// to a spanning tree, then apply improving edge swaps until none is left.
inline SmrcstResult smrcst(const HostPtr& host, Pivot pivot = Pivot::BestSwap) {
  auto seed = greedy_long_path(*host);
  TreeScaffold tree = extend_to_spanning_tree(host, seed.nodes);
  const auto initial = tree.total();
  const auto bound = smrcst_iteration_bound(host->node_count());
  std::size_t iterations = 0;
  while (auto swap = find_improving_swap(tree, pivot)) {
    tree = apply_swap(tree, swap->remove, swap->add);
    if (static_cast<std::int64_t>(++iterations) > bound) {
      throw structural_error("local search exceeded its iteration bound");
    }
  }
  auto cost = tree.total();
  auto length = seed.length();
  return SmrcstResult{std::move(tree), std::move(seed), length, iterations, initial, cost};
}

namespace detail {

struct TreeEnumerator {
  const HostGraph& host;
  std::size_t budget;
  EdgeSet chosen;
  std::size_t emitted = 0;

  static Node find(const std::vector<Node>& parent, Node x) {
    while (parent[x] != x) x = parent[x];
    return x;
  }

  bool connectable(std::vector<Node> parent, int components, std::size_t from) const {
    for (std::size_t j = from; j < host.edge_count() && components > 1; ++j) {
      Node a = find(parent, host.edge(j).u), b = find(parent, host.edge(j).v);
      if (a != b) parent[a] = b, --components;
    }
    return components == 1;
  }

  // Include-first recursion over edge indices: trees come out in
  // lexicographic order of their sorted edge-index sequences.
  template <class Emit>
  void recurse(std::size_t i, const std::vector<Node>& parent, int components, Emit& emit) {
    if (components == 1) {
      if (emitted == budget) throw budget_exceeded("spanning tree count exceeds budget", budget);
      ++emitted;
      emit(chosen);
      return;
    }
    if (i == host.edge_count()) return;
    const auto& e = host.edge(i);
    Node a = find(parent, e.u), b = find(parent, e.v);
    if (a != b) {
      auto merged = parent;
      merged[a] = b;
      chosen.set(i);
      recurse(i + 1, merged, components - 1, emit);
      chosen.reset(i);
    }
    if (connectable(parent, components, i + 1)) recurse(i + 1, parent, components, emit);
  }
};

}  // namespace detail

/// Streams every labeled spanning tree exactly once to `visit(const
/// TreeScaffold&)`. Throws budget_exceeded when a tree beyond `budget` turns
/// up. Returns the number of trees visited.
template <class Visit>
std::size_t for_each_spanning_tree(const HostPtr& host, std::size_t budget, Visit&& visit) {
  const int n = host->node_count();
  detail::TreeEnumerator en{*host, budget, EdgeSet(host->edge_count())};
  std::vector<Node> parent(n);
  for (Node v = 0; v < n; ++v) parent[v] = v;
  auto emit = [&](const EdgeSet& edges) { visit(TreeScaffold(GameState(host, edges))); };
  en.recurse(0, parent, n, emit);
  return en.emitted;
}

inline std::vector<TreeScaffold> enumerate_spanning_trees(const HostPtr& host, std::size_t budget) {
  std::vector<TreeScaffold> trees;
  for_each_spanning_tree(host, budget, [&](const TreeScaffold& t) { trees.push_back(t); });
  return trees;
}

/// Number of spanning trees by the matrix-tree theorem (fraction-free
/// Gaussian elimination on the reduced Laplacian).
inline boost::multiprecision::cpp_int spanning_tree_count(const HostGraph& g) {
  using boost::multiprecision::cpp_int;
  const int k = g.node_count() - 1;
  std::vector<std::vector<cpp_int>> a(k, std::vector<cpp_int>(k, 0));
  for (const auto& e : g.edges()) {
    if (e.u > 0) a[e.u - 1][e.u - 1] += 1;
    if (e.v > 0) a[e.v - 1][e.v - 1] += 1;
    if (e.u > 0 && e.v > 0) {
      a[e.u - 1][e.v - 1] -= 1;
      a[e.v - 1][e.u - 1] -= 1;
    }
  }
  cpp_int previous = 1;
  int sign = 1;
  for (int p = 0; p < k; ++p) {
    if (a[p][p] == 0) {
      int swap = p + 1;
      while (swap < k && a[swap][p] == 0) ++swap;
      if (swap == k) return 0;
      std::swap(a[p], a[swap]);
      sign = -sign;
    }
    for (int r = p + 1; r < k; ++r) {
      for (int c = p + 1; c < k; ++c) a[r][c] = (a[r][c] * a[p][p] - a[r][p] * a[p][c]) / previous;
    }
    previous = a[p][p];
  }
  return k == 0 ? cpp_int(1) : sign * a[k - 1][k - 1];
}

/// Maximum routing-cost spanning tree by exhaustive enumeration; the
/// lexicographically first optimal tree wins ties.
inline TreeScaffold mrcst_exact(const HostPtr& host, std::size_t budget) {
  std::optional<TreeScaffold> best;
  std::int64_t best_cost = -1;
  for_each_spanning_tree(host, budget, [&](const TreeScaffold& t) {
    auto cost = tree_routing_cost(t);
    if (cost > best_cost) {
      best_cost = cost;
      best = t;
    }
  });
  return std::move(*best);
}

}  // namespace sdncg

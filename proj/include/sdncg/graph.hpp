#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sdncg/error.hpp"

namespace sdncg {

using Node = std::int32_t;

/// Unordered node pair, stored with u < v.
struct Edge {
  Node u = 0;
  Node v = 0;

  Edge() = default;
  Edge(Node a, Node b) : u(std::min(a, b)), v(std::max(a, b)) {}

  Node other(Node x) const { return x == u ? v : u; }
  bool touches(Node x) const { return x == u || x == v; }

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline std::string to_string(const Edge& e) {
  return "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}";
}

/// Fixed-size bitset over host edge indices.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  static EdgeSet from_mask(std::size_t size, std::uint64_t mask) {
    EdgeSet s(size);
    if (size > 0) s.words_[0] = size >= 64 ? mask : mask & ((std::uint64_t{1} << size) - 1);
    return s;
  }

  static EdgeSet full(std::size_t size) {
    EdgeSet s(size);
    for (std::size_t i = 0; i < size; ++i) s.set(i);
    return s;
  }

  std::size_t size() const noexcept { return size_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      for (auto bits = words_[w]; bits != 0; bits &= bits - 1) {
        f(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      }
    }
  }

  std::size_t hash() const noexcept {
    std::size_t h = size_;
    for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

  // Lexicographic on the sorted index sequence: the set containing the
  // smallest differing index comes first.
  friend bool lex_less(const EdgeSet& a, const EdgeSet& b) {
    for (std::size_t w = 0; w < a.words_.size(); ++w) {
      auto diff = a.words_[w] ^ b.words_[w];
      if (diff != 0) return (a.words_[w] >> std::countr_zero(diff)) & 1U;
    }
    return false;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Immutable connected simple graph on nodes 0..n-1: the universe of
/// permitted edges. Edges are kept in lexicographic order and that order
/// defines edge indices everywhere else in the library.
class HostGraph {
 public:
  static constexpr int kMaskLimit = 64;

  HostGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ < 2) throw structural_error("host graph needs at least 2 nodes, got " + std::to_string(n_));
    for (const auto& e : edges_) {
      if (e.u < 0 || e.v >= n_) throw structural_error("edge " + to_string(e) + " out of range");
      if (e.u == e.v) throw structural_error("self-loop at node " + std::to_string(e.u));
    }
    std::sort(edges_.begin(), edges_.end());
    if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
      throw structural_error("duplicate edge " + to_string(*dup));
    }
    index_.assign(static_cast<std::size_t>(n_) * n_, -1);
    adjacency_.resize(n_);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      index_[slot(e.u, e.v)] = index_[slot(e.v, e.u)] = static_cast<std::int32_t>(i);
      adjacency_[e.u].push_back(e.v);
      adjacency_[e.v].push_back(e.u);
    }
    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
    if (n_ <= kMaskLimit) {
      masks_.assign(n_, 0);
      for (const auto& e : edges_) {
        masks_[e.u] |= std::uint64_t{1} << e.v;
        masks_[e.v] |= std::uint64_t{1} << e.u;
      }
    }
    if (!connected()) throw structural_error("host graph is not connected");
  }

  int node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_[i]; }
  const std::vector<Node>& neighbors(Node v) const { return adjacency_[v]; }
  std::size_t degree(Node v) const { return adjacency_[v].size(); }

  /// Index of {u,v} in edges(), or -1 when the host does not permit it.
  std::int32_t index_of(Node u, Node v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) return -1;
    return index_[slot(u, v)];
  }
  std::int32_t index_of(const Edge& e) const { return index_of(e.u, e.v); }
  bool contains(const Edge& e) const { return index_of(e) >= 0; }

  bool has_masks() const noexcept { return !masks_.empty(); }
  std::uint64_t neighbor_mask(Node v) const { return masks_[v]; }

  friend bool operator==(const HostGraph& a, const HostGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t slot(Node u, Node v) const { return static_cast<std::size_t>(u) * n_ + v; }

  bool connected() const {
    std::vector<char> seen(n_, 0);
    std::vector<Node> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      Node x = stack.back();
      stack.pop_back();
      for (Node y : adjacency_[x]) {
        if (!seen[y]) {
          seen[y] = 1;
          ++reached;
          stack.push_back(y);
        }
      }
    }
    return reached == n_;
  }

  int n_;
  std::vector<Edge> edges_;
  std::vector<std::int32_t> index_;
  std::vector<std::vector<Node>> adjacency_;
  std::vector<std::uint64_t> masks_;
};

using HostPtr = std::shared_ptr<const HostGraph>;

inline HostPtr share(HostGraph g) { return std::make_shared<const HostGraph>(std::move(g)); }

namespace detail {

enum class AdjacencyMode { Auto, ListsOnly };

/// Mutable adjacency of an edge subset of a host. Uses per-node bitmasks
/// when n <= 64 unless lists are forced.
class Adjacency {
 public:
  Adjacency(const HostGraph& host, const EdgeSet& active, AdjacencyMode mode = AdjacencyMode::Auto)
      : n_(host.node_count()) {
    use_masks_ = mode == AdjacencyMode::Auto && host.has_masks();
    if (use_masks_) {
      masks_.assign(n_, 0);
      active.for_each([&](std::size_t i) {
        const auto& e = host.edge(i);
        masks_[e.u] |= std::uint64_t{1} << e.v;
        masks_[e.v] |= std::uint64_t{1} << e.u;
      });
    } else {
      lists_.resize(n_);
      active.for_each([&](std::size_t i) {
        const auto& e = host.edge(i);
        lists_[e.u].push_back(e.v);
        lists_[e.v].push_back(e.u);
      });
    }
  }

  int node_count() const noexcept { return n_; }
  bool uses_masks() const noexcept { return use_masks_; }

  void remove(const Edge& e) {
    if (use_masks_) {
      masks_[e.u] &= ~(std::uint64_t{1} << e.v);
      masks_[e.v] &= ~(std::uint64_t{1} << e.u);
    } else {
      std::erase(lists_[e.u], e.v);
      std::erase(lists_[e.v], e.u);
    }
  }

  void add(const Edge& e) {
    if (use_masks_) {
      masks_[e.u] |= std::uint64_t{1} << e.v;
      masks_[e.v] |= std::uint64_t{1} << e.u;
    } else {
      lists_[e.u].push_back(e.v);
      lists_[e.v].push_back(e.u);
    }
  }

  /// Hop distances from src; -1 for unreachable nodes. Returns reached count.
  int bfs(Node src, std::span<std::int32_t> dist) const {
    std::fill(dist.begin(), dist.end(), -1);
    dist[src] = 0;
    int reached = 1;
    if (use_masks_) {
      std::uint64_t visited = std::uint64_t{1} << src;
      std::uint64_t frontier = visited;
      for (std::int32_t d = 1; frontier != 0; ++d) {
        std::uint64_t next = 0;
        for (auto bits = frontier; bits != 0; bits &= bits - 1) next |= masks_[std::countr_zero(bits)];
        next &= ~visited;
        for (auto bits = next; bits != 0; bits &= bits - 1) dist[std::countr_zero(bits)] = d;
        reached += std::popcount(next);
        visited |= next;
        frontier = next;
      }
      return reached;
    }
    queue_.assign(1, src);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      Node x = queue_[head];
      for (Node y : lists_[x]) {
        if (dist[y] < 0) {
          dist[y] = dist[x] + 1;
          ++reached;
          queue_.push_back(y);
        }
      }
    }
    return reached;
  }

  bool connected() const {
    std::vector<std::int32_t> dist(n_);
    return bfs(0, dist) == n_;
  }

 private:
  int n_;
  bool use_masks_ = false;
  std::vector<std::uint64_t> masks_;
  std::vector<std::vector<Node>> lists_;
  mutable std::vector<Node> queue_;
};

/// Connectivity of an edge subset via union-find; cheap filter for
/// subset enumeration.
inline bool spans_connected(const HostGraph& host, const EdgeSet& active) {
  const int n = host.node_count();
  if (active.count() + 1 < static_cast<std::size_t>(n)) return false;
  std::vector<Node> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Node x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = n;
  active.for_each([&](std::size_t i) {
    const auto& e = host.edge(i);
    Node a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  });
  return components == 1;
}

}  // namespace detail

/// A connected spanning subnetwork of a host, stored as a set of active
/// host edges. Copyable value; the host is shared and immutable.
class GameState {
 public:
  GameState(HostPtr host, EdgeSet active) : host_(std::move(host)), active_(std::move(active)) {
    if (!host_) throw structural_error("game state without host");
    if (active_.size() != host_->edge_count()) throw structural_error("edge set size does not match host");
    if (!detail::spans_connected(*host_, active_)) {
      throw structural_error("state is not a connected spanning subnetwork");
    }
  }

  static GameState whole(HostPtr host) {
    auto m = host->edge_count();
    return GameState(std::move(host), EdgeSet::full(m));
  }

  static GameState from_edges(HostPtr host, std::span<const Edge> edges) {
    EdgeSet set(host->edge_count());
    for (const auto& e : edges) {
      auto i = host->index_of(e);
      if (i < 0) throw structural_error("edge " + to_string(e) + " is not in the host");
      set.set(static_cast<std::size_t>(i));
    }
    return GameState(std::move(host), std::move(set));
  }

  const HostGraph& host() const noexcept { return *host_; }
  const HostPtr& host_ptr() const noexcept { return host_; }
  const EdgeSet& active() const noexcept { return active_; }
  int node_count() const noexcept { return host_->node_count(); }
  std::size_t edge_count() const { return active_.count(); }

  bool contains(const Edge& e) const {
    auto i = host_->index_of(e);
    return i >= 0 && active_.test(static_cast<std::size_t>(i));
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    active_.for_each([&](std::size_t i) { out.push_back(host_->edge(i)); });
    return out;
  }

  std::int64_t degree(Node v) const {
    std::int64_t d = 0;
    for (Node w : host_->neighbors(v)) d += contains(Edge(v, w)) ? 1 : 0;
    return d;
  }

  bool is_tree() const { return edge_count() + 1 == static_cast<std::size_t>(node_count()); }

  friend bool operator==(const GameState& a, const GameState& b) {
    return (a.host_ == b.host_ || *a.host_ == *b.host_) && a.active_ == b.active_;
  }

 private:
  HostPtr host_;
  EdgeSet active_;
};

/// The state's own edges as a standalone graph.
inline HostGraph as_graph(const GameState& state) { return HostGraph(state.node_count(), state.edges()); }

/// All-pairs hop distances of a state.
struct DistanceTable {
  int n = 0;
  std::vector<std::int32_t> dist;
  std::vector<std::int64_t> per_node;
  std::int64_t total = 0;

  std::int32_t at(Node u, Node v) const { return dist[static_cast<std::size_t>(u) * n + v]; }
  std::span<const std::int32_t> row(Node u) const {
    return {dist.data() + static_cast<std::size_t>(u) * n, static_cast<std::size_t>(n)};
  }
};

namespace detail {

inline DistanceTable all_pairs(const Adjacency& adj) {
  DistanceTable t;
  t.n = adj.node_count();
  t.dist.resize(static_cast<std::size_t>(t.n) * t.n);
  t.per_node.assign(t.n, 0);
  for (Node s = 0; s < t.n; ++s) {
    std::span<std::int32_t> row(t.dist.data() + static_cast<std::size_t>(s) * t.n, t.n);
    if (adj.bfs(s, row) != t.n) throw structural_error("state is disconnected");
    std::int64_t sum = 0;
    for (auto d : row) sum += d;
    t.per_node[s] = sum;
    t.total += sum;
  }
  return t;
}

inline DistanceTable all_pairs(const HostGraph& host, const EdgeSet& active,
                               AdjacencyMode mode = AdjacencyMode::Auto) {
  return all_pairs(Adjacency(host, active, mode));
}

}  // namespace detail

inline DistanceTable bfs_all_pairs(const GameState& state,
                                   detail::AdjacencyMode mode = detail::AdjacencyMode::Auto) {
  return detail::all_pairs(state.host(), state.active(), mode);
}

/// d_G(V,V): sum over ordered node pairs of hop distances.
inline std::int64_t routing_cost(const GameState& state) { return bfs_all_pairs(state).total; }

/// True iff removing the active edge e disconnects the state.
inline bool is_bridge(const GameState& state, const Edge& e) {
  if (!state.contains(e)) throw structural_error("edge " + to_string(e) + " is not active");
  detail::Adjacency adj(state.host(), state.active());
  adj.remove(e);
  std::vector<std::int32_t> dist(state.node_count());
  adj.bfs(e.u, dist);
  return dist[e.v] < 0;
}

/// Labeled identity of a state: equal iff the active edge sets are equal.
struct StateKey {
  EdgeSet edges;
  friend bool operator==(const StateKey&, const StateKey&) = default;
};

inline StateKey canonical_key(const GameState& state) { return StateKey{state.active()}; }

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const noexcept { return k.edges.hash(); }
};

}  // namespace sdncg

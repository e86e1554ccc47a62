#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sdncg/constructions.hpp"
#include "sdncg/tree.hpp"

using namespace sdncg;
namespace cons = sdncg::constructions;

TEST(TreeScaffold, RejectsNonTrees) {
  EXPECT_THROW(TreeScaffold(GameState::whole(share(cons::cycle(4)))), structural_error);
}

TEST(TreeScaffold, CachedSumsMatchBfs) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + trial % 25;
    auto edges = oracle::random_tree(n, rng);
    auto state = GameState::whole(share(HostGraph(n, edges)));
    Node root = static_cast<Node>(trial % n);
    TreeScaffold t(state, root);
    auto table = bfs_all_pairs(state);
    EXPECT_EQ(t.total(), table.total);
    EXPECT_EQ(tree_routing_cost(t), table.total);
    for (Node v = 0; v < n; ++v) {
      EXPECT_EQ(t.per_node_sum(v), table.per_node[v]);
      for (Node w = 0; w < n; ++w) ASSERT_EQ(t.distance(v, w), table.at(v, w));
    }
    EXPECT_EQ(t.subtree_size(root), n);
  }
}

TEST(TreeRoutingCost, PathAndStar) {
  EXPECT_EQ(tree_routing_cost(TreeScaffold(GameState::whole(share(cons::path(4))))), 20);
  EXPECT_EQ(tree_routing_cost(TreeScaffold(GameState::whole(share(cons::star(4))))), 18);
}

TEST(SwapDelta, PathToStarAndBack) {
  auto host = share(cons::clique(4));
  auto path = GameState::from_edges(host, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
  TreeScaffold t(path);
  // P_4 (cost 20) -> star centered at 1 (cost 18)
  EXPECT_EQ(tree_swap_delta(t, Edge(2, 3), Edge(1, 3)), -2);
  auto star = apply_swap(t, Edge(2, 3), Edge(1, 3));
  EXPECT_EQ(star.total(), 18);
  EXPECT_EQ(tree_swap_delta(star, Edge(1, 3), Edge(0, 3)), 2);
}

TEST(SwapDelta, RejectsIllegalSwaps) {
  auto host = share(cons::clique(4));
  TreeScaffold t(GameState::from_edges(host, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}}));
  EXPECT_THROW(tree_swap_delta(t, Edge(0, 2), Edge(0, 3)), structural_error);   // not a tree edge
  EXPECT_THROW(tree_swap_delta(t, Edge(0, 1), Edge(1, 2)), structural_error);   // already in the tree
  EXPECT_THROW(tree_swap_delta(t, Edge(0, 1), Edge(1, 3)), structural_error);   // does not reconnect
  TreeScaffold p(GameState::whole(share(cons::path(4))));
  EXPECT_THROW(tree_swap_delta(p, Edge(0, 1), Edge(0, 2)), structural_error);   // outside the host
}

// Every reconnecting swap on 200 random trees inside random hosts: the O(n)
// delta equals the from-scratch Floyd-Warshall difference.
TEST(SwapDelta, MatchesRecomputationOnRandomTrees) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 3 + trial % 12;
    auto tree_edges = oracle::random_tree(n, rng);
    auto host_edges = tree_edges;
    std::bernoulli_distribution coin(0.35);
    for (Node a = 0; a < n; ++a)
      for (Node b = a + 1; b < n; ++b)
        if (std::find(host_edges.begin(), host_edges.end(), Edge(a, b)) == host_edges.end() && coin(rng))
          host_edges.emplace_back(a, b);
    auto host = share(HostGraph(n, host_edges));
    TreeScaffold t(GameState::from_edges(host, tree_edges), static_cast<Node>(trial % n));
    const auto base = oracle::total(n, tree_edges);
    for (const auto& r : tree_edges) {
      for (const auto& a : host->edges()) {
        if (std::find(tree_edges.begin(), tree_edges.end(), a) != tree_edges.end()) continue;
        auto next = oracle::with(oracle::without(tree_edges, r), a);
        if (!oracle::connected(n, next)) {
          EXPECT_THROW(tree_swap_delta(t, r, a), structural_error);
          continue;
        }
        ASSERT_EQ(tree_swap_delta(t, r, a), oracle::total(n, next) - base);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 1000);
}

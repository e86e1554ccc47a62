#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sdncg/constructions.hpp"
#include "sdncg/graph.hpp"
#include "sdncg/graph_io.hpp"
#include "sdncg/rational.hpp"

using namespace sdncg;
namespace cons = sdncg::constructions;

TEST(Rational, ParsesIntegersAndFractions) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("5/2"), Rational(5, 2));
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(to_string(Rational(6, 4)), "3/2");
  EXPECT_EQ(to_string(Rational(8, 4)), "2");
}

TEST(Rational, RejectsDecimalsAndGarbage) {
  EXPECT_THROW(parse_rational("2.5"), parameter_error);
  EXPECT_THROW(parse_rational("1e3"), parameter_error);
  EXPECT_THROW(parse_rational(""), parameter_error);
  EXPECT_THROW(parse_rational("1/0"), parameter_error);
  EXPECT_THROW(parse_rational("a/2"), parameter_error);
}

TEST(Alpha, MustBePositive) {
  EXPECT_THROW(Alpha(0), parameter_error);
  EXPECT_THROW(Alpha(-1, 2), parameter_error);
  EXPECT_THROW(Alpha::parse("0/3"), parameter_error);
  EXPECT_EQ(Alpha::parse("10/4").value(), Rational(5, 2));
}

TEST(Alpha, IntegerComparisonsAreExact) {
  Alpha a(5, 2);
  EXPECT_TRUE(a.exceeds(2));
  EXPECT_FALSE(a.exceeds(3));
  EXPECT_TRUE(a.below(3));
  EXPECT_FALSE(a.below(2));
  Alpha one(1);
  EXPECT_FALSE(one.exceeds(1));
  EXPECT_FALSE(one.below(1));
}

TEST(HostGraph, RejectsMalformedInput) {
  EXPECT_THROW(HostGraph(1, {}), structural_error);
  EXPECT_THROW(HostGraph(3, {{0, 1}}), structural_error);
  EXPECT_THROW(HostGraph(3, {{0, 1}, {1, 3}}), structural_error);
  EXPECT_THROW(HostGraph(3, {{0, 1}, {1, 0}, {1, 2}}), structural_error);
  EXPECT_THROW(HostGraph(3, {{0, 1}, {1, 1}, {1, 2}}), structural_error);
}

TEST(HostGraph, EdgesAreSortedAndIndexed) {
  HostGraph g(4, {{2, 3}, {1, 0}, {1, 2}});
  ASSERT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g.edge(0), Edge(0, 1));
  EXPECT_EQ(g.edge(1), Edge(1, 2));
  EXPECT_EQ(g.edge(2), Edge(2, 3));
  EXPECT_EQ(g.index_of(3, 2), 2);
  EXPECT_EQ(g.index_of(0, 3), -1);
  EXPECT_EQ(g.degree(1), 2u);
}

TEST(GameState, MustBeConnectedSpanning) {
  auto host = share(cons::cycle(4));
  EXPECT_THROW(GameState::from_edges(host, std::vector<Edge>{{0, 1}, {2, 3}}), structural_error);
  EXPECT_THROW(GameState::from_edges(host, std::vector<Edge>{{0, 2}}), structural_error);
  auto s = GameState::from_edges(host, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
  EXPECT_TRUE(s.is_tree());
  EXPECT_EQ(s.degree(1), 2);
}

TEST(Distances, SmallFamilies) {
  EXPECT_EQ(routing_cost(GameState::whole(share(cons::path(4)))), 20);
  EXPECT_EQ(routing_cost(GameState::whole(share(cons::clique(5)))), 20);
  EXPECT_EQ(routing_cost(GameState::whole(share(cons::star(4)))), 18);
  EXPECT_EQ(routing_cost(GameState::whole(share(cons::cycle(5)))), 30);
  EXPECT_EQ(routing_cost(GameState::whole(share(cons::cycle(6)))), 54);
}

TEST(Distances, MatchFloydWarshallOnRandomGraphs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + trial % 30;
    auto edges = oracle::random_connected(n, 0.2, rng);
    auto host = share(HostGraph(n, edges));
    auto state = GameState::whole(host);
    auto fw = oracle::floyd(n, edges);
    auto table = bfs_all_pairs(state);
    for (Node u = 0; u < n; ++u)
      for (Node v = 0; v < n; ++v) ASSERT_EQ(table.at(u, v), fw[u][v]);
    EXPECT_EQ(table.total, oracle::total(n, edges));
  }
}

TEST(Distances, BitmaskAndListPathsAgree) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 3 + trial * 2;  // crosses the 64-node mask limit
    auto edges = oracle::random_connected(n, 3.0 / n, rng);
    auto state = GameState::whole(share(HostGraph(n, edges)));
    auto fast = bfs_all_pairs(state);
    auto lists = bfs_all_pairs(state, detail::AdjacencyMode::ListsOnly);
    ASSERT_EQ(fast.dist, lists.dist);
    ASSERT_EQ(fast.per_node, lists.per_node);
  }
}

TEST(Bridges, TreeEdgesAreBridgesCycleEdgesAreNot) {
  auto tree = GameState::whole(share(cons::star(5)));
  for (const auto& e : tree.edges()) EXPECT_TRUE(is_bridge(tree, e));
  auto ring = GameState::whole(share(cons::cycle(5)));
  for (const auto& e : ring.edges()) EXPECT_FALSE(is_bridge(ring, e));
  EXPECT_THROW(is_bridge(ring, Edge(0, 2)), structural_error);
}

TEST(StateKey, LabeledEquality) {
  auto host = share(cons::clique(4));
  auto a = GameState::from_edges(host, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
  auto b = GameState::from_edges(host, std::vector<Edge>{{2, 3}, {0, 1}, {1, 2}});
  auto c = GameState::from_edges(host, std::vector<Edge>{{0, 2}, {1, 2}, {2, 3}});
  EXPECT_EQ(canonical_key(a), canonical_key(b));
  EXPECT_FALSE(canonical_key(a) == canonical_key(c));
  EXPECT_EQ(StateKeyHash{}(canonical_key(a)), StateKeyHash{}(canonical_key(b)));
}

TEST(GraphIo, TextRoundTrip) {
  auto g = cons::hypercube(3);
  auto text = graph_to_text(g);
  EXPECT_EQ(parse_graph_text(text), g);
  EXPECT_EQ(parse_graph(text), g);
}

TEST(GraphIo, JsonRoundTrip) {
  auto g = cons::wheel_clique_network(9);
  auto json = graph_to_json(g).dump();
  EXPECT_EQ(parse_graph(json), g);
}

TEST(GraphIo, ToleratesBlankLines) {
  EXPECT_EQ(parse_graph_text("3 2\n\n0 1\n\n1 2\n\n"), cons::path(3));
}

TEST(GraphIo, ErrorsNameTheLine) {
  auto line_of = [](const std::string& text) {
    try {
      parse_graph_text(text);
    } catch (const parse_error& e) {
      return e.line();
    }
    return std::size_t{999};
  };
  EXPECT_EQ(line_of("3 2\n0 1\n1 x\n"), 3u);
  EXPECT_EQ(line_of("3 2\n0 1\n2 1\n"), 3u);
  EXPECT_EQ(line_of("3 2\n0 1 7\n1 2\n"), 2u);
  EXPECT_EQ(line_of("3\n"), 1u);
  EXPECT_EQ(line_of("3 2\n0 1\n"), 3u);
  EXPECT_EQ(line_of("3 1\n0 1\n1 2\n"), 3u);
  EXPECT_THROW(parse_graph_text("4 2\n0 1\n2 3\n"), parse_error);
  EXPECT_THROW(parse_graph("{\"n\": 3}"), parse_error);
  EXPECT_THROW(parse_graph("{\"n\": 3, \"edges\": [[0, 5]]}"), parse_error);
}

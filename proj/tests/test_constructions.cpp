#include <gtest/gtest.h>

#include <numeric>

#include "oracles.hpp"
#include "sdncg/constructions.hpp"
#include "sdncg/game.hpp"
#include "sdncg/spanning.hpp"

using namespace sdncg;
namespace cons = sdncg::constructions;

namespace {

bool complete_on(const HostGraph& g, Node first, int size) {
  for (Node a = first; a < first + size; ++a)
    for (Node b = a + 1; b < first + size; ++b)
      if (!g.contains(Edge(a, b))) return false;
  return true;
}

bool joined(const HostGraph& g, Node a0, int sa, Node b0, int sb) {
  for (Node a = a0; a < a0 + sa; ++a)
    for (Node b = b0; b < b0 + sb; ++b)
      if (!g.contains(Edge(a, b))) return false;
  return true;
}

// Every removal raises both endpoint sums by exactly 1, via Floyd-Warshall.
bool removal_lemma(const HostGraph& g) {
  const int n = g.node_count();
  auto before = oracle::floyd(n, g.edges());
  for (const auto& e : g.edges()) {
    auto after = oracle::floyd(n, oracle::without(g.edges(), e));
    if (oracle::row_sum(after, e.u) != oracle::row_sum(before, e.u) + 1) return false;
    if (oracle::row_sum(after, e.v) != oracle::row_sum(before, e.v) + 1) return false;
  }
  return true;
}

}  // namespace

TEST(BasicFamilies, Shapes) {
  EXPECT_EQ(cons::clique(4).edge_count(), 6u);
  auto q3 = cons::hypercube(3);
  EXPECT_EQ(q3.node_count(), 8);
  EXPECT_EQ(q3.edge_count(), 12u);
  EXPECT_EQ(cons::star(5).degree(0), 4u);
  EXPECT_EQ(cons::cycle(6).edge_count(), 6u);
  EXPECT_EQ(cons::path(6).edge_count(), 5u);
  EXPECT_THROW(cons::cycle(2), parameter_error);
  EXPECT_THROW(cons::path(1), parameter_error);
}

TEST(PathClique, Shapes) {
  auto g = cons::path_clique(6, 3, 2);
  EXPECT_EQ(g.node_count(), 6);
  EXPECT_EQ(g.edge_count(), 7u);  // 2 path + 3 clique + 2 connecting
  EXPECT_TRUE(g.contains(Edge(2, 3)));
  EXPECT_TRUE(g.contains(Edge(2, 4)));
  EXPECT_FALSE(g.contains(Edge(2, 5)));
  EXPECT_EQ(cons::path_clique(5, 0, 0), cons::path(5));
  EXPECT_EQ(cons::path_clique(5, 5, 0), cons::clique(5));
  EXPECT_THROW(cons::path_clique(6, 3, 1), parameter_error);
  EXPECT_THROW(cons::path_clique(6, 3, 4), parameter_error);
}

TEST(CliqueNetwork, Shapes) {
  EXPECT_EQ(cons::clique_network(cons::path(2), {2, 2}), cons::clique(4));
  auto g = cons::clique_network(cons::path(3), {2, 2, 2});
  EXPECT_EQ(g.node_count(), 6);
  EXPECT_EQ(g.edge_count(), 11u);
  EXPECT_FALSE(g.contains(Edge(0, 4)));
  EXPECT_THROW(cons::clique_network(cons::path(3), {2, 1, 2}), parameter_error);
  EXPECT_THROW(cons::clique_network(cons::path(3), {2, 2}), parameter_error);
}

TEST(CliqueNetwork, RemovalLemma) {
  EXPECT_TRUE(removal_lemma(cons::clique_network(cons::path(3), {2, 3, 2})));
  EXPECT_TRUE(removal_lemma(cons::clique_network(cons::star(4), {3, 2, 2, 4})));
  EXPECT_TRUE(removal_lemma(cons::clique_network(cons::cycle(5), {2, 2, 3, 2, 2})));
  EXPECT_TRUE(removal_lemma(cons::hypercube_clique_network(12)));
  EXPECT_TRUE(removal_lemma(cons::wheel_clique_network(11)));
}

TEST(StarOfCliques, Layout) {
  auto l = cons::star_of_cliques_layout(14, Rational(2));
  EXPECT_EQ(l.c, 4);
  EXPECT_EQ(l.d, 3);
  EXPECT_EQ(l.outer_size, 2);
  EXPECT_EQ(l.center_size, 2);
  auto g = cons::star_of_cliques(14, Rational(2));
  EXPECT_EQ(g.node_count(), 14);
  // Wiring: per ray C(c-2,2) + 2(c-2) + 1 + 2|M|, plus C(|M|,2).
  const int per_ray = 1 + 4 + 1 + 4;
  EXPECT_EQ(g.edge_count(), static_cast<std::size_t>(3 * per_ray + 1));
  for (int i = 0; i < l.d; ++i) {
    EXPECT_TRUE(g.contains(Edge(l.v(i), l.v_prime(i))));
    EXPECT_TRUE(joined(g, l.ray_first(i), l.outer_size, l.v(i), 2));
    EXPECT_TRUE(joined(g, l.v(i), 2, l.center_first(), l.center_size));
    EXPECT_FALSE(g.contains(Edge(l.ray_first(i), l.center_first())));
  }
  EXPECT_TRUE(complete_on(g, l.center_first(), l.center_size));
  EXPECT_THROW(cons::star_of_cliques(14, Rational(1)), parameter_error);
  EXPECT_THROW(cons::star_of_cliques(14, Rational(4)), parameter_error);
  EXPECT_THROW(cons::star_of_cliques(5, Rational(2)), parameter_error);
}

TEST(StarOfCliques, StableAtItsAlpha) {
  EXPECT_TRUE(is_pairwise_stable(GameState::whole(share(cons::star_of_cliques(14, Rational(2)))), Alpha(2)).stable);
  EXPECT_TRUE(is_pairwise_stable(GameState::whole(share(cons::star_of_cliques(25, Rational(5)))), Alpha(5)).stable);
  EXPECT_TRUE(
      is_pairwise_stable(GameState::whole(share(cons::star_of_cliques(20, Rational(3, 2)))), Alpha(3, 2)).stable);
}

TEST(HypercubeCliqueNetwork, Sizes) {
  EXPECT_EQ(cons::hypercube_clique_sizes(12), (std::vector<int>{3, 3, 3, 3}));
  EXPECT_EQ(cons::hypercube_clique_sizes(16), std::vector<int>(8, 2));
  EXPECT_EQ(cons::hypercube_clique_sizes(20), (std::vector<int>{3, 3, 3, 3, 2, 2, 2, 2}));
  EXPECT_EQ(cons::hypercube_clique_sizes(64), std::vector<int>(32, 2));
  for (int n = 8; n < 80; ++n) {
    auto s = cons::hypercube_clique_sizes(n);
    EXPECT_EQ(std::accumulate(s.begin(), s.end(), 0), n);
    auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    EXPECT_LE(*hi - *lo, 1);
    EXPECT_GE(*lo, 2);
  }
  EXPECT_THROW(cons::hypercube_clique_network(7), parameter_error);
  EXPECT_EQ(cons::hypercube_clique_network(12).node_count(), 12);
}

TEST(HypercubeCliqueNetwork, Stable) {
  auto g = share(cons::hypercube_clique_network(64));
  EXPECT_TRUE(is_pairwise_stable(GameState::whole(g), Alpha(Rational(64, 6) - 3)).stable);
  EXPECT_TRUE(is_pairwise_stable(GameState::whole(g), Alpha(1)).stable);
  EXPECT_TRUE(is_pairwise_stable(GameState::whole(share(cons::hypercube_clique_network(48))), Alpha(5)).stable);
}

TEST(PathOfCliques, Layout) {
  auto l = cons::path_of_cliques_layout(20, 4);
  EXPECT_EQ(l.c, 3);
  EXPECT_EQ(l.clique_sizes, (std::vector<int>{3, 4, 4, 3}));
  EXPECT_EQ(l.clique_sizes[0] + l.clique_sizes[1], 7);
  EXPECT_EQ(l.clique_sizes[2] + l.clique_sizes[3], 7);
  EXPECT_EQ(l.v1, 7);
  EXPECT_EQ(l.v3p, 12);
  EXPECT_EQ(l.clique_first[2], 13);

  auto g = cons::path_of_cliques(20, 4);
  EXPECT_EQ(g.node_count(), 20);
  EXPECT_TRUE(joined(g, l.clique_first[1], 4, l.v1, 2));
  EXPECT_TRUE(joined(g, l.clique_first[2], 4, l.v3, 2));
  EXPECT_TRUE(joined(g, l.v2, 2, l.v1, 2));
  EXPECT_TRUE(joined(g, l.v2, 2, l.v3, 2));
  EXPECT_TRUE(g.contains(Edge(l.v1, l.v1p)));
  EXPECT_TRUE(g.contains(Edge(l.v3, l.v3p)));
  EXPECT_FALSE(g.contains(Edge(l.v1, l.v3)));
  EXPECT_FALSE(g.contains(Edge(l.clique_first[0], l.v1)));
  EXPECT_TRUE(joined(g, l.clique_first[0], 3, l.clique_first[1], 4));

  auto odd = cons::path_of_cliques_layout(21, 4);
  EXPECT_EQ(odd.clique_sizes[0] + odd.clique_sizes[1], 8);
  EXPECT_EQ(odd.clique_sizes[2] + odd.clique_sizes[3], 7);
  EXPECT_THROW(cons::path_of_cliques(20, 3), parameter_error);
  EXPECT_THROW(cons::path_of_cliques(20, 8), parameter_error);
}

TEST(PathOfCliques, Stable) {
  EXPECT_TRUE(is_pairwise_stable(GameState::whole(share(cons::path_of_cliques(20, 4))), Alpha(8)).stable);
  EXPECT_TRUE(is_pairwise_stable(GameState::whole(share(cons::path_of_cliques(26, 4))), Alpha(10)).stable);
}

TEST(WheelCliqueNetwork, Shapes) {
  auto g = cons::wheel_clique_network(10);
  EXPECT_EQ(g.node_count(), 10);
  EXPECT_TRUE(complete_on(g, 0, 2));
  auto odd = cons::wheel_clique_network(11);
  EXPECT_EQ(odd.node_count(), 11);
  EXPECT_TRUE(complete_on(odd, 0, 3));
  EXPECT_TRUE(joined(odd, 0, 3, 3, 2));
  EXPECT_THROW(cons::wheel_clique_network(7), parameter_error);
  // Hamilton path: longest path covers every node.
  for (int n : {8, 9, 10, 11, 12}) {
    auto w = cons::wheel_clique_network(n);
    EXPECT_EQ(oracle::longest_path(n, w.edges()), n - 1);
  }
}

TEST(WheelCliqueNetwork, StableForAlphaAtLeastOne) {
  for (const auto& [n, a] : std::vector<std::pair<int, int>>{{10, 1}, {11, 3}, {12, 7}}) {
    EXPECT_TRUE(is_pairwise_stable(GameState::whole(share(cons::wheel_clique_network(n))), Alpha(a)).stable);
  }
}

TEST(ClosedForms, Values) {
  using cons::WelfareFamily;
  EXPECT_EQ(cons::closed_form_sw(WelfareFamily::Path, 6, Rational(2)), Rational(90));
  EXPECT_EQ(cons::closed_form_sw(WelfareFamily::Star, 5, Rational(1)), Rational(40));
  EXPECT_EQ(cons::closed_form_sw(WelfareFamily::Clique, 6, Rational(2)), Rational(90));
  EXPECT_EQ(cons::closed_form_sw(WelfareFamily::CycleOdd, 5, Rational(1)), Rational(40));
  EXPECT_THROW(cons::closed_form_sw(WelfareFamily::CycleOdd, 6, Rational(1)), parameter_error);
  EXPECT_THROW(cons::closed_form_sw(WelfareFamily::CycleEven, 5, Rational(1)), parameter_error);
}

TEST(ClosedForms, MatchOracleWelfare) {
  using cons::WelfareFamily;
  for (int n = 3; n <= 14; ++n) {
    for (const Rational& a : {Rational(1, 2), Rational(1), Rational(n, 3), Rational(n)}) {
      EXPECT_EQ(cons::closed_form_sw(WelfareFamily::Path, n, a), oracle::welfare(n, cons::path(n).edges(), a));
      EXPECT_EQ(cons::closed_form_sw(WelfareFamily::Clique, n, a), oracle::welfare(n, cons::clique(n).edges(), a));
      EXPECT_EQ(cons::closed_form_sw(WelfareFamily::Star, n, a), oracle::welfare(n, cons::star(n).edges(), a));
      auto cyc = n % 2 ? WelfareFamily::CycleOdd : WelfareFamily::CycleEven;
      EXPECT_EQ(cons::closed_form_sw(cyc, n, a), oracle::welfare(n, cons::cycle(n).edges(), a));
    }
  }
}

TEST(Build, DispatchesByFamily) {
  cons::ConstructionSpec spec;
  spec.family = *cons::parse_family("path-clique");
  spec.n = 6;
  spec.k = 3;
  spec.c = 2;
  EXPECT_EQ(cons::build(spec), cons::path_clique(6, 3, 2));
  spec.family = cons::Family::StarOfCliques;
  spec.n = 14;
  EXPECT_THROW(cons::build(spec), parameter_error);
  spec.alpha = Rational(2);
  EXPECT_EQ(cons::build(spec), cons::star_of_cliques(14, Rational(2)));
  EXPECT_FALSE(cons::parse_family("nope").has_value());
  for (const auto& [family, name] : cons::kFamilyNames) EXPECT_EQ(cons::parse_family(name), family);
}

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sdncg/constructions.hpp"
#include "sdncg/game.hpp"

using namespace sdncg;
namespace cons = sdncg::constructions;

namespace {

GameState whole(const HostGraph& g) { return GameState::whole(share(g)); }

}  // namespace

TEST(Utility, Examples) {
  EXPECT_EQ(utility(whole(cons::path(4)), 0, Alpha(1)), Rational(7));
  EXPECT_EQ(utility(whole(cons::clique(5)), 2, Alpha(2)), Rational(12));
  EXPECT_EQ(utility(whole(cons::star(4)), 0, Alpha(1, 2)), Rational(9, 2));
  EXPECT_THROW(utility(whole(cons::path(4)), 4, Alpha(1)), structural_error);
}

TEST(SocialWelfare, Examples) {
  EXPECT_EQ(social_welfare(whole(cons::path(5)), Alpha(1)), Rational(48));
  EXPECT_EQ(social_welfare(whole(cons::clique(6)), Alpha(2)), Rational(90));
  EXPECT_EQ(social_welfare(whole(cons::cycle(5)), Alpha(1)), Rational(40));
}

TEST(SocialWelfare, MatchesOracleOnRandomStates) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + trial % 10;
    auto edges = oracle::random_connected(n, 0.3, rng);
    Alpha alpha(1 + trial % 7, 1 + trial % 3);
    EXPECT_EQ(social_welfare(whole(HostGraph(n, edges)), alpha), oracle::welfare(n, edges, alpha.value()));
  }
}

TEST(Stability, KnownCases) {
  EXPECT_TRUE(is_pairwise_stable(whole(cons::path(6)), Alpha(5, 2)).stable);
  EXPECT_TRUE(is_pairwise_stable(whole(cons::clique(5)), Alpha(3)).stable);
  EXPECT_TRUE(is_pairwise_stable(whole(cons::star(6)), Alpha(1)).stable);
  // K_4 at alpha 1/2: removing any edge pays off for both endpoints.
  auto r = is_pairwise_stable(whole(cons::clique(4)), Alpha(1, 2));
  EXPECT_FALSE(r.stable);
  EXPECT_FALSE(r.stable_against_removal);
  EXPECT_TRUE(r.stable_against_addition);
  EXPECT_EQ(r.witnesses.size(), 6u);
}

TEST(Stability, PathOnCompleteHostAboveThreshold) {
  auto host = share(cons::clique(6));
  auto path = GameState::from_edges(host, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  EXPECT_TRUE(is_pairwise_stable(path, Alpha(5, 2)).stable);
  EXPECT_TRUE(is_pairwise_stable(path, Alpha(3)).stable);
  // {1,3} shortens 1's sum by 3 and 3's by 2, so it pays off once alpha > 3.
  auto r = is_pairwise_stable(path, Alpha(7, 2));
  EXPECT_FALSE(r.stable);
  EXPECT_FALSE(r.stable_against_addition);
  EXPECT_EQ(r.witnesses.front(), Move::add(1, 3));
}

TEST(Stability, WitnessLimitTruncates) {
  auto r = is_pairwise_stable(whole(cons::clique(5)), Alpha(1, 3), 2);
  EXPECT_EQ(r.witnesses.size(), 2u);
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(r.moves_examined, 10u);
}

// Stability checker against the definition-level oracle on random hosts
// and random states at a spread of alphas.
TEST(Stability, MatchesOracle) {
  std::mt19937_64 rng(77);
  int stable_seen = 0, unstable_seen = 0;
  for (int trial = 0; trial < 150; ++trial) {
    int n = 3 + trial % 6;
    auto host_edges = oracle::random_connected(n, 0.5, rng);
    auto host = share(HostGraph(n, host_edges));
    std::vector<Edge> state;
    std::bernoulli_distribution coin(0.7);
    for (const auto& e : host->edges())
      if (coin(rng)) state.push_back(e);
    if (!oracle::connected(n, state)) state = host_edges;
    Alpha alpha(1 + trial % 9, 2);
    bool expected = oracle::stable(n, host_edges, state, alpha.value());
    bool got = is_pairwise_stable(GameState::from_edges(host, state), alpha).stable;
    ASSERT_EQ(got, expected) << "trial " << trial;
    (expected ? stable_seen : unstable_seen)++;
  }
  EXPECT_GT(stable_seen, 10);
  EXPECT_GT(unstable_seen, 10);
}

TEST(ImprovingMoves, EveryMoveImprovesPerOracle) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 4 + trial % 4;
    auto host_edges = oracle::random_connected(n, 0.6, rng);
    auto host = share(HostGraph(n, host_edges));
    auto state = GameState::whole(host);
    Alpha alpha(1 + trial % 5, 2);
    for (const auto& m : improving_moves(state, alpha)) {
      auto before = state.edges();
      auto after = apply_move(state, m).edges();
      auto gain = [&](Node x) {
        return oracle::utility(n, after, x, alpha.value()) - oracle::utility(n, before, x, alpha.value());
      };
      if (m.kind == MoveKind::Add) {
        EXPECT_TRUE(gain(m.edge.u) > Rational(0) && gain(m.edge.v) > Rational(0));
      } else {
        EXPECT_TRUE(gain(m.edge.u) > Rational(0) || gain(m.edge.v) > Rational(0));
      }
    }
  }
}

TEST(ImprovingMoves, LimitAndOrder) {
  auto host = share(cons::clique(5));
  auto path = GameState::from_edges(host, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  auto all = improving_moves(path, Alpha(3));
  ASSERT_FALSE(all.empty());
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
  auto one = improving_moves(path, Alpha(3), 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.front(), all.front());
  EXPECT_TRUE(improving_moves(path, Alpha(3), 0).empty());
}

TEST(ApplyMove, Errors) {
  auto host = share(cons::cycle(4));
  auto ring = GameState::whole(host);
  EXPECT_THROW(apply_move(ring, Move::add(0, 2)), structural_error);
  EXPECT_THROW(apply_move(ring, Move::add(0, 1)), structural_error);
  auto path = apply_move(ring, Move::remove(0, 3));
  EXPECT_EQ(path.edge_count(), 3u);
  EXPECT_THROW(apply_move(path, Move::remove(0, 1)), structural_error);
  EXPECT_THROW(apply_move(path, Move::remove(0, 3)), structural_error);
  EXPECT_EQ(apply_move(path, Move::add(0, 3)), ring);
}

TEST(Dynamics, TreeStartIsImmediatelyStableForSmallAlpha) {
  auto host = share(cons::clique(5));
  auto star = GameState::from_edges(host, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  auto out = run_dynamics(star, Alpha(1), Policy::FirstImproving, 100);
  EXPECT_EQ(out.terminal, Terminal::Stable);
  EXPECT_EQ(out.moves_applied, 0u);
  EXPECT_EQ(out.trajectory.size(), 1u);
}

TEST(Dynamics, CliqueSheddingReachesATree) {
  auto host = share(cons::clique(5));
  for (auto policy : {Policy::FirstImproving, Policy::BestImproving, Policy::SeededRandom}) {
    auto out = run_dynamics(GameState::whole(host), Alpha(1, 2), policy, 1000, 42);
    EXPECT_EQ(out.terminal, Terminal::Stable);
    EXPECT_TRUE(out.final_state.is_tree());
    EXPECT_EQ(out.moves_applied, 6u);
    EXPECT_TRUE(is_pairwise_stable(out.final_state, Alpha(1, 2)).stable);
  }
}

TEST(Dynamics, BudgetStopsEarly) {
  auto out = run_dynamics(whole(cons::clique(5)), Alpha(1, 2), Policy::FirstImproving, 2);
  EXPECT_EQ(out.terminal, Terminal::BudgetExhausted);
  EXPECT_EQ(out.moves_applied, 2u);
}

TEST(Dynamics, SeededRandomIsReproducible) {
  auto host = share(cons::clique(6));
  auto a = run_dynamics(GameState::whole(host), Alpha(1, 2), Policy::SeededRandom, 100, 9);
  auto b = run_dynamics(GameState::whole(host), Alpha(1, 2), Policy::SeededRandom, 100, 9);
  ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
    EXPECT_EQ(a.trajectory[i].key, b.trajectory[i].key);
    EXPECT_EQ(a.trajectory[i].move, b.trajectory[i].move);
  }
}

TEST(Dynamics, BestImprovingPicksHighestWelfare) {
  auto host = share(cons::clique(5));
  auto path = GameState::from_edges(host, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  Alpha alpha(3);
  auto out = run_dynamics(path, alpha, Policy::BestImproving, 1);
  ASSERT_TRUE(out.trajectory.front().move.has_value());
  auto chosen = social_welfare(apply_move(path, *out.trajectory.front().move), alpha);
  for (const auto& m : improving_moves(path, alpha)) {
    EXPECT_LE(social_welfare(apply_move(path, m), alpha), chosen);
  }
}

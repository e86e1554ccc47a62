#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "sdncg/graph.hpp"
#include "sdncg/rational.hpp"

namespace sdncg {

enum class MoveKind : std::uint8_t { Add, Remove };

/// Bilateral edge addition or unilateral edge removal. Moves order by kind
/// (additions first), then by edge.
struct Move {
  MoveKind kind = MoveKind::Add;
  Edge edge;

  static Move add(Node u, Node v) { return {MoveKind::Add, Edge(u, v)}; }
  static Move remove(Node u, Node v) { return {MoveKind::Remove, Edge(u, v)}; }

  friend auto operator<=>(const Move&, const Move&) = default;
};

inline std::string to_string(const Move& m) {
  return std::string(m.kind == MoveKind::Add ? "add " : "remove ") + std::to_string(m.edge.u) + " " +
         std::to_string(m.edge.v);
}

struct StabilityReport {
  bool stable = true;
  bool stable_against_addition = true;
  bool stable_against_removal = true;
  std::vector<Move> witnesses;
  std::size_t moves_examined = 0;
  bool truncated = false;
};

namespace detail {

/// 2p|E| + q*D, i.e. SW * q for alpha = p/q. Exact and comparable across
/// states sharing the same alpha.
inline std::int64_t scaled_welfare(std::size_t edges, std::int64_t routing_cost, const Alpha& alpha) {
  return 2 * alpha.num() * static_cast<std::int64_t>(edges) + alpha.den() * routing_cost;
}

inline Rational unscale_welfare(std::int64_t scaled, const Alpha& alpha) { return Rational(scaled, alpha.den()); }

struct ScanResult {
  std::size_t examined = 0;
  bool improving_addition = false;
  bool improving_removal = false;
  bool stopped = false;
};

/// Visits improving moves in canonical order (additions, then removals, each
/// by edge index). `visit(move)` returns false to stop the scan.
///
/// Addition gain for u is alpha minus the drop of d(u,V) in G+e, and
/// d_{G+uv}(u,x) = min(d(u,x), 1 + d(v,x)), so additions need only the
/// distance table. Removal gain for u is the increase of d(u,V) in G-e minus
/// alpha and needs one BFS per endpoint.
template <class Visit>
ScanResult scan_improving(const HostGraph& host, const EdgeSet& active, const DistanceTable& table,
                          const Alpha& alpha, Adjacency& adj, Visit&& visit) {
  const int n = host.node_count();
  ScanResult r;
  for (std::size_t i = 0; i < host.edge_count(); ++i) {
    if (active.test(i)) continue;
    const Edge& e = host.edge(i);
    ++r.examined;
    auto ru = table.row(e.u);
    auto rv = table.row(e.v);
    std::int64_t drop_u = 0, drop_v = 0;
    for (Node x = 0; x < n; ++x) {
      if (ru[x] > rv[x] + 1) drop_u += ru[x] - rv[x] - 1;
      if (rv[x] > ru[x] + 1) drop_v += rv[x] - ru[x] - 1;
    }
    if (alpha.exceeds(drop_u) && alpha.exceeds(drop_v)) {
      r.improving_addition = true;
      if (!visit(Move{MoveKind::Add, e})) {
        r.stopped = true;
        return r;
      }
    }
  }
  std::vector<std::int32_t> dist(n);
  auto sum = [&] {
    std::int64_t s = 0;
    for (auto d : dist) s += d;
    return s;
  };
  for (std::size_t i = 0; i < host.edge_count(); ++i) {
    if (!active.test(i)) continue;
    const Edge& e = host.edge(i);
    ++r.examined;
    adj.remove(e);
    bool improving = false;
    if (adj.bfs(e.u, dist) == n) {
      improving = alpha.below(sum() - table.per_node[e.u]);
      if (!improving) {
        adj.bfs(e.v, dist);
        improving = alpha.below(sum() - table.per_node[e.v]);
      }
    }
    adj.add(e);
    if (improving) {
      r.improving_removal = true;
      if (!visit(Move{MoveKind::Remove, e})) {
        r.stopped = true;
        return r;
      }
    }
  }
  return r;
}

/// Early-exit stability predicate for enumeration loops. The active set
/// must already be known to be connected.
inline bool stable_subset(const HostGraph& host, const EdgeSet& active, const Alpha& alpha) {
  Adjacency adj(host, active);
  auto table = all_pairs(adj);
  auto r = scan_improving(host, active, table, alpha, adj, [](const Move&) { return false; });
  return !r.stopped;
}

}  // namespace detail

/// u_v(G) = alpha * deg_G(v) + d_G(v,V).
inline Rational utility(const GameState& state, Node v, const Alpha& alpha, const DistanceTable& table) {
  if (v < 0 || v >= state.node_count()) throw structural_error("node " + std::to_string(v) + " out of range");
  return alpha.value() * state.degree(v) + Rational(table.per_node[v]);
}

inline Rational utility(const GameState& state, Node v, const Alpha& alpha) {
  return utility(state, v, alpha, bfs_all_pairs(state));
}

/// SW(G) = sum of utilities = 2 alpha |E| + d_G(V,V); both forms are
/// evaluated and must agree.
inline Rational social_welfare(const GameState& state, const Alpha& alpha) {
  auto table = bfs_all_pairs(state);
  Rational by_sum(0);
  for (Node v = 0; v < state.node_count(); ++v) by_sum += utility(state, v, alpha, table);
  auto closed = detail::unscale_welfare(detail::scaled_welfare(state.edge_count(), table.total, alpha), alpha);
  if (by_sum != closed) {
    throw structural_error("welfare identity violated: " + to_string(by_sum) + " != " + to_string(closed));
  }
  return closed;
}

/// Improving moves in canonical order, truncated to `limit` when given.
inline std::vector<Move> improving_moves(const GameState& state, const Alpha& alpha,
                                         std::optional<std::size_t> limit = std::nullopt) {
  std::vector<Move> out;
  if (limit && *limit == 0) return out;
  detail::Adjacency adj(state.host(), state.active());
  auto table = detail::all_pairs(adj);
  detail::scan_improving(state.host(), state.active(), table, alpha, adj, [&](const Move& m) {
    out.push_back(m);
    return !limit || out.size() < *limit;
  });
  return out;
}

/// Full scan of host-legal additions and non-bridge removals. At most
/// `witness_limit` witnesses are kept; `truncated` marks dropped ones.
inline StabilityReport is_pairwise_stable(const GameState& state, const Alpha& alpha,
                                          std::size_t witness_limit = std::numeric_limits<std::size_t>::max()) {
  StabilityReport report;
  detail::Adjacency adj(state.host(), state.active());
  auto table = detail::all_pairs(adj);
  auto r = detail::scan_improving(state.host(), state.active(), table, alpha, adj, [&](const Move& m) {
    if (report.witnesses.size() < witness_limit) {
      report.witnesses.push_back(m);
    } else {
      report.truncated = true;
    }
    return true;
  });
  report.moves_examined = r.examined;
  report.stable_against_addition = !r.improving_addition;
  report.stable_against_removal = !r.improving_removal;
  report.stable = report.stable_against_addition && report.stable_against_removal;
  return report;
}

inline GameState apply_move(const GameState& state, const Move& m) {
  auto index = state.host().index_of(m.edge);
  if (index < 0) throw structural_error("move " + to_string(m) + " uses an edge outside the host");
  EdgeSet next = state.active();
  if (m.kind == MoveKind::Add) {
    if (next.test(static_cast<std::size_t>(index))) throw structural_error("move " + to_string(m) + " adds an active edge");
    next.set(static_cast<std::size_t>(index));
  } else {
    if (!next.test(static_cast<std::size_t>(index))) {
      throw structural_error("move " + to_string(m) + " removes an inactive edge");
    }
    if (is_bridge(state, m.edge)) throw structural_error("move " + to_string(m) + " removes a bridge");
    next.reset(static_cast<std::size_t>(index));
  }
  return GameState(state.host_ptr(), std::move(next));
}

enum class Policy { FirstImproving, BestImproving, SeededRandom };

struct DynamicsStep {
  StateKey key;
  std::optional<Move> move;  // empty on the final step
};

enum class Terminal { Stable, Cycle, BudgetExhausted };

inline std::string to_string(Terminal t) {
  switch (t) {
    case Terminal::Stable: return "stable";
    case Terminal::Cycle: return "cycle";
    case Terminal::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

struct DynamicsOutcome {
  std::vector<DynamicsStep> trajectory;
  Terminal terminal = Terminal::BudgetExhausted;
  std::size_t cycle_start = 0;  // meaningful for Terminal::Cycle
  GameState final_state;
  std::size_t moves_applied = 0;
};

/// Sequential improving-move dynamics. FirstImproving takes the first move
/// in canonical order, BestImproving the move maximizing the resulting social
/// welfare (earliest wins ties), SeededRandom a uniform choice drawn from a
/// mt19937_64 seeded with `seed`. Stops on a stable state, on the first
/// revisited state, or after `budget` moves.
inline DynamicsOutcome run_dynamics(const GameState& start, const Alpha& alpha, Policy policy, std::size_t budget,
                                    std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::unordered_map<StateKey, std::size_t, StateKeyHash> visited;
  DynamicsOutcome out{{}, Terminal::BudgetExhausted, 0, start, 0};
  GameState current = start;
  for (;;) {
    auto key = canonical_key(current);
    if (auto it = visited.find(key); it != visited.end()) {
      out.trajectory.push_back({std::move(key), std::nullopt});
      out.terminal = Terminal::Cycle;
      out.cycle_start = it->second;
      break;
    }
    visited.emplace(key, out.trajectory.size());
    auto moves = improving_moves(current, alpha);
    if (moves.empty() || out.moves_applied == budget) {
      out.trajectory.push_back({std::move(key), std::nullopt});
      out.terminal = moves.empty() ? Terminal::Stable : Terminal::BudgetExhausted;
      break;
    }
    std::size_t pick = 0;
    if (policy == Policy::BestImproving) {
      std::int64_t best = std::numeric_limits<std::int64_t>::min();
      for (std::size_t i = 0; i < moves.size(); ++i) {
        auto next = apply_move(current, moves[i]);
        auto w = detail::scaled_welfare(next.edge_count(), routing_cost(next), alpha);
        if (w > best) best = w, pick = i;
      }
    } else if (policy == Policy::SeededRandom) {
      pick = std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng);
    }
    out.trajectory.push_back({std::move(key), moves[pick]});
    current = apply_move(current, moves[pick]);
    ++out.moves_applied;
  }
  out.final_state = std::move(current);
  return out;
}

}  // namespace sdncg

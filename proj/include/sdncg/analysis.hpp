#pragma once

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "sdncg/constructions.hpp"
#include "sdncg/game.hpp"
#include "sdncg/spanning.hpp"

namespace sdncg {

namespace detail {

inline constexpr std::size_t kMaxSubsetEdges = 40;

inline std::uint64_t subset_count(const HostGraph& host, std::size_t budget) {
  const auto m = host.edge_count();
  if (m > kMaxSubsetEdges || (std::uint64_t{1} << m) > budget) {
    throw budget_exceeded("exhaustive enumeration needs 2^" + std::to_string(m) + " edge subsets, budget is " +
                              std::to_string(budget),
                          budget);
  }
  return std::uint64_t{1} << m;
}

/// Runs `visit(acc, mask, active)` on every connected spanning edge subset in
/// ascending mask order, split into contiguous mask ranges across `workers`
/// threads. Each range gets its own accumulator; `merge(into, from)` folds
/// them back in range order, so results do not depend on the worker count.
template <class Acc, class Visit, class Merge>
Acc for_each_connected_subset(const HostGraph& host, std::size_t budget, unsigned workers, Visit&& visit,
                              Merge&& merge) {
  const std::uint64_t total = subset_count(host, budget);
  const auto m = host.edge_count();
  const auto need = static_cast<int>(host.node_count()) - 1;
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(total, 64))));
  std::vector<Acc> parts(workers);
  auto run = [&](unsigned w) {
    const std::uint64_t lo = total * w / workers;
    const std::uint64_t hi = total * (w + 1) / workers;
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
      if (std::popcount(mask) < need) continue;
      auto active = EdgeSet::from_mask(m, mask);
      if (!spans_connected(host, active)) continue;
      visit(parts[w], mask, active);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  Acc out = std::move(parts[0]);
  for (unsigned w = 1; w < workers; ++w) merge(out, std::move(parts[w]));
  return out;
}

inline std::int64_t state_scaled_welfare(const HostGraph& host, const EdgeSet& active, const Alpha& alpha,
                                         std::size_t edges) {
  return scaled_welfare(edges, all_pairs(host, active).total, alpha);
}

}  // namespace detail

struct OptimumResult {
  std::vector<GameState> best_states;  // ascending edge mask
  Rational welfare;
  std::size_t states_examined = 0;
};

/// Social optimum by exhaustive enumeration of the 2^m edge subsets.
inline OptimumResult optimum_exact(const HostPtr& host, const Alpha& alpha, std::size_t budget,
                                   unsigned workers = 1) {
  const auto m = host->edge_count();
  struct Acc {
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    std::vector<std::uint64_t> masks;
    std::size_t examined = 0;
  };
  auto acc = detail::for_each_connected_subset<Acc>(
      *host, budget, workers,
      [&](Acc& a, std::uint64_t mask, const EdgeSet& active) {
        ++a.examined;
        auto w = detail::state_scaled_welfare(*host, active, alpha, static_cast<std::size_t>(std::popcount(mask)));
        if (w > a.best) a.best = w, a.masks.clear();
        if (w == a.best) a.masks.push_back(mask);
      },
      [](Acc& into, Acc&& from) {
        into.examined += from.examined;
        if (from.best > into.best) {
          into.best = from.best;
          into.masks = std::move(from.masks);
        } else if (from.best == into.best) {
          into.masks.insert(into.masks.end(), from.masks.begin(), from.masks.end());
        }
      });
  OptimumResult r;
  r.welfare = detail::unscale_welfare(acc.best, alpha);
  r.states_examined = acc.examined;
  for (auto mask : acc.masks) r.best_states.emplace_back(host, EdgeSet::from_mask(m, mask));
  return r;
}

enum class CompleteOptimum { Path, Clique, Both };

inline std::string to_string(CompleteOptimum k) {
  switch (k) {
    case CompleteOptimum::Path: return "path";
    case CompleteOptimum::Clique: return "clique";
    case CompleteOptimum::Both: return "both";
  }
  return "?";
}

struct CompleteOptimumForm {
  CompleteOptimum kind = CompleteOptimum::Path;
  Rational path_welfare;
  Rational clique_welfare;
  Rational welfare;  // the optimum
};

/// On the complete host the path is the unique optimum below alpha = n/3,
/// the clique above, and both at n/3.
inline CompleteOptimumForm optimum_complete_closed_form(int n, const Alpha& alpha) {
  if (n < 2) throw parameter_error("infeasible parameters: requires n >= 2");
  using constructions::WelfareFamily;
  CompleteOptimumForm f;
  f.path_welfare = constructions::closed_form_sw(WelfareFamily::Path, n, alpha.value());
  f.clique_welfare = constructions::closed_form_sw(WelfareFamily::Clique, n, alpha.value());
  const Rational third(n, 3);
  if (alpha.value() < third) {
    f.kind = CompleteOptimum::Path;
  } else if (alpha.value() > third) {
    f.kind = CompleteOptimum::Clique;
  } else {
    f.kind = CompleteOptimum::Both;
  }
  f.welfare = f.kind == CompleteOptimum::Clique ? f.clique_welfare : f.path_welfare;
  return f;
}

struct StableEntry {
  GameState state;
  Rational welfare;
};

struct EquilibriumAtlas {
  HostPtr host;
  Alpha alpha;
  std::vector<StableEntry> stable_states;  // ascending edge mask
  std::optional<Rational> worst;           // empty when no state is stable
  std::optional<Rational> best;
  std::size_t states_examined = 0;
};

namespace detail {

struct PriceAcc {
  std::int64_t opt = std::numeric_limits<std::int64_t>::min();
  std::int64_t worst = std::numeric_limits<std::int64_t>::max();
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  std::vector<std::pair<std::uint64_t, std::int64_t>> stable;  // filled only when requested
  std::size_t stable_count = 0;
  std::size_t examined = 0;

  void merge(PriceAcc&& o) {
    opt = std::max(opt, o.opt);
    worst = std::min(worst, o.worst);
    best = std::max(best, o.best);
    stable.insert(stable.end(), o.stable.begin(), o.stable.end());
    stable_count += o.stable_count;
    examined += o.examined;
  }
};

inline PriceAcc price_scan(const HostGraph& host, const Alpha& alpha, std::size_t budget, unsigned workers,
                           bool keep_states) {
  return for_each_connected_subset<PriceAcc>(
      host, budget, workers,
      [&](PriceAcc& a, std::uint64_t mask, const EdgeSet& active) {
        ++a.examined;
        Adjacency adj(host, active);
        auto table = all_pairs(adj);
        auto w = scaled_welfare(static_cast<std::size_t>(std::popcount(mask)), table.total, alpha);
        a.opt = std::max(a.opt, w);
        auto scan = scan_improving(host, active, table, alpha, adj, [](const Move&) { return false; });
        if (scan.stopped) return;
        ++a.stable_count;
        a.worst = std::min(a.worst, w);
        a.best = std::max(a.best, w);
        if (keep_states) a.stable.emplace_back(mask, w);
      },
      [](PriceAcc& into, PriceAcc&& from) { into.merge(std::move(from)); });
}

}  // namespace detail

/// The pairwise stable set by exhaustive enumeration. An empty set is a
/// valid result and leaves worst/best unset.
inline EquilibriumAtlas enumerate_stable_states(const HostPtr& host, const Alpha& alpha, std::size_t budget,
                                                unsigned workers = 1) {
  auto acc = detail::price_scan(*host, alpha, budget, workers, true);
  EquilibriumAtlas atlas{host, alpha, {}, std::nullopt, std::nullopt, acc.examined};
  for (const auto& [mask, w] : acc.stable) {
    atlas.stable_states.push_back({GameState(host, EdgeSet::from_mask(host->edge_count(), mask)),
                                   detail::unscale_welfare(w, alpha)});
  }
  if (acc.stable_count > 0) {
    atlas.worst = detail::unscale_welfare(acc.worst, alpha);
    atlas.best = detail::unscale_welfare(acc.best, alpha);
  }
  return atlas;
}

struct PriceReport {
  Rational optimum;
  Rational worst_stable;
  Rational best_stable;
  Rational poa;  // optimum / worst stable
  Rational pos;  // optimum / best stable
  std::size_t stable_count = 0;
  std::size_t states_examined = 0;
};

/// Optimum, worst and best stable welfare in one enumeration pass. Throws
/// no_equilibrium when nothing is stable.
inline PriceReport price_report(const HostPtr& host, const Alpha& alpha, std::size_t budget, unsigned workers = 1) {
  auto acc = detail::price_scan(*host, alpha, budget, workers, false);
  if (acc.stable_count == 0) {
    throw no_equilibrium("no pairwise stable state among " + std::to_string(acc.examined) +
                         " states at alpha " + to_string(alpha));
  }
  PriceReport r;
  r.optimum = detail::unscale_welfare(acc.opt, alpha);
  r.worst_stable = detail::unscale_welfare(acc.worst, alpha);
  r.best_stable = detail::unscale_welfare(acc.best, alpha);
  r.poa = r.optimum / r.worst_stable;
  r.pos = r.optimum / r.best_stable;
  r.stable_count = acc.stable_count;
  r.states_examined = acc.examined;
  return r;
}

inline Rational poa_exact(const HostPtr& host, const Alpha& alpha, std::size_t budget, unsigned workers = 1) {
  return price_report(host, alpha, budget, workers).poa;
}

inline Rational pos_exact(const HostPtr& host, const Alpha& alpha, std::size_t budget, unsigned workers = 1) {
  return price_report(host, alpha, budget, workers).pos;
}

struct ThresholdTable {
  int n = 0;
  Rational third;           // n/3
  Rational half_below;      // (n-1)/2
  Rational half;            // n/2
  Rational n2;              // (n-1)^2/4
  Rational n3;              // (n-2)n(n+2)/24
};

inline ThresholdTable threshold_table(int n) {
  if (n < 3) throw parameter_error("infeasible parameters: requires n >= 3");
  const std::int64_t N = n;
  return {n,
          Rational(N, 3),
          Rational(N - 1, 2),
          Rational(N, 2),
          Rational((N - 1) * (N - 1), 4),
          Rational((N - 2) * N * (N + 2), 24)};
}

struct CycleSearchResult {
  std::optional<DynamicsOutcome> cycle;
  std::size_t steps = 0;          // improving moves followed
  std::size_t states_expanded = 0;
};

/// Depth-first search of the improving-move graph for a directed cycle.
/// The first start state is the whole host, further starts are random
/// connected states drawn from `seed`. A state is expanded at most once, so
/// a cycle through an expanded state would already have been found.
inline CycleSearchResult find_improving_cycle(const HostPtr& host, const Alpha& alpha, std::size_t budget,
                                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto m = host->edge_count();
  // -1: finished, >= 0: index on the current DFS stack
  std::unordered_map<StateKey, std::int64_t, StateKeyHash> mark;
  CycleSearchResult out;

  struct Frame {
    GameState state;
    std::vector<Move> moves;
    std::size_t next = 0;
  };

  auto random_start = [&] {
    EdgeSet active(m);
    for (std::size_t i = 0; i < m; ++i)
      if (rng() & 1U) active.set(i);
    // Random spanning tree on top to guarantee connectivity.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Node> parent(host->node_count());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](Node x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (auto i : order) {
      auto e = host->edge(i);
      Node a = find(e.u), b = find(e.v);
      if (a != b) parent[a] = b, active.set(i);
    }
    return GameState(host, std::move(active));
  };

  // Starts are bounded by the budget so an acyclic game terminates.
  for (std::size_t attempt = 0; out.steps < budget && attempt <= budget; ++attempt) {
    GameState start = attempt == 0 ? GameState::whole(host) : random_start();
    if (mark.count(canonical_key(start))) continue;
    std::vector<Frame> stack;
    auto push = [&](GameState s) {
      mark[canonical_key(s)] = static_cast<std::int64_t>(stack.size());
      auto moves = improving_moves(s, alpha);
      ++out.states_expanded;
      stack.push_back({std::move(s), std::move(moves), 0});
    };
    push(std::move(start));
    while (!stack.empty()) {
      auto& top = stack.back();
      if (top.next == top.moves.size()) {
        mark[canonical_key(top.state)] = -1;
        stack.pop_back();
        continue;
      }
      if (out.steps >= budget) return out;
      const Move move = top.moves[top.next++];
      ++out.steps;
      GameState child = apply_move(top.state, move);
      auto it = mark.find(canonical_key(child));
      if (it == mark.end()) {
        push(std::move(child));
        continue;
      }
      if (it->second < 0) continue;
      DynamicsOutcome cycle{{}, Terminal::Cycle, static_cast<std::size_t>(it->second), child, stack.size()};
      for (const auto& f : stack) cycle.trajectory.push_back({canonical_key(f.state), f.moves[f.next - 1]});
      cycle.trajectory.push_back({canonical_key(child), std::nullopt});
      out.cycle = std::move(cycle);
      return out;
    }
  }
  return out;
}

inline CycleSearchResult find_improving_cycle(int n, const Alpha& alpha, std::size_t budget, std::uint64_t seed) {
  return find_improving_cycle(share(constructions::clique(n)), alpha, budget, seed);
}

struct ApproximationReport {
  Rational sw_opt;
  Rational sw_mrcst;
  Rational sw_smrcst;
  Rational ratio_mrcst;   // SW(OPT) / SW(MRCST)
  Rational ratio_smrcst;  // SW(OPT) / SW(SMRCST)
  Rational ratio_bound;   // m/(n-1) + 1
  std::int64_t smrcst_routing_cost = 0;
  std::size_t seed_path_length = 0;
};

/// Compares the optimum against the exact MRCST and the SMRCST tree and
/// checks SW(OPT)/SW(MRCST) <= m/(n-1) + 1 and 9 d_T(V,V) >= n l^2. A
/// violated inequality throws certificate_failure.
inline ApproximationReport approximation_report(const HostPtr& host, const Alpha& alpha, std::size_t budget) {
  const std::int64_t n = host->node_count();
  const auto m = static_cast<std::int64_t>(host->edge_count());
  auto opt = optimum_exact(host, alpha, budget);
  auto mrcst = mrcst_exact(host, budget);
  auto algo = smrcst(host);
  auto tree_sw = [&](std::int64_t cost) {
    return detail::unscale_welfare(detail::scaled_welfare(static_cast<std::size_t>(n - 1), cost, alpha), alpha);
  };
  ApproximationReport r;
  r.sw_opt = opt.welfare;
  r.sw_mrcst = tree_sw(mrcst.total());
  r.sw_smrcst = tree_sw(algo.routing_cost);
  r.ratio_mrcst = r.sw_opt / r.sw_mrcst;
  r.ratio_smrcst = r.sw_opt / r.sw_smrcst;
  r.ratio_bound = Rational(m, n - 1) + 1;
  r.smrcst_routing_cost = algo.routing_cost;
  r.seed_path_length = algo.seed_path_length;
  if (r.ratio_mrcst > r.ratio_bound) {
    throw certificate_failure("SW(OPT)/SW(MRCST) = " + to_string(r.ratio_mrcst) + " exceeds m/(n-1)+1 = " +
                              to_string(r.ratio_bound));
  }
  const auto l = static_cast<std::int64_t>(algo.seed_path_length);
  if (9 * algo.routing_cost < n * l * l) {
    throw certificate_failure("9 * routing cost " + std::to_string(9 * algo.routing_cost) + " < n * l^2 = " +
                              std::to_string(n * l * l));
  }
  return r;
}

/// Random recursive spanning tree over shuffled labels joined with
/// G(n, p). Edges beyond `max_edges` are dropped, tree edges never.
inline HostGraph random_connected_host(int n, double p, std::mt19937_64& rng,
                                       std::size_t max_edges = std::numeric_limits<std::size_t>::max()) {
  if (n < 2) throw parameter_error("infeasible parameters: requires n >= 2");
  std::vector<Node> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  std::shuffle(labels.begin(), labels.end(), rng);
  std::vector<Edge> edges;
  std::vector<char> used(static_cast<std::size_t>(n) * n, 0);
  auto add = [&](Node a, Node b) {
    Edge e(a, b);
    auto& flag = used[static_cast<std::size_t>(e.u) * n + e.v];
    if (flag) return;
    flag = 1;
    edges.push_back(e);
  };
  for (int i = 1; i < n; ++i) {
    auto j = std::uniform_int_distribution<int>(0, i - 1)(rng);
    add(labels[i], labels[j]);
  }
  std::bernoulli_distribution coin(p);
  std::vector<Edge> extra;
  for (Node a = 0; a < n; ++a)
    for (Node b = a + 1; b < n; ++b)
      if (coin(rng) && !used[static_cast<std::size_t>(a) * n + b]) extra.emplace_back(a, b);
  for (const auto& e : extra) {
    if (edges.size() >= max_edges) break;
    add(e.u, e.v);
  }
  return HostGraph(n, std::move(edges));
}

/// `count` hosts with n drawn uniformly from [n_min, n_max] and density
/// p drawn uniformly from [0.15, 0.6]; deterministic in `seed`.
inline std::vector<HostGraph> random_host_corpus(int n_min, int n_max, std::size_t count, std::uint64_t seed,
                                                 std::size_t max_edges = std::numeric_limits<std::size_t>::max()) {
  if (n_min < 2 || n_max < n_min) throw parameter_error("infeasible parameters: requires 2 <= n_min <= n_max");
  std::mt19937_64 rng(seed);
  std::vector<HostGraph> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    int n = std::uniform_int_distribution<int>(n_min, n_max)(rng);
    double p = std::uniform_real_distribution<double>(0.15, 0.6)(rng);
    out.push_back(random_connected_host(n, p, rng, max_edges));
  }
  return out;
}

struct SweepRow {
  int n = 0;
  std::size_t m = 0;
  Alpha alpha;
  Rational sw_opt;
  std::optional<PriceReport> prices;  // empty when nothing is stable
  std::size_t states_examined = 0;
};

inline SweepRow sweep_row(const HostPtr& host, const Alpha& alpha, std::size_t budget, unsigned workers = 1) {
  auto acc = detail::price_scan(*host, alpha, budget, workers, false);
  SweepRow row{host->node_count(), host->edge_count(), alpha, detail::unscale_welfare(acc.opt, alpha), std::nullopt,
               acc.examined};
  if (acc.stable_count > 0) {
    PriceReport p;
    p.optimum = row.sw_opt;
    p.worst_stable = detail::unscale_welfare(acc.worst, alpha);
    p.best_stable = detail::unscale_welfare(acc.best, alpha);
    p.poa = p.optimum / p.worst_stable;
    p.pos = p.optimum / p.best_stable;
    p.stable_count = acc.stable_count;
    p.states_examined = acc.examined;
    row.prices = p;
  }
  return row;
}

inline constexpr const char* kSweepHeader =
    "n,m,alpha_num,alpha_den,sw_opt,sw_worst_stable,sw_best_stable,poa,pos,stable_count,states_examined,"
    "poa_approx,pos_approx";

/// One CSV line per row. Ratios are reduced fractions with a decimal
/// approximation in the trailing columns; rows without equilibria leave the
/// welfare and ratio fields empty except sw_opt.
inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  char buf[32];
  auto approx = [&](const Rational& r) {
    std::snprintf(buf, sizeof buf, "%.6f", to_double(r));
    return std::string(buf);
  };
  for (const auto& r : rows) {
    out << r.n << ',' << r.m << ',' << r.alpha.num() << ',' << r.alpha.den() << ',';
    out << to_string(r.sw_opt) << ',';
    if (r.prices) {
      const auto& p = *r.prices;
      out << to_string(p.worst_stable) << ',' << to_string(p.best_stable) << ','
          << to_string(p.poa) << ',' << to_string(p.pos) << ',' << p.stable_count << ',' << r.states_examined << ','
          << approx(p.poa) << ',' << approx(p.pos) << '\n';
    } else {
      out << to_string(r.sw_opt) << ",,,,,0," << r.states_examined << ",,\n";
    }
  }
}

}  // namespace sdncg

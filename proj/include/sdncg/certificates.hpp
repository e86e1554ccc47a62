#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sdncg/analysis.hpp"
#include "sdncg/spanning.hpp"

namespace sdncg {

struct CertificateReport {
  std::int64_t routing_cost = 0;
  std::size_t seed_path_length = 0;
  std::int64_t iterations = 0;
  std::int64_t iteration_bound = 0;
  std::size_t swaps_checked = 0;
  std::optional<Rational> ratio;  // SW(OPT)/SW(MRCST), when computed
  std::optional<Rational> ratio_bound;
};

namespace detail {

/// Swap-maximality by brute force: every tree-edge / host-edge exchange that
/// stays connected is rebuilt and measured with plain BFS.
inline std::size_t verify_swap_maximal(const TreeScaffold& t) {
  const auto& host = t.host();
  const auto& active = t.state().active();
  const std::int64_t cost = all_pairs(host, active, AdjacencyMode::ListsOnly).total;
  std::size_t checked = 0;
  for (std::size_t r = 0; r < host.edge_count(); ++r) {
    if (!active.test(r)) continue;
    for (std::size_t a = 0; a < host.edge_count(); ++a) {
      if (active.test(a)) continue;
      EdgeSet next = active;
      next.reset(r);
      next.set(a);
      if (!spans_connected(host, next)) continue;
      ++checked;
      auto swapped = all_pairs(host, next, AdjacencyMode::ListsOnly).total;
      if (swapped > cost) {
        throw certificate_failure("swap-maximality: exchanging " + to_string(host.edge(r)) + " for " +
                                  to_string(host.edge(a)) + " raises routing cost " + std::to_string(cost) +
                                  " to " + std::to_string(swapped));
      }
    }
  }
  return checked;
}

}  // namespace detail

/// Re-checks an SMRCST result: iteration bound, 9 d_T(V,V) >= n l^2,
/// swap-maximality by exhaustive post-scan and, when alpha is given and the
/// host fits `budget`, SW(OPT)/SW(MRCST) <= m/(n-1) + 1. Any violation
/// throws certificate_failure naming the inequality.
inline CertificateReport smrcst_certificates(const SmrcstResult& result, const HostPtr& host,
                                             std::optional<Alpha> alpha = std::nullopt,
                                             std::size_t budget = std::size_t{1} << 20) {
  if (!(result.tree.host() == *host)) throw certificate_failure("result tree belongs to a different host");
  const std::int64_t n = host->node_count();
  CertificateReport r;
  r.routing_cost = result.routing_cost;
  r.seed_path_length = result.seed_path_length;
  r.iterations = result.iterations;
  r.iteration_bound = smrcst_iteration_bound(host->node_count());

  if (r.iterations > r.iteration_bound) {
    throw certificate_failure("iterations " + std::to_string(r.iterations) + " > (n-1)n(n+1)/3 = " +
                              std::to_string(r.iteration_bound));
  }
  if (routing_cost(result.tree.state()) != result.routing_cost) {
    throw certificate_failure("reported routing cost " + std::to_string(result.routing_cost) +
                              " does not match the tree");
  }
  const auto l = static_cast<std::int64_t>(result.seed_path_length);
  if (9 * result.routing_cost < n * l * l) {
    throw certificate_failure("9 * routing cost " + std::to_string(9 * result.routing_cost) + " < n * l^2 = " +
                              std::to_string(n * l * l));
  }
  r.swaps_checked = detail::verify_swap_maximal(result.tree);

  if (alpha && host->edge_count() <= detail::kMaxSubsetEdges &&
      (std::uint64_t{1} << host->edge_count()) <= budget && spanning_tree_count(*host) <= budget) {
    auto report = approximation_report(host, *alpha, budget);
    r.ratio = report.ratio_mrcst;
    r.ratio_bound = report.ratio_bound;
  }
  return r;
}

}  // namespace sdncg

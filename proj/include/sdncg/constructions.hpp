#pragma once

#include <bit>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdncg/graph.hpp"
#include "sdncg/rational.hpp"

namespace sdncg::constructions {

// Every generator is deterministic. Cliques occupy contiguous label ranges
// in construction order; the per-family layout is documented on each
// generator.

namespace detail {

struct Builder {
  int n = 0;
  std::vector<Edge> edges;

  // [first, first + size)
  void clique(int first, int size) {
    for (int a = first; a < first + size; ++a)
      for (int b = a + 1; b < first + size; ++b) edges.emplace_back(a, b);
  }
  void join(int first_a, int size_a, int first_b, int size_b) {
    for (int a = first_a; a < first_a + size_a; ++a)
      for (int b = first_b; b < first_b + size_b; ++b) edges.emplace_back(a, b);
  }
  HostGraph build() { return HostGraph(n, std::move(edges)); }
};

inline void require(bool ok, const std::string& constraint) {
  if (!ok) throw parameter_error("infeasible parameters: requires " + constraint);
}

inline std::int64_t ceil(const Rational& r) {
  auto q = r.numerator() / r.denominator();
  return q * r.denominator() < r.numerator() ? q + 1 : q;
}

}  // namespace detail

/// 0 - 1 - ... - (n-1).
inline HostGraph path(int n) {
  detail::require(n >= 2, "n >= 2");
  detail::Builder b{n, {}};
  for (int i = 0; i + 1 < n; ++i) b.edges.emplace_back(i, i + 1);
  return b.build();
}

inline HostGraph cycle(int n) {
  detail::require(n >= 3, "n >= 3");
  detail::Builder b{n, {}};
  for (int i = 0; i < n; ++i) b.edges.emplace_back(i, (i + 1) % n);
  return b.build();
}

/// Center 0, leaves 1..n-1.
inline HostGraph star(int n) {
  detail::require(n >= 2, "n >= 2");
  detail::Builder b{n, {}};
  for (int i = 1; i < n; ++i) b.edges.emplace_back(0, i);
  return b.build();
}

inline HostGraph clique(int n) {
  detail::require(n >= 2, "n >= 2");
  detail::Builder b{n, {}};
  b.clique(0, n);
  return b.build();
}

/// Nodes are d-bit labels; edges join labels at Hamming distance 1.
inline HostGraph hypercube(int d) {
  detail::require(d >= 1 && d <= 20, "1 <= d <= 20");
  detail::Builder b{1 << d, {}};
  for (int x = 0; x < b.n; ++x)
    for (int bit = 0; bit < d; ++bit)
      if (int y = x ^ (1 << bit); x < y) b.edges.emplace_back(x, y);
  return b.build();
}

/// Path on labels 0..n-k-1 whose last node n-k-1 is joined to the first c
/// clique nodes; the clique occupies n-k..n-1. k = 0 gives P_n, k = n gives
/// K_n, and c is ignored in both cases.
inline HostGraph path_clique(int n, int k, int c) {
  detail::require(n >= 2, "n >= 2");
  detail::require(k >= 0 && k <= n, "0 <= k <= n");
  if (k == 0) return path(n);
  if (k == n) return clique(n);
  detail::require(c >= 2 && c <= k, "2 <= c <= k when 0 < k < n");
  const int tail = n - k - 1;
  detail::Builder b{n, {}};
  for (int i = 0; i < tail; ++i) b.edges.emplace_back(i, i + 1);
  b.clique(n - k, k);
  for (int j = 0; j < c; ++j) b.edges.emplace_back(tail, n - k + j);
  return b.build();
}

/// Base node i becomes a clique of sizes[i] nodes (labels in base order);
/// adjacent base nodes become completely joined cliques.
inline HostGraph clique_network(const HostGraph& base, const std::vector<int>& sizes) {
  detail::require(sizes.size() == static_cast<std::size_t>(base.node_count()), "one size per base node");
  std::vector<int> first(sizes.size() + 1, 0);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    detail::require(sizes[i] >= 2, "every clique size >= 2");
    first[i + 1] = first[i] + sizes[i];
  }
  detail::Builder b{first.back(), {}};
  for (std::size_t i = 0; i < sizes.size(); ++i) b.clique(first[i], sizes[i]);
  for (const auto& e : base.edges()) b.join(first[e.u], sizes[e.u], first[e.v], sizes[e.v]);
  return b.build();
}

struct StarOfCliquesLayout {
  int c = 0;            // ceil(alpha) + 2
  int d = 0;            // number of rays
  int outer_size = 0;   // |K_i| = c - 2
  int center_size = 0;  // |M| = n - c d
  // Ray i occupies [i*c, (i+1)*c): K_i first, then v_i, v_i'. M follows.
  Node ray_first(int i) const { return i * c; }
  Node v(int i) const { return i * c + outer_size; }
  Node v_prime(int i) const { return i * c + outer_size + 1; }
  Node center_first() const { return d * c; }
};

inline StarOfCliquesLayout star_of_cliques_layout(int n, const Rational& alpha) {
  detail::require(alpha > Rational(1), "alpha > 1");
  detail::require(alpha * alpha <= Rational(n), "alpha <= sqrt(n)");
  StarOfCliquesLayout l;
  l.c = static_cast<int>(detail::ceil(alpha)) + 2;
  l.d = (n - 2) / l.c;
  l.outer_size = l.c - 2;
  l.center_size = n - l.c * l.d;
  detail::require(l.d >= 1, "d = floor((n-2)/c) >= 1");
  detail::require(l.center_size >= 2, "|M| >= 2");
  return l;
}

/// Star-like clique network: d rays K_i - {v_i, v_i'} - M. Each K_i is fully
/// joined to v_i and v_i', {v_i, v_i'} is an edge, and v_i, v_i' are fully
/// joined to the center clique M.
inline HostGraph star_of_cliques(int n, const Rational& alpha) {
  auto l = star_of_cliques_layout(n, alpha);
  detail::Builder b{n, {}};
  b.clique(l.center_first(), l.center_size);
  for (int i = 0; i < l.d; ++i) {
    b.clique(l.ray_first(i), l.outer_size);
    b.edges.emplace_back(l.v(i), l.v_prime(i));
    b.join(l.ray_first(i), l.outer_size, l.v(i), 2);
    b.join(l.v(i), 2, l.center_first(), l.center_size);
  }
  return b.build();
}

/// Dimension floor(log2 n) - 1 and balanced clique sizes; the remainder
/// goes to the lowest hypercube labels first.
inline std::vector<int> hypercube_clique_sizes(int n) {
  detail::require(n >= 8, "n >= 8");
  const int d = std::bit_width(static_cast<unsigned>(n)) - 2;
  const int cells = 1 << d;
  std::vector<int> sizes(cells, n / cells);
  for (int i = 0; i < n % cells; ++i) ++sizes[i];
  return sizes;
}

inline HostGraph hypercube_clique_network(int n) {
  auto sizes = hypercube_clique_sizes(n);
  return clique_network(hypercube(std::countr_zero(sizes.size())), sizes);
}

struct PathOfCliquesLayout {
  int d = 0;
  int c = 0;                    // floor((n-6)/d)
  std::vector<int> clique_sizes;  // K_1..K_d
  std::vector<Node> clique_first;
  // Labels: K_1..K_{d/2}, then v1, v1', v2, v2', v3, v3', then K_{d/2+1}..K_d.
  Node v1 = 0, v1p = 0, v2 = 0, v2p = 0, v3 = 0, v3p = 0;
};

/// Each half of the path carries the prescribed half-sum of clique sizes;
/// the +1 cliques sit next to the middle gadget.
inline PathOfCliquesLayout path_of_cliques_layout(int n, int d) {
  detail::require(d >= 2 && d % 2 == 0, "d even and >= 2");
  detail::require(2 * d <= n - 6, "d <= (n-6)/2");
  PathOfCliquesLayout l;
  l.d = d;
  l.c = (n - 6) / d;
  const int half = d / 2;
  const int first_sum = (n - 6 + 1) / 2;
  const int second_sum = (n - 6) / 2;
  l.clique_sizes.assign(d, 0);
  for (int i = 0; i < half; ++i) {
    // i counts outward from the middle
    l.clique_sizes[half - 1 - i] = first_sum / half + (i < first_sum % half ? 1 : 0);
    l.clique_sizes[half + i] = second_sum / half + (i < second_sum % half ? 1 : 0);
  }
  for (int s : l.clique_sizes) detail::require(s == l.c || s == l.c + 1, "clique sizes in {c, c+1}");
  Node next = 0;
  l.clique_first.assign(d, 0);
  for (int i = 0; i < half; ++i) l.clique_first[i] = next, next += l.clique_sizes[i];
  l.v1 = next, l.v1p = next + 1, l.v2 = next + 2, l.v2p = next + 3, l.v3 = next + 4, l.v3p = next + 5;
  next += 6;
  for (int i = half; i < d; ++i) l.clique_first[i] = next, next += l.clique_sizes[i];
  return l;
}

/// Path of d cliques with the six-node gadget v1,v1',v2,v2',v3,v3' in the
/// middle. Consecutive cliques on each side are completely joined,
/// K_{d/2} is joined to v1,v1' and K_{d/2+1} to v3,v3'; each pair is an
/// edge and v2,v2' are joined to all of v1,v1',v3,v3'.
inline HostGraph path_of_cliques(int n, int d) {
  auto l = path_of_cliques_layout(n, d);
  const int half = d / 2;
  detail::Builder b{n, {}};
  for (int i = 0; i < d; ++i) b.clique(l.clique_first[i], l.clique_sizes[i]);
  b.clique(l.v1, 2);
  b.clique(l.v2, 2);
  b.clique(l.v3, 2);
  b.join(l.v2, 2, l.v1, 2);
  b.join(l.v2, 2, l.v3, 2);
  for (int i = 0; i + 1 < half; ++i) {
    b.join(l.clique_first[i], l.clique_sizes[i], l.clique_first[i + 1], l.clique_sizes[i + 1]);
  }
  for (int i = half; i + 1 < d; ++i) {
    b.join(l.clique_first[i], l.clique_sizes[i], l.clique_first[i + 1], l.clique_sizes[i + 1]);
  }
  b.join(l.clique_first[half - 1], l.clique_sizes[half - 1], l.v1, 2);
  b.join(l.clique_first[half], l.clique_sizes[half], l.v3, 2);
  return b.build();
}

/// Wheel on floor(n/2) nodes: hub 0, rim cycle 1..n'-1.
inline HostGraph wheel(int spokes_plus_hub) {
  detail::require(spokes_plus_hub >= 4, "wheel with at least 4 nodes");
  const int w = spokes_plus_hub;
  detail::Builder b{w, {}};
  for (int i = 1; i < w; ++i) {
    b.edges.emplace_back(0, i);
    b.edges.emplace_back(i, i + 1 < w ? i + 1 : 1);
  }
  return b.build();
}

/// Clique network of the wheel on floor(n/2) nodes with every clique of
/// size 2, the hub clique of size 3 when n is odd. The hub clique takes
/// labels 0..1 (0..2), rim cliques follow in rim order.
inline HostGraph wheel_clique_network(int n) {
  detail::require(n >= 8, "n >= 8");
  const int w = n / 2;
  std::vector<int> sizes(w, 2);
  if (n % 2 == 1) sizes[0] = 3;
  return clique_network(wheel(w), sizes);
}

enum class WelfareFamily { Path, Clique, CycleOdd, CycleEven, Star };

/// Social welfare of the named family on n nodes by formula:
///   path       2a(n-1) + (n-1)n(n+1)/3
///   clique     n(n-1)(a+1)
///   odd cycle  2an + (n-1)n(n+1)/4
///   even cycle 2an + (n-2)n^2/4 + n^2/2
///   star       2a(n-1) + 2(n-1)^2
inline Rational closed_form_sw(WelfareFamily family, int n, const Rational& alpha) {
  detail::require(n >= 2, "n >= 2");
  const Rational N(n);
  switch (family) {
    case WelfareFamily::Path:
      return 2 * alpha * (N - 1) + (N - 1) * N * (N + 1) / 3;
    case WelfareFamily::Clique:
      return N * (N - 1) * (alpha + 1);
    case WelfareFamily::CycleOdd:
      detail::require(n >= 3 && n % 2 == 1, "odd n >= 3");
      return 2 * alpha * N + (N - 1) * N * (N + 1) / 4;
    case WelfareFamily::CycleEven:
      detail::require(n >= 4 && n % 2 == 0, "even n >= 4");
      return 2 * alpha * N + (N - 2) * N * N / 4 + N * N / 2;
    case WelfareFamily::Star:
      return 2 * alpha * (N - 1) + 2 * (N - 1) * (N - 1);
  }
  throw parameter_error("unknown welfare family");
}

enum class Family {
  Path,
  Cycle,
  Star,
  Clique,
  Hypercube,
  PathClique,
  CliqueNetwork,
  StarOfCliques,
  HypercubeCliqueNetwork,
  PathOfCliques,
  WheelCliqueNetwork
};

inline constexpr std::pair<Family, std::string_view> kFamilyNames[] = {
    {Family::Path, "path"},
    {Family::Cycle, "cycle"},
    {Family::Star, "star"},
    {Family::Clique, "clique"},
    {Family::Hypercube, "hypercube"},
    {Family::PathClique, "path-clique"},
    {Family::CliqueNetwork, "clique-network"},
    {Family::StarOfCliques, "star-of-cliques"},
    {Family::HypercubeCliqueNetwork, "hypercube-clique-network"},
    {Family::PathOfCliques, "path-of-cliques"},
    {Family::WheelCliqueNetwork, "wheel-clique-network"},
};

inline std::optional<Family> parse_family(std::string_view name) {
  for (const auto& [family, text] : kFamilyNames)
    if (text == name) return family;
  return std::nullopt;
}

inline std::string_view to_string(Family family) {
  for (const auto& [f, text] : kFamilyNames)
    if (f == family) return text;
  return "?";
}

/// Family plus the parameters it reads: n (most families), d (hypercube,
/// path-of-cliques), k and c (path-clique), alpha (star-of-cliques), base
/// and sizes (clique-network).
struct ConstructionSpec {
  Family family = Family::Path;
  int n = 0;
  int d = 0;
  int k = 0;
  int c = 0;
  std::optional<Rational> alpha;
  std::optional<HostGraph> base;
  std::vector<int> sizes;
};

inline HostGraph build(const ConstructionSpec& spec) {
  switch (spec.family) {
    case Family::Path: return path(spec.n);
    case Family::Cycle: return cycle(spec.n);
    case Family::Star: return star(spec.n);
    case Family::Clique: return clique(spec.n);
    case Family::Hypercube: return hypercube(spec.d);
    case Family::PathClique: return path_clique(spec.n, spec.k, spec.c);
    case Family::CliqueNetwork:
      detail::require(spec.base.has_value(), "a base graph");
      return clique_network(*spec.base, spec.sizes);
    case Family::StarOfCliques:
      detail::require(spec.alpha.has_value(), "alpha");
      return star_of_cliques(spec.n, *spec.alpha);
    case Family::HypercubeCliqueNetwork: return hypercube_clique_network(spec.n);
    case Family::PathOfCliques: return path_of_cliques(spec.n, spec.d);
    case Family::WheelCliqueNetwork: return wheel_clique_network(spec.n);
  }
  throw parameter_error("unknown family");
}

}  // namespace sdncg::constructions

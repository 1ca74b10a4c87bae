#pragma once

// Fixtures and brute-force oracles shared by the unit and acceptance suites.
// The oracles work on dense matrices built from the edge list only, and do
// not call into the traversal, ranking or modularity code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "depnet/community.hpp"
#include "depnet/graph.hpp"
#include "depnet/random.hpp"
#include "depnet/registry.hpp"

namespace depnet::testing {

// A, B, C, D with A->B, C->B, B->D. Label order gives A=0 B=1 C=2 D=3.
inline DependencyGraph g1() {
  const std::vector<LabeledEdge> edges{{"A", "B"}, {"C", "B"}, {"B", "D"}};
  return build_graph(edges);
}

inline DependencyGraph labeled(const std::vector<std::pair<std::string, std::string>>& pairs,
                               std::optional<std::vector<std::string>> labels = std::nullopt) {
  std::vector<LabeledEdge> edges;
  for (const auto& [s, t] : pairs) edges.push_back({s, t});
  return build_graph(edges, std::move(labels));
}

inline std::vector<NodeId> ids(const DependencyGraph& g, const std::vector<std::string>& names) {
  std::vector<NodeId> out;
  for (const auto& n : names) out.push_back(*g.find(n));
  std::sort(out.begin(), out.end());
  return out;
}

/// Random simple digraph (not via the library generator) for oracle sweeps.
inline DependencyGraph random_digraph(std::size_t n, double density, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u != v && static_cast<double>(uniform_below(rng, 1'000'000)) < density * 1e6) edges.push_back({u, v});
    }
  }
  return build_graph(n, edges);
}

using Matrix = std::vector<std::vector<std::uint8_t>>;

inline Matrix adjacency_matrix(const DependencyGraph& g) {
  Matrix a(g.node_count(), std::vector<std::uint8_t>(g.node_count(), 0));
  for (const Edge& e : g.edges()) a[e.source][e.target] = 1;
  return a;
}

/// reach[u][v] = 1 iff there is a directed path of length >= 1 from u to v
/// (Warshall's algorithm).
inline Matrix transitive_closure(Matrix reach) {
  const std::size_t n = reach.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = 1;
  return reach;
}

/// Cascade simulator that recomputes the full closure of the surviving
/// subgraph before every step. Returns the removed set of each step, sorted.
inline std::vector<std::vector<NodeId>> brute_force_cascade(const DependencyGraph& g,
                                                            const std::vector<NodeId>& order,
                                                            std::size_t target_budget) {
  const std::size_t n = g.node_count();
  const Matrix full = adjacency_matrix(g);
  std::vector<bool> alive(n, true);
  std::vector<std::vector<NodeId>> steps;
  for (NodeId target : order) {
    if (steps.size() >= target_budget) break;
    if (std::none_of(alive.begin(), alive.end(), [](bool a) { return a; })) break;
    if (!alive[target]) continue;
    Matrix sub(n, std::vector<std::uint8_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sub[i][j] = alive[i] && alive[j] && full[i][j];
    const Matrix reach = transitive_closure(sub);
    std::vector<NodeId> removed{target};
    for (NodeId u = 0; u < n; ++u) {
      if (u != target && alive[u] && reach[u][target]) removed.push_back(u);
    }
    for (NodeId u : removed) alive[u] = false;
    std::sort(removed.begin(), removed.end());
    steps.push_back(removed);
  }
  return steps;
}

/// PageRank by power iteration on the explicit n x n Google matrix.
inline std::vector<double> dense_pagerank(const DependencyGraph& g, double damping = 0.85) {
  const std::size_t n = g.node_count();
  const Matrix a = adjacency_matrix(g);
  std::vector<std::vector<double>> google(n, std::vector<double>(n, 0.0));
  for (std::size_t u = 0; u < n; ++u) {
    const double out = std::accumulate(a[u].begin(), a[u].end(), 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      const double walk = out == 0.0 ? 1.0 / static_cast<double>(n) : a[u][v] / out;
      google[v][u] = damping * walk + (1.0 - damping) / static_cast<double>(n);
    }
  }
  std::vector<double> p(n, 1.0 / static_cast<double>(n)), q(n);
  for (int it = 0; it < 5000; ++it) {
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      q[v] = 0.0;
      for (std::size_t u = 0; u < n; ++u) q[v] += google[v][u] * p[u];
      change += std::abs(q[v] - p[v]);
    }
    p.swap(q);
    if (change < 1e-15) break;
  }
  return p;
}

/// Component labels from BFS over the symmetric adjacency matrix; labels
/// numbered by smallest member.
inline std::vector<std::uint32_t> naive_components(const DependencyGraph& g) {
  const Matrix a = adjacency_matrix(g);
  const std::size_t n = a.size();
  std::vector<std::uint32_t> label(n, UINT32_MAX);
  std::uint32_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != UINT32_MAX) continue;
    std::vector<std::size_t> queue{s};
    label[s] = next;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      for (std::size_t v = 0; v < n; ++v) {
        if ((a[queue[h]][v] || a[v][queue[h]]) && label[v] == UINT32_MAX) {
          label[v] = next;
          queue.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

/// Canonical form of a partition: relabel by first appearance.
inline std::vector<std::uint32_t> canonical(std::vector<std::uint32_t> labels) {
  std::vector<std::uint32_t> remap(labels.size() + 1, UINT32_MAX);
  std::uint32_t next = 0;
  for (auto& c : labels) {
    if (remap[c] == UINT32_MAX) remap[c] = next++;
    c = remap[c];
  }
  return labels;
}

/// Modularity from the textbook double sum over node pairs.
inline double dense_modularity(const UndirectedGraph& g, const std::vector<std::uint32_t>& community,
                               double resolution = 1.0) {
  const std::size_t n = g.node_count();
  double two_m = 0.0;
  std::vector<double> k(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) k[i] += (i == j ? 2.0 : 1.0) * g.weight(i, j);
    two_m += k[i];
  }
  if (two_m == 0.0) return 0.0;
  double q = 0.0;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (community[i] == community[j]) {
        const double a = (i == j ? 2.0 : 1.0) * g.weight(i, j);
        q += a - resolution * k[i] * k[j] / two_m;
      }
  return q / two_m;
}

struct ExhaustiveOptimum {
  double modularity = -1.0;
  std::vector<std::vector<std::uint32_t>> partitions;  ///< all optimal partitions, canonical
};

/// Enumerates every set partition (restricted growth strings) and keeps the
/// ones with maximum modularity. Practical up to ~12 nodes.
inline ExhaustiveOptimum exhaustive_modularity(const UndirectedGraph& g, double resolution = 1.0) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) a[i][j] = (i == j ? 2.0 : 1.0) * g.weight(i, j);
    k[i] = std::accumulate(a[i].begin(), a[i].end(), 0.0);
    two_m += k[i];
  }
  ExhaustiveOptimum best;
  std::vector<std::uint32_t> assign(n, 0);
  std::vector<double> internal(n + 1, 0.0), total(n + 1, 0.0);
  std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t used) {
    if (i == n) {
      double q = 0.0;
      for (std::uint32_t c = 0; c < used; ++c) q += internal[c] / two_m - resolution * (total[c] / two_m) * (total[c] / two_m);
      if (q > best.modularity + 1e-12) {
        best.modularity = q;
        best.partitions.assign(1, assign);
      } else if (std::abs(q - best.modularity) <= 1e-12) {
        best.partitions.push_back(assign);
      }
      return;
    }
    for (std::uint32_t c = 0; c <= used && c < n; ++c) {
      double added = a[i][i];
      for (std::size_t j = 0; j < i; ++j)
        if (assign[j] == c) added += 2.0 * a[i][j];
      assign[i] = c;
      internal[c] += added;
      total[c] += k[i];
      rec(i + 1, c == used ? used + 1 : used);
      internal[c] -= added;
      total[c] -= k[i];
    }
  };
  if (two_m == 0.0) {
    best.modularity = 0.0;
    return best;
  }
  rec(0, 0);
  return best;
}

/// Two cliques of sizes `a` and `b` joined by `bridges` edges (bridges <= min(a, b)).
inline UndirectedGraph two_cliques(std::size_t a, std::size_t b, std::size_t bridges) {
  std::vector<WeightedEdge> edges;
  for (NodeId i = 0; i < a; ++i)
    for (NodeId j = i + 1; j < a; ++j) edges.push_back({i, j, 1.0});
  for (NodeId i = 0; i < b; ++i)
    for (NodeId j = i + 1; j < b; ++j) edges.push_back({static_cast<NodeId>(a + i), static_cast<NodeId>(a + j), 1.0});
  for (NodeId i = 0; i < bridges; ++i) edges.push_back({i, static_cast<NodeId>(a + i), 1.0});
  return UndirectedGraph::from_edges(a + b, edges);
}

inline Timestamp at(std::string_view iso) { return *parse_timestamp(iso); }

/// P has 1.0.0 (2013-05, deps {Q}) and 2.0.0 (2015-03, deps {Q, R});
/// Q and R have a single dependency-free release in 2012.
inline std::vector<PackageRecord> pqr_corpus() {
  return {
      {"P", {{"1.0.0", at("2013-05-01"), {"Q"}}, {"2.0.0", at("2015-03-01"), {"Q", "R"}}}},
      {"Q", {{"1.0.0", at("2012-02-01"), {}}}},
      {"R", {{"1.0.0", at("2012-06-01"), {}}}},
  };
}

/// Name-sorted random corpus: packages p000.., release times spread over
/// 2010-2021, dependencies on arbitrary names including a few that do not
/// exist.
inline std::vector<PackageRecord> random_corpus(std::size_t packages, std::uint64_t seed) {
  Rng rng(seed);
  const auto base = at("2010-01-01");
  const std::uint64_t span_ms = 12ull * 365 * 24 * 3600 * 1000;
  auto name = [](std::size_t i) {
    std::string s = std::to_string(i);
    return "p" + std::string(4 - std::min<std::size_t>(4, s.size()), '0') + s;
  };
  std::vector<PackageRecord> out;
  for (std::size_t i = 0; i < packages; ++i) {
    PackageRecord r{name(i), {}};
    const std::size_t versions = uniform_below(rng, 4);
    for (std::size_t v = 0; v < versions; ++v) {
      VersionEntry e{std::to_string(v) + ".0.0", base + std::chrono::milliseconds(uniform_below(rng, span_ms)), {}};
      const std::size_t deps = uniform_below(rng, 4);
      for (std::size_t d = 0; d < deps; ++d) e.dependency_names.push_back(name(uniform_below(rng, packages + 3)));
      std::sort(e.dependency_names.begin(), e.dependency_names.end());
      e.dependency_names.erase(std::unique(e.dependency_names.begin(), e.dependency_names.end()), e.dependency_names.end());
      r.versions.push_back(std::move(e));
    }
    std::sort(r.versions.begin(), r.versions.end(), [](const VersionEntry& a, const VersionEntry& b) {
      return std::tie(a.release_time, a.version) < std::tie(b.release_time, b.version);
    });
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace depnet::testing

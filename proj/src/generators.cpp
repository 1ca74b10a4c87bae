#include "depnet/generators.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "depnet/random.hpp"

namespace depnet {

namespace {

// Directed non-loop edges of an n-node graph are numbered 0 .. n(n-1)-1.
Edge decode_edge(std::uint64_t code, std::uint64_t n) {
  const auto u = static_cast<NodeId>(code / (n - 1));
  auto v = static_cast<NodeId>(code % (n - 1));
  if (v >= u) ++v;
  return {u, v};
}

std::unordered_set<std::uint64_t> sample_codes(Rng& rng, std::uint64_t universe, std::uint64_t count) {
  std::unordered_set<std::uint64_t> picked;
  picked.reserve(count * 2);
  while (picked.size() < count) picked.insert(uniform_below(rng, universe));
  return picked;
}

}  // namespace

DependencyGraph gnm_random(const GnmConfig& config) {
  const std::uint64_t n = config.node_count;
  const std::uint64_t m = config.edge_count;
  if (n < 1) throw std::invalid_argument("gnm_random: node_count must be >= 1");
  const std::uint64_t universe = n * (n - 1);
  if (m > universe) {
    throw std::invalid_argument("gnm_random: edge_count " + std::to_string(m) + " exceeds n(n-1) = " +
                                std::to_string(universe));
  }

  Rng rng(config.seed);
  std::vector<std::uint64_t> codes;
  codes.reserve(m);
  if (m <= universe / 2) {
    const auto picked = sample_codes(rng, universe, m);
    codes.assign(picked.begin(), picked.end());
  } else {
    // Dense request: draw the edges to leave out instead.
    const auto excluded = sample_codes(rng, universe, universe - m);
    for (std::uint64_t c = 0; c < universe; ++c) {
      if (!excluded.contains(c)) codes.push_back(c);
    }
  }
  std::sort(codes.begin(), codes.end());

  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t c : codes) edges.push_back(decode_edge(c, n));
  return build_graph(n, edges);
}

DependencyGraph preferential_attachment(const PreferentialAttachmentConfig& config) {
  const std::size_t n = config.node_count;
  const std::size_t k = config.edges_per_node;
  if (k < 1) throw std::invalid_argument("preferential_attachment: edges_per_node must be >= 1");
  if (n <= k) {
    throw std::invalid_argument("preferential_attachment: node_count must exceed edges_per_node");
  }

  Rng rng(config.seed);
  // Node j appears (in-degree(j) + 1) times, so a uniform pick from this
  // pool is a pick proportional to in-degree + 1.
  std::vector<NodeId> pool;
  pool.reserve(n + (n - 1) * k);
  pool.push_back(0);

  std::vector<Edge> edges;
  edges.reserve((n - 1) * k);
  std::vector<NodeId> chosen;
  for (NodeId node = 1; node < n; ++node) {
    chosen.clear();
    if (node <= k) {
      for (NodeId t = 0; t < node; ++t) chosen.push_back(t);
    } else {
      const std::size_t pool_size = pool.size();
      while (chosen.size() < k) {
        const NodeId t = pool[uniform_below(rng, pool_size)];
        if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
      }
    }
    for (NodeId t : chosen) {
      edges.push_back({node, t});
      pool.push_back(t);
    }
    pool.push_back(node);
  }
  return build_graph(n, edges);
}

}  // namespace depnet

#include "depnet/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "depnet/error.hpp"
#include "depnet/parallel.hpp"
#include "depnet/random.hpp"

namespace depnet {

namespace {

// Reductions are summed per fixed-size block and the block sums are added in
// order, so the result is independent of how blocks map to threads.
constexpr std::size_t kBlock = 4096;

template <class Fn>
double blocked_sum(std::size_t n, unsigned threads, Fn&& term) {
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  parallel_for(blocks, threads, [&](std::size_t b) {
    double s = 0.0;
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) s += term(i);
    partial[b] = s;
  });
  return std::accumulate(partial.begin(), partial.end(), 0.0);
}

}  // namespace

PageRankResult pagerank(const DependencyGraph& g, const PageRankConfig& config) {
  const std::size_t n = g.node_count();
  if (n == 0) throw EmptyInputError("pagerank of an empty graph");
  if (!(config.damping > 0.0 && config.damping < 1.0)) throw std::invalid_argument("pagerank: damping must be in (0, 1)");
  if (!(config.tolerance > 0.0)) throw std::invalid_argument("pagerank: tolerance must be positive");
  if (config.max_iterations < 1) throw std::invalid_argument("pagerank: max_iterations must be >= 1");

  const double inv_n = 1.0 / static_cast<double>(n);
  PageRankResult result;
  result.scores.assign(n, inv_n);
  if (g.edge_count() == 0) {
    // Every node is dangling; the uniform vector is the fixed point.
    result.converged = true;
    return result;
  }

  std::vector<double> share(n);  // rank each node passes to each dependency
  std::vector<double> next(n);
  const double d = config.damping;
  const unsigned threads = config.threads;
  auto& rank = result.scores;

  for (int it = 1; it <= config.max_iterations; ++it) {
    const double dangling = blocked_sum(n, threads, [&](std::size_t u) {
      return g.out_degree(static_cast<NodeId>(u)) == 0 ? rank[u] : 0.0;
    });
    parallel_for((n + kBlock - 1) / kBlock, threads, [&](std::size_t b) {
      const std::size_t end = std::min(n, (b + 1) * kBlock);
      for (std::size_t u = b * kBlock; u < end; ++u) {
        const auto deg = g.out_degree(static_cast<NodeId>(u));
        share[u] = deg == 0 ? 0.0 : rank[u] / static_cast<double>(deg);
      }
    });
    const double base = (1.0 - d) * inv_n + d * dangling * inv_n;
    parallel_for((n + kBlock - 1) / kBlock, threads, [&](std::size_t b) {
      const std::size_t end = std::min(n, (b + 1) * kBlock);
      for (std::size_t v = b * kBlock; v < end; ++v) {
        double inflow = 0.0;
        for (NodeId u : g.dependents(static_cast<NodeId>(v))) inflow += share[u];
        next[v] = base + d * inflow;
      }
    });
    const double change = blocked_sum(n, threads, [&](std::size_t v) { return std::abs(next[v] - rank[v]); });
    rank.swap(next);
    result.iterations = it;
    if (change < config.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::random: return "random";
    case Strategy::hub: return "hub";
    case Strategy::pagerank: return "pagerank";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  if (name == "random") return Strategy::random;
  if (name == "hub") return Strategy::hub;
  if (name == "pagerank") return Strategy::pagerank;
  return std::nullopt;
}

std::vector<NodeId> order_by_score(const std::vector<double>& scores) {
  std::vector<NodeId> order(scores.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  return order;
}

RankedList rank_nodes(const DependencyGraph& g, Strategy strategy, std::uint64_t seed,
                      const PageRankConfig& pagerank_config) {
  RankedList ranked;
  ranked.strategy = strategy;
  const std::size_t n = g.node_count();
  switch (strategy) {
    case Strategy::random: {
      ranked.order.resize(n);
      std::iota(ranked.order.begin(), ranked.order.end(), NodeId{0});
      Rng rng(seed);
      shuffle(std::span<NodeId>(ranked.order), rng);
      break;
    }
    case Strategy::hub: {
      ranked.scores.resize(n);
      for (NodeId v = 0; v < n; ++v) ranked.scores[v] = static_cast<double>(g.in_degree(v));
      ranked.order = order_by_score(ranked.scores);
      break;
    }
    case Strategy::pagerank: {
      if (n == 0) break;
      ranked.scores = pagerank(g, pagerank_config).scores;
      ranked.order = order_by_score(ranked.scores);
      break;
    }
  }
  return ranked;
}

}  // namespace depnet

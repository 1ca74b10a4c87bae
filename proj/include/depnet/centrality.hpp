#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "depnet/graph.hpp"

namespace depnet {

struct PageRankConfig {
  double damping = 0.85;
  double tolerance = 1e-10;  ///< stop once the L1 change of an iteration drops below this
  int max_iterations = 200;
  unsigned threads = 1;
};

struct PageRankResult {
  std::vector<double> scores;
  int iterations = 0;
  bool converged = false;
};

/// PageRank with rank flowing along out-edges, from a package to the
/// packages it depends on, so heavily depended-on packages score high.
/// Nodes without dependencies spread their rank uniformly. The result does
/// not depend on `config.threads`.
PageRankResult pagerank(const DependencyGraph& g, const PageRankConfig& config = {});

enum class Strategy { random, hub, pagerank };

std::string_view to_string(Strategy s);
/// Accepts "random", "hub", "pagerank".
std::optional<Strategy> parse_strategy(std::string_view name);

struct RankedList {
  Strategy strategy = Strategy::random;
  std::vector<NodeId> order;   ///< most important first
  std::vector<double> scores;  ///< per node; empty for the random strategy
};

/// Attack order for a strategy. hub sorts by in-degree, pagerank by score,
/// both descending with ties to the smaller NodeId; random is a seeded
/// shuffle.
RankedList rank_nodes(const DependencyGraph& g, Strategy strategy, std::uint64_t seed,
                      const PageRankConfig& pagerank_config = {});

/// NodeIds sorted by descending score, ties to the smaller id.
std::vector<NodeId> order_by_score(const std::vector<double>& scores);

}  // namespace depnet

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "depnet/centrality.hpp"
#include "depnet/graph.hpp"
#include "depnet/registry.hpp"

namespace depnet {

/// m / n. Throws EmptyInputError on an empty graph.
double avg_out_degree(const DependencyGraph& g);

/// Mean out-degree of the k highest-PageRank nodes. Requires 1 <= k <= n.
double avg_out_degree_top_k(const DependencyGraph& g, std::size_t k, const PageRankConfig& pagerank = {});

/// Mean over the k highest-PageRank nodes v of |transitive dependents of v| / n.
/// Requires 1 <= k <= n. Per-node traversals run on pagerank.threads workers.
double avg_dependence_on_top_k(const DependencyGraph& g, std::size_t k, const PageRankConfig& pagerank = {});

struct EvolutionOptions {
  std::size_t top_out_degree = 50;
  std::size_t top_dependence = 100;
  bool largest_component_only = false;
  PageRankConfig pagerank;
};

struct EvolutionRow {
  Timestamp cutoff;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  // Empty when the snapshot has no nodes.
  std::optional<double> avg_out_degree_all;
  std::optional<double> avg_out_degree_top;
  std::optional<double> avg_dependence_top;
};

struct EvolutionReport {
  std::vector<EvolutionRow> rows;
  std::size_t empty_snapshots = 0;
};

/// One row per cutoff (strictly increasing). Snapshots smaller than a top-k
/// size use all of their nodes.
EvolutionReport evolution_report(const std::vector<PackageRecord>& records, const std::vector<Timestamp>& cutoffs,
                                 const EvolutionOptions& options = {});

}  // namespace depnet

#pragma once

// Community detection on the undirected projection of a dependency graph,
// and overlap between detected communities and the dependent-neighbourhoods
// of central packages.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "depnet/centrality.hpp"
#include "depnet/graph.hpp"

namespace depnet {

struct WeightedEdge {
  NodeId a;
  NodeId b;
  double weight;
};

/// Weighted undirected graph in CSR form. `loop_weight(v)` is only nonzero
/// for the aggregated graphs Louvain builds internally; a self-loop of
/// weight w adds 2w to the node's degree.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;

  /// Parallel edges are merged by summing weights. Self-loops become loop
  /// weight. Throws std::invalid_argument on non-positive weights.
  static UndirectedGraph from_edges(std::size_t node_count, std::span<const WeightedEdge> edges);

  std::size_t node_count() const noexcept { return loops_.size(); }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }
  std::span<const NodeId> neighbors(NodeId v) const;
  std::span<const double> weights(NodeId v) const;
  double loop_weight(NodeId v) const { return loops_[v]; }
  /// Weighted degree.
  double degree(NodeId v) const { return degrees_[v]; }
  /// Sum of all edge weights, each edge once, loops included.
  double total_weight() const noexcept { return total_weight_; }
  /// Weight of edge a-b, 0 when absent.
  double weight(NodeId a, NodeId b) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
  std::vector<double> weights_;
  std::vector<double> loops_;
  std::vector<double> degrees_;
  double total_weight_ = 0.0;
};

/// u-v is present iff u->v or v->u; weight 2 when both directions exist.
UndirectedGraph to_undirected(const DependencyGraph& g);

/// Weighted modularity with a resolution parameter. A graph with zero total
/// weight has modularity 0.
double modularity(const UndirectedGraph& g, std::span<const std::uint32_t> community_of, double resolution = 1.0);

struct CommunityPartition {
  std::vector<std::uint32_t> community_of;  ///< ids contiguous from 0, numbered by smallest member
  double modularity = 0.0;
  std::size_t levels = 0;  ///< aggregation levels that moved at least one node

  std::size_t community_count() const;
};

struct LouvainOptions {
  double resolution = 1.0;
  std::uint64_t seed = 0;
};

/// Two-phase Louvain: local moves with strictly positive modularity gain in a
/// seeded random node order, then aggregation, until no node moves.
/// Throws EmptyInputError on a graph without nodes.
CommunityPartition louvain(const UndirectedGraph& g, const LouvainOptions& options = {});

/// v plus every node within k hops along in-edges (its dependents). k must be
/// in {1, 2, 3}. Ascending.
std::vector<NodeId> k_step_neighborhood(const DependencyGraph& g, NodeId v, int k, bool include_root = true);

struct IntersectionReport {
  NodeId package = kInvalidNode;
  std::string label;
  int k = 0;
  std::size_t community_size = 0;
  std::size_t neighborhood_size = 0;
  std::size_t intersection_size = 0;
  double frac_of_community = 0.0;
  double frac_of_neighborhood = 0.0;
  std::size_t dependencies = 0;  ///< out-degree of the package
};

/// Sizes and fractions for two node sets given as sorted id lists. An empty
/// set yields fraction 0 on its side.
IntersectionReport intersect_sets(std::span<const NodeId> community, std::span<const NodeId> neighborhood);

/// Overlap between the community containing v and v's k-step neighbourhood.
IntersectionReport intersection_report(const DependencyGraph& g, const CommunityPartition& partition, NodeId v, int k,
                                       bool include_root = true);

struct StudyOptions {
  std::size_t top_n = 20;
  std::vector<int> ks{1, 2, 3};
  LouvainOptions louvain;
  bool include_root = true;
  PageRankConfig pagerank;  ///< pagerank.threads also bounds report workers
};

struct StudyResult {
  CommunityPartition partition;
  std::vector<IntersectionReport> reports;  ///< package rank order, then k ascending
};

/// One Louvain run on the undirected projection, then reports for each of the
/// top_n PageRank packages at each k.
StudyResult top_package_study(const DependencyGraph& g, const StudyOptions& options = {});

}  // namespace depnet

#pragma once

// Immutable package dependency graph.
//
// Nodes are dense integer ids. An edge u -> v means "u depends on v"; both
// directions are stored as CSR arrays so dependencies (out-edges) and
// dependents (in-edges) are equally cheap to enumerate. Graphs produced by
// remove_nodes() remember the node count and ids of the graph they were cut
// from, so fractions computed on a shrinking graph keep the original
// denominator.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace depnet {

using NodeId = std::uint32_t;
inline constexpr NodeId kInvalidNode = std::numeric_limits<NodeId>::max();

struct Edge {
  NodeId source;
  NodeId target;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct LabeledEdge {
  std::string source;
  std::string target;
  friend bool operator==(const LabeledEdge&, const LabeledEdge&) = default;
};

/// Input records discarded while building a graph.
struct BuildStats {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

/// How label-keyed input is mapped to NodeIds.
enum class LabelOrder {
  sorted,    ///< NodeId order is byte-wise label order
  as_given,  ///< NodeId = position in the supplied label list
};

class DependencyGraph {
 public:
  DependencyGraph() = default;

  std::size_t node_count() const noexcept { return out_offsets_.empty() ? 0 : out_offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return out_targets_.size(); }
  bool empty() const noexcept { return node_count() == 0; }

  /// Node count of the graph this one was ultimately derived from.
  std::size_t original_node_count() const noexcept { return original_node_count_; }

  /// Out-neighbours of v (the packages v depends on), ascending.
  std::span<const NodeId> dependencies(NodeId v) const;
  /// In-neighbours of v (the packages depending on v), ascending.
  std::span<const NodeId> dependents(NodeId v) const;

  std::size_t out_degree(NodeId v) const { return dependencies(v).size(); }
  std::size_t in_degree(NodeId v) const { return dependents(v).size(); }

  bool has_labels() const noexcept { return !labels_.empty(); }
  std::span<const std::string> labels() const noexcept { return labels_; }
  /// Label of v, or its decimal id when the graph is unlabeled.
  std::string label(NodeId v) const;
  std::optional<NodeId> find(std::string_view label) const;

  /// Id of v in the graph this one was derived from through remove_nodes().
  NodeId original_id(NodeId v) const;
  std::span<const NodeId> original_ids() const noexcept { return original_ids_; }

  const BuildStats& build_stats() const noexcept { return stats_; }

  /// All edges in (source, target) order.
  std::vector<Edge> edges() const;

  /// Structural equality: adjacency and labels. Provenance is ignored.
  bool same_structure(const DependencyGraph& other) const;

  void check_node(NodeId v) const;

 private:
  friend DependencyGraph build_graph(std::size_t, std::span<const Edge>, std::vector<std::string>);
  friend DependencyGraph remove_nodes(const DependencyGraph&, std::span<const NodeId>);

  static DependencyGraph from_sorted_unique(std::size_t node_count, std::span<const Edge> edges);
  void index_labels();

  std::vector<std::size_t> out_offsets_;
  std::vector<NodeId> out_targets_;
  std::vector<std::size_t> in_offsets_;
  std::vector<NodeId> in_sources_;
  std::vector<std::string> labels_;
  std::vector<NodeId> by_label_;
  std::vector<NodeId> original_ids_;
  std::size_t original_node_count_ = 0;
  BuildStats stats_;
};

/// Builds a graph over nodes [0, node_count). Self-loops and duplicate edges
/// are dropped and counted in build_stats(). `labels` is empty or has one
/// unique entry per node.
DependencyGraph build_graph(std::size_t node_count, std::span<const Edge> edges,
                            std::vector<std::string> labels = {});

/// Builds a labeled graph. Without `labels` the node set is the set of edge
/// endpoints. Throws GraphBuildError on duplicate labels or on endpoints that
/// are not in `labels`.
DependencyGraph build_graph(std::span<const LabeledEdge> edges,
                            std::optional<std::vector<std::string>> labels = std::nullopt,
                            LabelOrder order = LabelOrder::sorted);

/// Direct dependents of v.
std::vector<NodeId> dependents(const DependencyGraph& g, NodeId v);

/// Every u with a directed path u -> ... -> v of length >= 1, ascending.
/// v itself is included only when it lies on a cycle.
std::vector<NodeId> reverse_reachable_set(const DependencyGraph& g, NodeId v);

inline constexpr std::uint32_t kNoComponent = std::numeric_limits<std::uint32_t>::max();

struct ComponentLabeling {
  std::vector<std::uint32_t> component_of;  ///< kNoComponent for masked-out nodes
  std::vector<std::size_t> component_sizes;
  std::uint32_t largest = kNoComponent;  ///< first component of maximum size
  double lcc_fraction = 0.0;

  std::size_t largest_size() const { return largest == kNoComponent ? 0 : component_sizes[largest]; }
};

/// Components of the undirected projection. Ids are assigned in order of each
/// component's smallest node; lcc_fraction is relative to node_count().
ComponentLabeling weakly_connected_components(const DependencyGraph& g);

/// Same, restricted to nodes with alive[v] != 0. lcc_fraction stays relative
/// to node_count(), i.e. masked-out nodes count in the denominator.
ComponentLabeling weakly_connected_components(const DependencyGraph& g,
                                              std::span<const std::uint8_t> alive);

/// Induced subgraph on the nodes not in `victims`. Surviving nodes keep their
/// relative order; original ids and the original node count carry over.
DependencyGraph remove_nodes(const DependencyGraph& g, std::span<const NodeId> victims);

/// Induced subgraph on the largest weakly connected component (ties go to the
/// component holding the smallest node id). Throws EmptyInputError on an
/// empty graph.
DependencyGraph largest_weakly_connected_subgraph(const DependencyGraph& g);

}  // namespace depnet

#pragma once

// Attack simulations.
//
// Cascade attack: repeatedly take the highest-ranked surviving node, remove it
// together with every surviving node that transitively depends on it, and
// record the cumulative share of the network lost.
//
// Connectivity attack: remove ranked nodes in batches without propagation and
// record the share of the network left in the largest weakly connected
// component.
//
// Rankings are computed once on the input graph. All fractions use the input
// graph's node count as denominator.

#include <cstdint>
#include <vector>

#include "depnet/centrality.hpp"
#include "depnet/graph.hpp"

namespace depnet {

struct CascadeStep {
  std::size_t step = 0;  ///< 1-based
  NodeId target = kInvalidNode;
  std::vector<NodeId> removed;  ///< target first, then its surviving dependents ascending
  double cumulative_affected_fraction = 0.0;
};

struct RemovalTrace {
  Strategy strategy = Strategy::random;
  std::vector<CascadeStep> steps;
};

struct ConnectivityPoint {
  std::size_t removed = 0;
  double removed_fraction = 0.0;
  double lcc_fraction = 0.0;
};

struct ConnectivityTrace {
  Strategy strategy = Strategy::random;
  std::vector<ConnectivityPoint> points;  ///< first point is the intact graph
};

struct AttackOptions {
  std::uint64_t seed = 0;
  PageRankConfig pagerank;
};

/// ceil(fraction * n), tolerant of floating-point noise in the product.
std::size_t fraction_count(double fraction, std::size_t n);

/// Runs until ceil(stop_fraction * n) targets have been removed or nothing
/// survives. Cascade victims count toward the affected fraction, not toward
/// the target budget.
RemovalTrace cascade_attack(const DependencyGraph& g, Strategy strategy, double stop_fraction,
                            const AttackOptions& options = {});
RemovalTrace cascade_attack(const DependencyGraph& g, const RankedList& ranking, double stop_fraction);

/// Removes ceil(batch_fraction * n) ranked nodes per batch until
/// ceil(max_fraction * n) are gone; the last batch is truncated to fit.
ConnectivityTrace connectivity_attack(const DependencyGraph& g, Strategy strategy, double batch_fraction,
                                      double max_fraction, const AttackOptions& options = {});
ConnectivityTrace connectivity_attack(const DependencyGraph& g, const RankedList& ranking,
                                      double batch_fraction, double max_fraction);

struct BaselineComparison {
  ConnectivityTrace observed;
  ConnectivityTrace baseline;  ///< same attack on G(n, m) with the input's n and m
};

/// The baseline graph is gnm_random(n, m, options.seed).
BaselineComparison compare_to_random_baseline(const DependencyGraph& g, Strategy strategy,
                                              double batch_fraction, double max_fraction,
                                              const AttackOptions& options = {});

}  // namespace depnet

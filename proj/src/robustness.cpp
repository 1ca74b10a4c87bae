#include "depnet/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "depnet/error.hpp"
#include "depnet/generators.hpp"

namespace depnet {

std::size_t fraction_count(double fraction, std::size_t n) {
  const double exact = fraction * static_cast<double>(n);
  const auto count = static_cast<std::size_t>(std::ceil(exact - 1e-9 * std::max(1.0, exact)));
  return std::min(count, n);
}

namespace {

void check_ranking(const DependencyGraph& g, const RankedList& ranking) {
  if (ranking.order.size() != g.node_count()) {
    throw std::invalid_argument("ranking covers " + std::to_string(ranking.order.size()) + " nodes, graph has " +
                                std::to_string(g.node_count()));
  }
}

}  // namespace

RemovalTrace cascade_attack(const DependencyGraph& g, const RankedList& ranking, double stop_fraction) {
  if (!(stop_fraction > 0.0 && stop_fraction <= 1.0)) {
    throw std::invalid_argument("cascade_attack: stop_fraction must be in (0, 1]");
  }
  if (g.empty()) throw EmptyInputError("cascade_attack on an empty graph");
  check_ranking(g, ranking);

  const std::size_t n = g.node_count();
  const std::size_t budget = std::max<std::size_t>(1, fraction_count(stop_fraction, n));
  std::vector<std::uint8_t> alive(n, 1);
  std::size_t removed_total = 0;
  std::vector<NodeId> stack;

  RemovalTrace trace;
  trace.strategy = ranking.strategy;
  for (NodeId target : ranking.order) {
    if (trace.steps.size() >= budget || removed_total == n) break;
    g.check_node(target);
    if (!alive[target]) continue;

    // Everything still alive that reaches the target through in-edges fails with it.
    CascadeStep step;
    step.step = trace.steps.size() + 1;
    step.target = target;
    alive[target] = 0;
    stack.assign(1, target);
    std::vector<NodeId> victims;
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (NodeId w : g.dependents(u)) {
        if (alive[w]) {
          alive[w] = 0;
          victims.push_back(w);
          stack.push_back(w);
        }
      }
    }
    std::sort(victims.begin(), victims.end());
    step.removed.reserve(victims.size() + 1);
    step.removed.push_back(target);
    step.removed.insert(step.removed.end(), victims.begin(), victims.end());
    removed_total += step.removed.size();
    step.cumulative_affected_fraction = static_cast<double>(removed_total) / static_cast<double>(n);
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

RemovalTrace cascade_attack(const DependencyGraph& g, Strategy strategy, double stop_fraction,
                            const AttackOptions& options) {
  if (!(stop_fraction > 0.0 && stop_fraction <= 1.0)) {
    throw std::invalid_argument("cascade_attack: stop_fraction must be in (0, 1]");
  }
  if (g.empty()) throw EmptyInputError("cascade_attack on an empty graph");
  return cascade_attack(g, rank_nodes(g, strategy, options.seed, options.pagerank), stop_fraction);
}

namespace {

void check_batches(double batch_fraction, double max_fraction) {
  if (!(batch_fraction > 0.0 && batch_fraction <= max_fraction && max_fraction <= 1.0)) {
    throw std::invalid_argument("connectivity_attack: need 0 < batch_fraction <= max_fraction <= 1");
  }
}

}  // namespace

ConnectivityTrace connectivity_attack(const DependencyGraph& g, const RankedList& ranking, double batch_fraction,
                                      double max_fraction) {
  check_batches(batch_fraction, max_fraction);
  if (g.empty()) throw EmptyInputError("connectivity_attack on an empty graph");
  check_ranking(g, ranking);

  const std::size_t n = g.node_count();
  const std::size_t batch = std::max<std::size_t>(1, fraction_count(batch_fraction, n));
  const std::size_t limit = std::max<std::size_t>(1, fraction_count(max_fraction, n));
  const double denom = static_cast<double>(n);
  std::vector<std::uint8_t> alive(n, 1);

  ConnectivityTrace trace;
  trace.strategy = ranking.strategy;
  trace.points.push_back({0, 0.0, weakly_connected_components(g, alive).lcc_fraction});
  std::size_t removed = 0;
  while (removed < limit) {
    const std::size_t end = std::min(limit, removed + batch);
    for (; removed < end; ++removed) {
      g.check_node(ranking.order[removed]);
      alive[ranking.order[removed]] = 0;
    }
    trace.points.push_back(
        {removed, static_cast<double>(removed) / denom, weakly_connected_components(g, alive).lcc_fraction});
  }
  return trace;
}

ConnectivityTrace connectivity_attack(const DependencyGraph& g, Strategy strategy, double batch_fraction,
                                      double max_fraction, const AttackOptions& options) {
  check_batches(batch_fraction, max_fraction);
  if (g.empty()) throw EmptyInputError("connectivity_attack on an empty graph");
  return connectivity_attack(g, rank_nodes(g, strategy, options.seed, options.pagerank), batch_fraction,
                             max_fraction);
}

BaselineComparison compare_to_random_baseline(const DependencyGraph& g, Strategy strategy, double batch_fraction,
                                              double max_fraction, const AttackOptions& options) {
  check_batches(batch_fraction, max_fraction);
  if (g.empty()) throw EmptyInputError("compare_to_random_baseline on an empty graph");
  const DependencyGraph random_graph = gnm_random({g.node_count(), g.edge_count(), options.seed});
  return {connectivity_attack(g, strategy, batch_fraction, max_fraction, options),
          connectivity_attack(random_graph, strategy, batch_fraction, max_fraction, options)};
}

}  // namespace depnet

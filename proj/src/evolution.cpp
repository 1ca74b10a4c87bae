#include "depnet/evolution.hpp"

#include <numeric>
#include <stdexcept>

#include "depnet/error.hpp"
#include "depnet/parallel.hpp"

namespace depnet {

namespace {

void check_k(const DependencyGraph& g, std::size_t k) {
  if (g.empty()) throw EmptyInputError("top-k statistic of an empty graph");
  if (k < 1 || k > g.node_count()) {
    throw std::invalid_argument("k = " + std::to_string(k) + " outside [1, " + std::to_string(g.node_count()) + "]");
  }
}

std::vector<NodeId> top_k(const DependencyGraph& g, std::size_t k, const PageRankConfig& pagerank) {
  std::vector<NodeId> order = order_by_score(depnet::pagerank(g, pagerank).scores);
  order.resize(k);
  return order;
}

double mean_out_degree(const DependencyGraph& g, const std::vector<NodeId>& nodes) {
  double sum = 0.0;
  for (NodeId v : nodes) sum += static_cast<double>(g.out_degree(v));
  return sum / static_cast<double>(nodes.size());
}

double mean_dependence(const DependencyGraph& g, const std::vector<NodeId>& nodes, unsigned threads) {
  std::vector<std::size_t> reach(nodes.size());
  parallel_for(nodes.size(), threads, [&](std::size_t i) { reach[i] = reverse_reachable_set(g, nodes[i]).size(); });
  const double n = static_cast<double>(g.node_count());
  double sum = 0.0;
  for (std::size_t r : reach) sum += static_cast<double>(r) / n;
  return sum / static_cast<double>(nodes.size());
}

}  // namespace

double avg_out_degree(const DependencyGraph& g) {
  if (g.empty()) throw EmptyInputError("average out-degree of an empty graph");
  return static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
}

double avg_out_degree_top_k(const DependencyGraph& g, std::size_t k, const PageRankConfig& pagerank) {
  check_k(g, k);
  return mean_out_degree(g, top_k(g, k, pagerank));
}

double avg_dependence_on_top_k(const DependencyGraph& g, std::size_t k, const PageRankConfig& pagerank) {
  check_k(g, k);
  return mean_dependence(g, top_k(g, k, pagerank), pagerank.threads);
}

EvolutionReport evolution_report(const std::vector<PackageRecord>& records, const std::vector<Timestamp>& cutoffs,
                                 const EvolutionOptions& options) {
  for (std::size_t i = 1; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i - 1] < cutoffs[i])) throw std::invalid_argument("evolution_report: cutoffs must be strictly increasing");
  }
  if (options.top_out_degree < 1 || options.top_dependence < 1) {
    throw std::invalid_argument("evolution_report: top-k sizes must be >= 1");
  }

  EvolutionReport report;
  for (Timestamp cutoff : cutoffs) {
    DependencyGraph g = snapshot_edges(records, {cutoff}).to_graph();
    if (options.largest_component_only && !g.empty()) g = largest_weakly_connected_subgraph(g);

    EvolutionRow row;
    row.cutoff = cutoff;
    row.node_count = g.node_count();
    row.edge_count = g.edge_count();
    if (g.empty()) {
      ++report.empty_snapshots;
      report.rows.push_back(row);
      continue;
    }
    const std::size_t k_max = std::max(options.top_out_degree, options.top_dependence);
    const std::vector<NodeId> ranked = top_k(g, std::min(k_max, g.node_count()), options.pagerank);
    auto prefix = [&](std::size_t k) {
      return std::vector<NodeId>(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(std::min(k, ranked.size())));
    };
    row.avg_out_degree_all = avg_out_degree(g);
    row.avg_out_degree_top = mean_out_degree(g, prefix(options.top_out_degree));
    row.avg_dependence_top = mean_dependence(g, prefix(options.top_dependence), options.pagerank.threads);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace depnet

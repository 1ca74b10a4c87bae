#include "depnet/community.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "depnet/error.hpp"
#include "depnet/parallel.hpp"
#include "depnet/random.hpp"

namespace depnet {

// ---------------------------------------------------------------------------
// UndirectedGraph

UndirectedGraph UndirectedGraph::from_edges(std::size_t node_count, std::span<const WeightedEdge> edges) {
  UndirectedGraph g;
  g.loops_.assign(node_count, 0.0);
  g.degrees_.assign(node_count, 0.0);

  struct Half {
    NodeId from;
    NodeId to;
    double weight;
  };
  std::vector<Half> halves;
  halves.reserve(edges.size() * 2);
  for (const WeightedEdge& e : edges) {
    if (e.a >= node_count || e.b >= node_count) throw std::out_of_range("undirected edge endpoint out of range");
    if (!(e.weight > 0.0)) throw std::invalid_argument("undirected edge weight must be positive");
    g.total_weight_ += e.weight;
    if (e.a == e.b) {
      g.loops_[e.a] += e.weight;
      g.degrees_[e.a] += 2.0 * e.weight;
      continue;
    }
    halves.push_back({e.a, e.b, e.weight});
    halves.push_back({e.b, e.a, e.weight});
  }
  std::sort(halves.begin(), halves.end(),
            [](const Half& x, const Half& y) { return x.from != y.from ? x.from < y.from : x.to < y.to; });

  g.offsets_.assign(node_count + 1, 0);
  for (std::size_t i = 0; i < halves.size(); ++i) {
    const Half& h = halves[i];
    if (!g.neighbors_.empty() && i > 0 && halves[i - 1].from == h.from && halves[i - 1].to == h.to) {
      g.weights_.back() += h.weight;
    } else {
      g.neighbors_.push_back(h.to);
      g.weights_.push_back(h.weight);
      ++g.offsets_[h.from + 1];
    }
    g.degrees_[h.from] += h.weight;
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  return g;
}

std::span<const NodeId> UndirectedGraph::neighbors(NodeId v) const {
  return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::span<const double> UndirectedGraph::weights(NodeId v) const {
  return {weights_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

double UndirectedGraph::weight(NodeId a, NodeId b) const {
  if (a == b) return loops_[a];
  const auto nb = neighbors(a);
  const auto it = std::lower_bound(nb.begin(), nb.end(), b);
  if (it == nb.end() || *it != b) return 0.0;
  return weights(a)[static_cast<std::size_t>(it - nb.begin())];
}

UndirectedGraph to_undirected(const DependencyGraph& g) {
  std::vector<WeightedEdge> edges;
  edges.reserve(g.edge_count());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.dependencies(u)) {
      const auto back = g.dependencies(v);
      const bool reciprocal = std::binary_search(back.begin(), back.end(), u);
      if (!reciprocal) {
        edges.push_back({u, v, 1.0});
      } else if (u < v) {
        edges.push_back({u, v, 2.0});
      }
    }
  }
  return UndirectedGraph::from_edges(g.node_count(), edges);
}

// ---------------------------------------------------------------------------
// Modularity

double modularity(const UndirectedGraph& g, std::span<const std::uint32_t> community_of, double resolution) {
  const std::size_t n = g.node_count();
  if (community_of.size() != n) throw std::invalid_argument("modularity: partition size does not match graph");
  const double two_m = 2.0 * g.total_weight();
  if (two_m <= 0.0) return 0.0;

  const std::uint32_t count = n == 0 ? 0 : *std::max_element(community_of.begin(), community_of.end()) + 1;
  std::vector<double> internal(count, 0.0);  // sum of A_ij over ordered pairs inside c
  std::vector<double> total(count, 0.0);
  for (NodeId u = 0; u < n; ++u) {
    const std::uint32_t c = community_of[u];
    total[c] += g.degree(u);
    internal[c] += 2.0 * g.loop_weight(u);
    const auto nb = g.neighbors(u);
    const auto w = g.weights(u);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (community_of[nb[i]] == c) internal[c] += w[i];
    }
  }
  double q = 0.0;
  for (std::uint32_t c = 0; c < count; ++c) {
    const double share = total[c] / two_m;
    q += internal[c] / two_m - resolution * share * share;
  }
  return q;
}

std::size_t CommunityPartition::community_count() const {
  if (community_of.empty()) return 0;
  return *std::max_element(community_of.begin(), community_of.end()) + std::size_t{1};
}

// ---------------------------------------------------------------------------
// Louvain

namespace {

// Relabels to 0.. in order of first appearance. Returns the community count.
std::uint32_t compact(std::vector<std::uint32_t>& labels) {
  std::vector<std::uint32_t> remap(labels.size(), kNoComponent);
  std::uint32_t next = 0;
  for (auto& c : labels) {
    if (remap[c] == kNoComponent) remap[c] = next++;
    c = remap[c];
  }
  return next;
}

// Local moving phase on one level. Returns the number of accepted moves.
std::size_t move_nodes(const UndirectedGraph& g, std::vector<std::uint32_t>& community, double resolution, Rng& rng) {
  const std::size_t n = g.node_count();
  const double two_m = 2.0 * g.total_weight();
  std::vector<double> total(n, 0.0);
  for (NodeId v = 0; v < n; ++v) total[community[v]] += g.degree(v);

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  shuffle(std::span<NodeId>(order), rng);

  std::vector<double> link(n, 0.0);  // weight from the current node into each community
  std::vector<std::uint32_t> touched;
  std::size_t moves = 0;
  // Gains are compared in units of 1/m; anything below this is rounding noise.
  constexpr double kMinGain = 1e-12;

  for (bool moved = true; moved;) {
    moved = false;
    for (NodeId v : order) {
      const std::uint32_t home = community[v];
      const double k = g.degree(v);
      touched.clear();
      touched.push_back(home);
      const auto nb = g.neighbors(v);
      const auto w = g.weights(v);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        const std::uint32_t c = community[nb[i]];
        if (link[c] == 0.0 && c != home) touched.push_back(c);
        link[c] += w[i];
      }

      total[home] -= k;
      auto gain = [&](std::uint32_t c) { return link[c] - resolution * total[c] * k / two_m; };
      const double stay = gain(home);
      std::uint32_t best = home;
      double best_gain = stay;
      for (std::uint32_t c : touched) {
        const double gc = gain(c);
        if (gc > best_gain + kMinGain * std::max(1.0, std::abs(best_gain)) ||
            (c < best && best != home && std::abs(gc - best_gain) <= kMinGain * std::max(1.0, std::abs(best_gain)))) {
          best = c;
          best_gain = gc;
        }
      }
      if (best_gain - stay <= kMinGain * std::max(1.0, std::abs(stay))) best = home;
      total[best] += k;
      if (best != home) {
        community[v] = best;
        moved = true;
        ++moves;
      }
      for (std::uint32_t c : touched) link[c] = 0.0;
    }
  }
  return moves;
}

UndirectedGraph aggregate(const UndirectedGraph& g, const std::vector<std::uint32_t>& community, std::uint32_t count) {
  std::vector<WeightedEdge> edges;
  edges.reserve(g.edge_count() + g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (g.loop_weight(u) > 0.0) edges.push_back({community[u], community[u], g.loop_weight(u)});
    const auto nb = g.neighbors(u);
    const auto w = g.weights(u);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (u < nb[i]) edges.push_back({community[u], community[nb[i]], w[i]});
    }
  }
  return UndirectedGraph::from_edges(count, edges);
}

}  // namespace

CommunityPartition louvain(const UndirectedGraph& g, const LouvainOptions& options) {
  const std::size_t n = g.node_count();
  if (n == 0) throw EmptyInputError("louvain on an empty graph");
  if (!(options.resolution > 0.0)) throw std::invalid_argument("louvain: resolution must be positive");

  CommunityPartition result;
  result.community_of.resize(n);
  std::iota(result.community_of.begin(), result.community_of.end(), std::uint32_t{0});
  if (g.total_weight() <= 0.0) return result;

  Rng rng(options.seed);
  UndirectedGraph level = g;
  for (;;) {
    std::vector<std::uint32_t> community(level.node_count());
    std::iota(community.begin(), community.end(), std::uint32_t{0});
    if (move_nodes(level, community, options.resolution, rng) == 0) break;
    ++result.levels;
    const std::uint32_t count = compact(community);
    for (auto& c : result.community_of) c = community[c];
    if (count == level.node_count()) break;
    level = aggregate(level, community, count);
  }
  compact(result.community_of);
  result.modularity = modularity(g, result.community_of, options.resolution);
  return result;
}

// ---------------------------------------------------------------------------
// Neighbourhoods and overlap

std::vector<NodeId> k_step_neighborhood(const DependencyGraph& g, NodeId v, int k, bool include_root) {
  g.check_node(v);
  if (k < 1 || k > 3) throw std::invalid_argument("k_step_neighborhood: k must be 1, 2 or 3");
  std::vector<int> depth(g.node_count(), -1);
  depth[v] = 0;
  std::vector<NodeId> frontier{v};
  std::vector<NodeId> found;
  for (int step = 1; step <= k && !frontier.empty(); ++step) {
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (NodeId w : g.dependents(u)) {
        if (depth[w] < 0) {
          depth[w] = step;
          next.push_back(w);
          found.push_back(w);
        }
      }
    }
    frontier = std::move(next);
  }
  if (include_root) found.push_back(v);
  std::sort(found.begin(), found.end());
  return found;
}

IntersectionReport intersect_sets(std::span<const NodeId> community, std::span<const NodeId> neighborhood) {
  IntersectionReport r;
  r.community_size = community.size();
  r.neighborhood_size = neighborhood.size();
  std::size_t i = 0, j = 0;
  while (i < community.size() && j < neighborhood.size()) {
    if (community[i] < neighborhood[j]) {
      ++i;
    } else if (neighborhood[j] < community[i]) {
      ++j;
    } else {
      ++r.intersection_size;
      ++i;
      ++j;
    }
  }
  if (r.community_size > 0) r.frac_of_community = static_cast<double>(r.intersection_size) / static_cast<double>(r.community_size);
  if (r.neighborhood_size > 0) {
    r.frac_of_neighborhood = static_cast<double>(r.intersection_size) / static_cast<double>(r.neighborhood_size);
  }
  return r;
}

IntersectionReport intersection_report(const DependencyGraph& g, const CommunityPartition& partition, NodeId v, int k,
                                       bool include_root) {
  g.check_node(v);
  if (partition.community_of.size() != g.node_count()) {
    throw std::invalid_argument("intersection_report: partition does not cover the graph");
  }
  const std::uint32_t c = partition.community_of[v];
  std::vector<NodeId> community;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (partition.community_of[u] == c) community.push_back(u);
  }
  IntersectionReport r = intersect_sets(community, k_step_neighborhood(g, v, k, include_root));
  r.package = v;
  r.label = g.label(v);
  r.k = k;
  r.dependencies = g.out_degree(v);
  return r;
}

StudyResult top_package_study(const DependencyGraph& g, const StudyOptions& options) {
  if (g.empty()) throw EmptyInputError("community study of an empty graph");
  if (options.top_n > g.node_count()) {
    throw std::invalid_argument("top_package_study: top_n exceeds node count");
  }
  for (int k : options.ks) {
    if (k < 1 || k > 3) throw std::invalid_argument("top_package_study: k must be 1, 2 or 3");
  }

  StudyResult result;
  result.partition = louvain(to_undirected(g), options.louvain);
  std::vector<NodeId> top = order_by_score(pagerank(g, options.pagerank).scores);
  top.resize(options.top_n);

  std::vector<int> ks = options.ks;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  result.reports.resize(top.size() * ks.size());
  parallel_for(result.reports.size(), options.pagerank.threads, [&](std::size_t i) {
    result.reports[i] = intersection_report(g, result.partition, top[i / ks.size()], ks[i % ks.size()],
                                            options.include_root);
  });
  return result;
}

}  // namespace depnet

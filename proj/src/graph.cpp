#include "depnet/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "depnet/error.hpp"

namespace depnet {

void DependencyGraph::check_node(NodeId v) const {
  if (v >= node_count()) {
    throw std::out_of_range("node id " + std::to_string(v) + " out of range (node_count " +
                            std::to_string(node_count()) + ")");
  }
}

std::span<const NodeId> DependencyGraph::dependencies(NodeId v) const {
  check_node(v);
  return {out_targets_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
}

std::span<const NodeId> DependencyGraph::dependents(NodeId v) const {
  check_node(v);
  return {in_sources_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
}

std::string DependencyGraph::label(NodeId v) const {
  check_node(v);
  return labels_.empty() ? std::to_string(v) : labels_[v];
}

std::optional<NodeId> DependencyGraph::find(std::string_view label) const {
  if (labels_.empty()) return std::nullopt;
  auto it = std::lower_bound(by_label_.begin(), by_label_.end(), label,
                             [&](NodeId id, std::string_view key) { return labels_[id] < key; });
  if (it == by_label_.end() || labels_[*it] != label) return std::nullopt;
  return *it;
}

NodeId DependencyGraph::original_id(NodeId v) const {
  check_node(v);
  return original_ids_[v];
}

std::vector<Edge> DependencyGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (std::size_t i = out_offsets_[u]; i < out_offsets_[u + 1]; ++i) out.push_back({u, out_targets_[i]});
  }
  return out;
}

bool DependencyGraph::same_structure(const DependencyGraph& other) const {
  return out_offsets_ == other.out_offsets_ && out_targets_ == other.out_targets_ &&
         in_offsets_ == other.in_offsets_ && in_sources_ == other.in_sources_ &&
         labels_ == other.labels_;
}

void DependencyGraph::index_labels() {
  by_label_.resize(labels_.size());
  std::iota(by_label_.begin(), by_label_.end(), NodeId{0});
  std::sort(by_label_.begin(), by_label_.end(),
            [&](NodeId a, NodeId b) { return labels_[a] < labels_[b]; });
}

// `edges` must be sorted by (source, target), unique and loop-free.
DependencyGraph DependencyGraph::from_sorted_unique(std::size_t node_count, std::span<const Edge> edges) {
  DependencyGraph g;
  g.out_offsets_.assign(node_count + 1, 0);
  g.in_offsets_.assign(node_count + 1, 0);
  g.out_targets_.resize(edges.size());
  g.in_sources_.resize(edges.size());
  for (const Edge& e : edges) {
    ++g.out_offsets_[e.source + 1];
    ++g.in_offsets_[e.target + 1];
  }
  std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());
  std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());
  std::vector<std::size_t> fill(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    g.out_targets_[i] = edges[i].target;
    // Sources arrive in ascending order, so each in-list comes out sorted.
    g.in_sources_[fill[edges[i].target]++] = edges[i].source;
  }
  g.original_ids_.resize(node_count);
  std::iota(g.original_ids_.begin(), g.original_ids_.end(), NodeId{0});
  g.original_node_count_ = node_count;
  return g;
}

DependencyGraph build_graph(std::size_t node_count, std::span<const Edge> edges,
                            std::vector<std::string> labels) {
  if (node_count >= kInvalidNode) throw std::invalid_argument("node count exceeds NodeId range");
  if (!labels.empty() && labels.size() != node_count) {
    throw std::invalid_argument("label count " + std::to_string(labels.size()) +
                                " does not match node count " + std::to_string(node_count));
  }
  BuildStats stats;
  std::vector<Edge> clean;
  clean.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.source >= node_count || e.target >= node_count) {
      throw std::out_of_range("edge (" + std::to_string(e.source) + ", " + std::to_string(e.target) +
                              ") references a node outside [0, " + std::to_string(node_count) + ")");
    }
    if (e.source == e.target) {
      ++stats.self_loops_dropped;
      continue;
    }
    clean.push_back(e);
  }
  std::sort(clean.begin(), clean.end());
  const auto last = std::unique(clean.begin(), clean.end());
  stats.duplicates_dropped = static_cast<std::size_t>(clean.end() - last);
  clean.erase(last, clean.end());

  DependencyGraph g = DependencyGraph::from_sorted_unique(node_count, clean);
  g.stats_ = stats;
  if (!labels.empty()) {
    g.labels_ = std::move(labels);
    g.index_labels();
    for (std::size_t i = 1; i < g.by_label_.size(); ++i) {
      if (g.labels_[g.by_label_[i]] == g.labels_[g.by_label_[i - 1]]) {
        const std::string& dup = g.labels_[g.by_label_[i]];
        throw GraphBuildError("duplicate node label: " + dup, {dup});
      }
    }
  }
  return g;
}

DependencyGraph build_graph(std::span<const LabeledEdge> edges, std::optional<std::vector<std::string>> labels,
                            LabelOrder order) {
  std::vector<std::string> names;
  if (labels) {
    names = std::move(*labels);
    std::vector<std::string> sorted = names;
    std::sort(sorted.begin(), sorted.end());
    if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
      throw GraphBuildError("duplicate node label: " + *dup, {*dup});
    }
    if (order == LabelOrder::sorted) names = std::move(sorted);
  } else {
    names.reserve(edges.size() * 2);
    for (const LabeledEdge& e : edges) {
      names.push_back(e.source);
      names.push_back(e.target);
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
  }

  std::unordered_map<std::string_view, NodeId> ids;
  ids.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) ids.emplace(names[i], static_cast<NodeId>(i));

  std::vector<Edge> resolved;
  resolved.reserve(edges.size());
  std::vector<std::string> unresolved;
  for (const LabeledEdge& e : edges) {
    auto s = ids.find(e.source);
    auto t = ids.find(e.target);
    if (s == ids.end()) unresolved.push_back(e.source);
    if (t == ids.end()) unresolved.push_back(e.target);
    if (s != ids.end() && t != ids.end()) resolved.push_back({s->second, t->second});
  }
  if (!unresolved.empty()) {
    std::sort(unresolved.begin(), unresolved.end());
    unresolved.erase(std::unique(unresolved.begin(), unresolved.end()), unresolved.end());
    std::string msg = "unresolved edge endpoints:";
    for (const auto& u : unresolved) msg += " " + u;
    throw GraphBuildError(msg, std::move(unresolved));
  }
  const std::size_t n = names.size();
  return build_graph(n, resolved, std::move(names));
}

std::vector<NodeId> dependents(const DependencyGraph& g, NodeId v) {
  auto in = g.dependents(v);
  return {in.begin(), in.end()};
}

std::vector<NodeId> reverse_reachable_set(const DependencyGraph& g, NodeId v) {
  g.check_node(v);
  std::vector<std::uint8_t> seen(g.node_count(), 0);
  std::vector<NodeId> stack(g.dependents(v).begin(), g.dependents(v).end());
  for (NodeId u : stack) seen[u] = 1;
  std::vector<NodeId> found;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    found.push_back(u);
    for (NodeId w : g.dependents(u)) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

namespace {

ComponentLabeling label_components(const DependencyGraph& g, std::span<const std::uint8_t> alive,
                                   std::size_t denominator) {
  const std::size_t n = g.node_count();
  ComponentLabeling out;
  out.component_of.assign(n, kNoComponent);
  std::vector<NodeId> queue;
  for (NodeId root = 0; root < n; ++root) {
    if (out.component_of[root] != kNoComponent || (!alive.empty() && !alive[root])) continue;
    const auto id = static_cast<std::uint32_t>(out.component_sizes.size());
    out.component_of[root] = id;
    queue.assign(1, root);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId u = queue[head];
      auto visit = [&](NodeId w) {
        if (out.component_of[w] == kNoComponent && (alive.empty() || alive[w])) {
          out.component_of[w] = id;
          queue.push_back(w);
        }
      };
      for (NodeId w : g.dependencies(u)) visit(w);
      for (NodeId w : g.dependents(u)) visit(w);
    }
    out.component_sizes.push_back(queue.size());
    if (out.largest == kNoComponent || queue.size() > out.component_sizes[out.largest]) out.largest = id;
  }
  if (denominator > 0) out.lcc_fraction = static_cast<double>(out.largest_size()) / static_cast<double>(denominator);
  return out;
}

}  // namespace

ComponentLabeling weakly_connected_components(const DependencyGraph& g) {
  return label_components(g, {}, g.node_count());
}

ComponentLabeling weakly_connected_components(const DependencyGraph& g, std::span<const std::uint8_t> alive) {
  if (alive.size() != g.node_count()) throw std::invalid_argument("alive mask size does not match node count");
  return label_components(g, alive, g.node_count());
}

DependencyGraph remove_nodes(const DependencyGraph& g, std::span<const NodeId> victims) {
  const std::size_t n = g.node_count();
  std::vector<NodeId> remap(n, 0);
  for (NodeId v : victims) {
    g.check_node(v);
    remap[v] = kInvalidNode;
  }
  NodeId next = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (remap[v] != kInvalidNode) remap[v] = next++;
  }

  std::vector<Edge> kept;
  kept.reserve(g.edge_count());
  for (NodeId u = 0; u < n; ++u) {
    if (remap[u] == kInvalidNode) continue;
    for (NodeId w : g.dependencies(u)) {
      if (remap[w] != kInvalidNode) kept.push_back({remap[u], remap[w]});
    }
  }

  DependencyGraph out = DependencyGraph::from_sorted_unique(next, kept);
  out.original_node_count_ = g.original_node_count_;
  out.stats_ = g.stats_;
  for (NodeId v = 0; v < n; ++v) {
    if (remap[v] == kInvalidNode) continue;
    out.original_ids_[remap[v]] = g.original_ids_[v];
    if (g.has_labels()) out.labels_.push_back(g.labels_[v]);
  }
  if (out.has_labels()) out.index_labels();
  return out;
}

DependencyGraph largest_weakly_connected_subgraph(const DependencyGraph& g) {
  if (g.empty()) throw EmptyInputError("largest weakly connected subgraph of an empty graph");
  const ComponentLabeling components = weakly_connected_components(g);
  std::vector<NodeId> victims;
  victims.reserve(g.node_count() - components.largest_size());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (components.component_of[v] != components.largest) victims.push_back(v);
  }
  return remove_nodes(g, victims);
}

}  // namespace depnet

#pragma once

// Tab-separated edge lists.
//
//   # comment
//   source<TAB>target
//
// A sidecar label file (one label per line, line number = NodeId) carries
// the node set, so isolated nodes and NodeId order survive a round trip.
// Without a sidecar, nodes are the edge endpoints in label order.

#include <filesystem>
#include <iosfwd>

#include "depnet/graph.hpp"

namespace depnet {

void write_edge_list(const DependencyGraph& g, std::ostream& edges);
void write_label_file(const DependencyGraph& g, std::ostream& labels);

/// `labels` may be null. Throws std::runtime_error on a malformed line.
DependencyGraph read_edge_list(std::istream& edges, std::istream* labels = nullptr);

/// Sidecar path used by save/load: "<edges>.labels".
std::filesystem::path label_path_for(const std::filesystem::path& edges);

void save_edge_list(const DependencyGraph& g, const std::filesystem::path& edges);
DependencyGraph load_edge_list(const std::filesystem::path& edges);

}  // namespace depnet

#pragma once

#include <cstddef>
#include <cstdint>

#include "depnet/graph.hpp"

namespace depnet {

struct GnmConfig {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::uint64_t seed = 0;
};

struct PreferentialAttachmentConfig {
  std::size_t node_count = 0;
  std::size_t edges_per_node = 1;
  std::uint64_t seed = 0;
};

/// Uniform G(n, m): m distinct non-loop directed edges drawn without
/// replacement. Throws std::invalid_argument unless n >= 1 and m <= n(n-1).
DependencyGraph gnm_random(const GnmConfig& config);

/// Growth model with power-law in-degrees. Node i (i >= 1) depends on
/// min(i, edges_per_node) distinct older nodes, each picked with probability
/// proportional to (in-degree + 1). Colliding picks are redrawn. Throws
/// std::invalid_argument unless edges_per_node >= 1 and node_count > edges_per_node.
DependencyGraph preferential_attachment(const PreferentialAttachmentConfig& config);

}  // namespace depnet

#pragma once

#include <cstdint>
#include <vector>

#include "tmap/knng.hpp"

namespace tmap {

// Cycle-free reduction of a WeightedGraph. tree_edges stay canonical and
// sorted by (w, u, v); component labels the connected components, each label
// being the smallest node id in its component.
struct SpanningForest {
  uint32_t n = 0;
  std::vector<Edge> tree_edges;
  std::vector<uint32_t> component;
};

// Kruskal's scan over the (w, u, v)-sorted edges with union by rank and path
// compression. The total scan order makes the accepted edge set unique even
// with duplicate weights, so identical inputs always produce the identical
// forest.
SpanningForest kruskal(const WeightedGraph& graph);

// Component labels via traversal over tree edges; label = smallest member id.
std::vector<uint32_t> components(uint32_t n, const std::vector<Edge>& tree_edges);

}  // namespace tmap

#pragma once

#include <cstdint>
#include <vector>

#include "tmap/mst.hpp"
#include "tmap/quadtree.hpp"

namespace tmap {

struct LayoutConfig {
  double p = 1.0;                    // point size / ideal edge length scale
  uint32_t iterations_per_level = 200;
  double theta = 1.0;                // quadtree opening criterion
  uint32_t coarsest_size = 32;
  double step_decay = 0.97;
  uint64_t seed = 42;
  double repulsion_c = 0.2;
};

struct LayoutResult {
  std::vector<Vec2> coords;
  std::vector<Edge> tree_edges;
  std::vector<uint32_t> component;
};

// One level of the coarsening hierarchy. Level 0 is the input tree;
// parent_of_finer maps the previous (finer) level's node ids onto this
// level's ids and is empty at level 0.
struct CoarseningLevel {
  uint32_t node_count = 0;
  std::vector<Edge> edges;  // canonical, sorted by (w, u, v); always a tree
  std::vector<uint32_t> parent_of_finer;
};

// Repeatedly contracts a maximal matching chosen greedily by ascending edge
// weight until the node count reaches coarsest_size or no edge is left to
// match. Contracting tree edges preserves treeness at every level.
std::vector<CoarseningLevel> coarsen(uint32_t node_count, const std::vector<Edge>& tree_edges,
                                     uint32_t coarsest_size);

// Multilevel spring-electrical embedding of the forest: per component, coarsen,
// place the coarsest level at random in a disk, then refine level by level
// with quadtree-approximated repulsion and tree-edge attraction; finally pack
// components on a grid by descending size and recenter the bounding box on
// the origin. Deterministic for a fixed (forest, config).
LayoutResult layout(const SpanningForest& forest, const LayoutConfig& config);

}  // namespace tmap

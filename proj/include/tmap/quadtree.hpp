#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tmap {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Barnes-Hut approximated repulsion: a quadtree cell acts as a point mass at
// its centroid when cell_size / distance <= theta, and is opened otherwise;
// repulsion within leaf cells is exact pairwise. Each point contributes a
// force of magnitude c * p^2 / distance pushing away from it. Exactly
// coincident points are separated by a deterministic seeded jitter of
// magnitude p * 1e-4 before the tree is built.
std::vector<Vec2> quadtree_repulsion(std::span<const Vec2> coords, double theta, double p,
                                     uint64_t jitter_seed = 0, double repulsion_c = 0.2);

}  // namespace tmap

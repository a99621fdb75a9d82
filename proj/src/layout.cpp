#include "tmap/layout.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "tmap/error.hpp"
#include "tmap/rng.hpp"

namespace tmap {

namespace {

constexpr uint32_t kNone = 0xffffffffu;
// Minimum fraction of nodes a matching must remove for coarsening to continue.
constexpr double kMinMatchedFraction = 0.1;
constexpr uint64_t kStreamPlacement = 0x40;
constexpr uint64_t kStreamOffset = 0x41;
constexpr uint64_t kStreamIterJitter = 0x42;

void validate_config(const LayoutConfig& config) {
  if (!(config.p > 0)) raise(Errc::config_mismatch, "p must be > 0");
  if (!(config.theta > 0)) raise(Errc::config_mismatch, "theta must be > 0");
  if (config.coarsest_size < 2) raise(Errc::config_mismatch, "coarsest_size must be >= 2");
  if (!(config.step_decay > 0 && config.step_decay < 1))
    raise(Errc::config_mismatch, "step_decay must be in (0, 1)");
  if (config.iterations_per_level < 1)
    raise(Errc::config_mismatch, "iterations_per_level must be >= 1");
}

void sort_canonical(std::vector<Edge>& edges) {
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
}

uint64_t level_key(uint32_t component_label, uint32_t level) {
  return (static_cast<uint64_t>(component_label) << 32) | level;
}

Vec2 polar_offset(double radius, double angle) {
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

// Adjacency lists in a fixed order (the canonical edge order), so force
// accumulation per node is reproducible regardless of thread count.
std::vector<std::vector<std::pair<uint32_t, double>>> adjacency_of(
    uint32_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<std::pair<uint32_t, double>>> adjacency(n);
  for (const Edge& e : edges) {
    adjacency[e.u].emplace_back(e.v, e.w);
    adjacency[e.v].emplace_back(e.u, e.w);
  }
  return adjacency;
}

void run_force_iterations(std::vector<Vec2>& pos,
                          const std::vector<std::vector<std::pair<uint32_t, double>>>& adjacency,
                          const LayoutConfig& config, uint32_t component_label, uint32_t level) {
  const uint32_t n = static_cast<uint32_t>(pos.size());
  if (n < 2) return;
  const double p = config.p;
  std::vector<Vec2> force(n);

  double step = p;
  for (uint32_t iter = 0; iter < config.iterations_per_level; ++iter) {
    const uint64_t jitter_seed =
        ctr_hash(config.seed, kStreamIterJitter, level_key(component_label, level), iter);
    force = quadtree_repulsion(pos, config.theta, p, jitter_seed, config.repulsion_c);

    // Attraction dist^2 / p along every tree edge, from the same snapshot the
    // repulsion saw.
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < static_cast<int64_t>(n); ++i) {
      Vec2 f = force[i];
      for (const auto& [nbr, w] : adjacency[i]) {
        const double dx = pos[nbr].x - pos[i].x;
        const double dy = pos[nbr].y - pos[i].y;
        const double dist = std::sqrt(dx * dx + dy * dy);
        if (dist > 0) {
          const double scale = dist / p;
          f.x += scale * dx;
          f.y += scale * dy;
        }
      }
      force[i] = f;
    }

    // Synchronous update: every node moves `step` along its net force.
    for (uint32_t i = 0; i < n; ++i) {
      const double norm = std::sqrt(force[i].x * force[i].x + force[i].y * force[i].y);
      if (norm > 0) {
        pos[i].x += step * force[i].x / norm;
        pos[i].y += step * force[i].y / norm;
      }
      if (!std::isfinite(pos[i].x) || !std::isfinite(pos[i].y))
        raise(Errc::internal, "non-finite coordinate during layout");
    }
    step *= config.step_decay;
  }
}

// Lays out one connected component (local node ids 0..n-1) around the origin.
std::vector<Vec2> layout_component(uint32_t n, const std::vector<Edge>& edges,
                                   const LayoutConfig& config, uint32_t component_label) {
  if (n == 1) return {Vec2{0.0, 0.0}};

  const std::vector<CoarseningLevel> levels = coarsen(n, edges, config.coarsest_size);
  const size_t top = levels.size() - 1;

  // Random placement of the coarsest level in a disk of radius p * sqrt(m).
  const uint32_t m = levels[top].node_count;
  const double radius = config.p * std::sqrt(static_cast<double>(m));
  std::vector<Vec2> pos(m);
  for (uint32_t i = 0; i < m; ++i) {
    const uint64_t key = level_key(component_label, static_cast<uint32_t>(top));
    const double u1 = unit_real(ctr_hash(config.seed, kStreamPlacement, key, (uint64_t{i} << 1) | 0));
    const double u2 = unit_real(ctr_hash(config.seed, kStreamPlacement, key, (uint64_t{i} << 1) | 1));
    pos[i] = polar_offset(radius * std::sqrt(u1), 2.0 * std::numbers::pi * u2);
  }

  for (size_t level = top + 1; level-- > 0;) {
    if (level < top) {
      // Children start at their parent's position plus a small seeded offset.
      const std::vector<uint32_t>& parent = levels[level + 1].parent_of_finer;
      std::vector<Vec2> fine(levels[level].node_count);
      for (uint32_t v = 0; v < fine.size(); ++v) {
        const double angle =
            2.0 * std::numbers::pi *
            unit_real(ctr_hash(config.seed, kStreamOffset,
                               level_key(component_label, static_cast<uint32_t>(level)), v));
        const Vec2 offset = polar_offset(config.p / 10.0, angle);
        fine[v] = {pos[parent[v]].x + offset.x, pos[parent[v]].y + offset.y};
      }
      pos = std::move(fine);
    }
    const auto adjacency = adjacency_of(levels[level].node_count, levels[level].edges);
    run_force_iterations(pos, adjacency, config, component_label, static_cast<uint32_t>(level));
  }
  return pos;
}

struct Box {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void include(const Vec2& p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
};

}  // namespace

std::vector<CoarseningLevel> coarsen(uint32_t node_count, const std::vector<Edge>& tree_edges,
                                     uint32_t coarsest_size) {
  assert(tree_edges.size() + 1 == node_count);
  std::vector<CoarseningLevel> levels;
  levels.push_back({node_count, tree_edges, {}});
  sort_canonical(levels[0].edges);

  while (levels.back().node_count > coarsest_size) {
    const CoarseningLevel& cur = levels.back();
    const uint32_t n = cur.node_count;

    // Greedy maximal matching in ascending (w, u, v) order: heavily coupled
    // pairs (small estimated distance) contract first.
    std::vector<uint32_t> partner(n, kNone);
    uint32_t matched = 0;
    for (const Edge& e : cur.edges) {
      if (partner[e.u] == kNone && partner[e.v] == kNone) {
        partner[e.u] = e.v;
        partner[e.v] = e.u;
        ++matched;
      }
    }
    if (matched == 0) break;
    // Hub-dominated trees stall matchings (a star contracts by one node per
    // round); once shrinkage degenerates, take the current level as coarsest
    // so the level count stays logarithmic-ish in n.
    if (static_cast<double>(matched) < kMinMatchedFraction * static_cast<double>(n)) break;

    CoarseningLevel next;
    next.parent_of_finer.assign(n, kNone);
    uint32_t next_id = 0;
    for (uint32_t u = 0; u < n; ++u) {
      if (next.parent_of_finer[u] != kNone) continue;
      next.parent_of_finer[u] = next_id;
      if (partner[u] != kNone) next.parent_of_finer[partner[u]] = next_id;
      ++next_id;
    }
    next.node_count = next_id;

    next.edges.reserve(cur.edges.size() - matched);
    for (const Edge& e : cur.edges) {
      const uint32_t cu = next.parent_of_finer[e.u];
      const uint32_t cv = next.parent_of_finer[e.v];
      if (cu != cv) next.edges.push_back({std::min(cu, cv), std::max(cu, cv), e.w});
    }
    sort_canonical(next.edges);
    assert(next.edges.size() + 1 == next.node_count);
    levels.push_back(std::move(next));
  }
  return levels;
}

LayoutResult layout(const SpanningForest& forest, const LayoutConfig& config) {
  validate_config(config);

  LayoutResult result;
  result.tree_edges = forest.tree_edges;
  result.component = forest.component;
  result.coords.resize(forest.n);
  if (forest.n == 0) return result;

  // Group nodes and edges by component label; members come out ascending.
  std::map<uint32_t, std::vector<uint32_t>> nodes_by_label;
  for (uint32_t i = 0; i < forest.n; ++i) nodes_by_label[forest.component[i]].push_back(i);
  std::map<uint32_t, std::vector<Edge>> edges_by_label;
  for (const Edge& e : forest.tree_edges) edges_by_label[forest.component[e.u]].push_back(e);

  struct PlacedComponent {
    uint32_t label;
    std::vector<uint32_t> nodes;  // global ids, ascending
    std::vector<Vec2> coords;     // local layout
    Box box;
  };
  std::vector<PlacedComponent> placed;
  placed.reserve(nodes_by_label.size());

  std::vector<uint32_t> local_of(forest.n, kNone);
  for (auto& [label, nodes] : nodes_by_label) {
    PlacedComponent pc;
    pc.label = label;
    pc.nodes = std::move(nodes);

    for (uint32_t i = 0; i < pc.nodes.size(); ++i) local_of[pc.nodes[i]] = i;
    std::vector<Edge> local_edges;
    for (const Edge& e : edges_by_label[label])
      local_edges.push_back({local_of[e.u], local_of[e.v], e.w});
    pc.coords = layout_component(static_cast<uint32_t>(pc.nodes.size()), local_edges, config, label);
    for (const Vec2& v : pc.coords) pc.box.include(v);
    placed.push_back(std::move(pc));
  }

  // Pack components on a grid, descending by size (ties by label), with a
  // per-component gap of 4 * p * sqrt(size).
  std::sort(placed.begin(), placed.end(), [](const PlacedComponent& a, const PlacedComponent& b) {
    if (a.nodes.size() != b.nodes.size()) return a.nodes.size() > b.nodes.size();
    return a.label < b.label;
  });
  const uint32_t columns =
      static_cast<uint32_t>(std::ceil(std::sqrt(static_cast<double>(placed.size()))));
  double cursor_y = 0.0;
  for (size_t row_start = 0; row_start < placed.size(); row_start += columns) {
    const size_t row_end = std::min(row_start + columns, placed.size());
    double row_height = 0.0;
    double cursor_x = 0.0;
    for (size_t c = row_start; c < row_end; ++c) {
      const double gap = 4.0 * config.p * std::sqrt(static_cast<double>(placed[c].nodes.size()));
      const double cell_w = placed[c].box.width() + gap;
      const double cell_h = placed[c].box.height() + gap;
      row_height = std::max(row_height, cell_h);
      const double center_x = cursor_x + 0.5 * cell_w;
      const double center_y = cursor_y + 0.5 * cell_h;
      const double shift_x = center_x - 0.5 * (placed[c].box.min_x + placed[c].box.max_x);
      const double shift_y = center_y - 0.5 * (placed[c].box.min_y + placed[c].box.max_y);
      for (Vec2& v : placed[c].coords) {
        v.x += shift_x;
        v.y += shift_y;
      }
      cursor_x += cell_w;
    }
    cursor_y += row_height;
  }

  for (const PlacedComponent& pc : placed)
    for (uint32_t i = 0; i < pc.nodes.size(); ++i) result.coords[pc.nodes[i]] = pc.coords[i];

  // Recenter the global bounding box on the origin.
  Box global;
  for (const Vec2& v : result.coords) global.include(v);
  const double cx = 0.5 * (global.min_x + global.max_x);
  const double cy = 0.5 * (global.min_y + global.max_y);
  for (Vec2& v : result.coords) {
    v.x -= cx;
    v.y -= cy;
  }
  return result;
}

}  // namespace tmap

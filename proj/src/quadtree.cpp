#include "tmap/quadtree.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>

#include "tmap/error.hpp"
#include "tmap/rng.hpp"

namespace tmap {

namespace {

constexpr uint64_t kStreamJitter = 0x30;
constexpr uint32_t kLeafCapacity = 8;
constexpr uint32_t kMaxDepth = 48;

struct Cell {
  double cx = 0.0, cy = 0.0;  // geometric center
  double half = 0.0;          // half of the side length
  double mx = 0.0, my = 0.0;  // centroid of contained points
  uint32_t count = 0;
  uint32_t first = 0, last = 0;  // leaf: slice of the index array
  int32_t child[4] = {-1, -1, -1, -1};
  bool leaf = true;
};

// Reused across calls; the builder runs on one thread per tree.
struct Workspace {
  std::vector<uint32_t> index;
  std::vector<Cell> cells;
  std::vector<Vec2> jittered;
  std::vector<uint64_t> probe_keys;
  std::vector<uint64_t> probe_stamps;
  uint64_t probe_epoch = 0;
  std::vector<uint32_t> order;
};

thread_local Workspace tl_ws;

uint64_t point_key(const Vec2& pt) {
  // Equal coordinates must map to equal keys; fold -0.0 onto +0.0.
  const double x = pt.x == 0.0 ? 0.0 : pt.x;
  const double y = pt.y == 0.0 ? 0.0 : pt.y;
  uint64_t bx, by;
  std::memcpy(&bx, &x, 8);
  std::memcpy(&by, &y, 8);
  return mix64(bx ^ 0x5851f42d4c957f2dull) ^ std::rotl(mix64(by ^ 0x14057b7ef767814full), 1);
}

// O(n) duplicate screen: equal points always produce equal keys, so a clean
// probe proves all points distinct. Key collisions only ever cause a false
// positive, which falls through to the exact sort-based path.
bool maybe_has_duplicates(std::span<const Vec2> coords, Workspace& ws) {
  size_t slots = 1;
  while (slots < coords.size() * 2) slots <<= 1;
  if (ws.probe_keys.size() < slots) {
    ws.probe_keys.assign(slots, 0);
    ws.probe_stamps.assign(slots, 0);
  }
  const uint64_t epoch = ++ws.probe_epoch;
  const size_t mask = slots - 1;
  for (const Vec2& pt : coords) {
    const uint64_t key = point_key(pt);
    size_t at = key & mask;
    while (true) {
      if (ws.probe_stamps[at] != epoch) {
        ws.probe_stamps[at] = epoch;
        ws.probe_keys[at] = key;
        break;
      }
      if (ws.probe_keys[at] == key) return true;
      at = (at + 1) & mask;
    }
  }
  return false;
}

class QuadTree {
 public:
  QuadTree(std::span<const Vec2> points, Workspace& ws) : points_(points), ws_(ws) {
    ws_.index.resize(points.size());
    for (uint32_t i = 0; i < points.size(); ++i) ws_.index[i] = i;
    ws_.cells.clear();
    ws_.cells.reserve(points.size() + 16);

    double min_x = points[0].x, max_x = points[0].x;
    double min_y = points[0].y, max_y = points[0].y;
    for (const Vec2& pt : points) {
      min_x = std::min(min_x, pt.x);
      max_x = std::max(max_x, pt.x);
      min_y = std::min(min_y, pt.y);
      max_y = std::max(max_y, pt.y);
    }
    const double cx = 0.5 * (min_x + max_x);
    const double cy = 0.5 * (min_y + max_y);
    double half = 0.5 * std::max(max_x - min_x, max_y - min_y);
    half = half > 0 ? half * (1.0 + 1e-12) + 1e-300 : 1.0;

    build(cx, cy, half, 0, static_cast<uint32_t>(points.size()), 0);
  }

  // Net repulsive force on point qi with per-mass magnitude coef / distance.
  Vec2 force_on(uint32_t qi, double theta, double coef) const {
    const Vec2 q = points_[qi];
    Vec2 f;
    accumulate(0, qi, q, theta * theta, coef, f);
    return f;
  }

 private:
  uint32_t build(double cx, double cy, double half, uint32_t first, uint32_t last, uint32_t depth) {
    const uint32_t id = static_cast<uint32_t>(ws_.cells.size());
    ws_.cells.push_back({});
    {
      Cell& cell = ws_.cells.back();
      cell.cx = cx;
      cell.cy = cy;
      cell.half = half;
      cell.count = last - first;
      double sx = 0.0, sy = 0.0;
      for (uint32_t i = first; i < last; ++i) {
        sx += points_[ws_.index[i]].x;
        sy += points_[ws_.index[i]].y;
      }
      cell.mx = sx / cell.count;
      cell.my = sy / cell.count;
      if (cell.count <= kLeafCapacity || depth >= kMaxDepth) {
        cell.leaf = true;
        cell.first = first;
        cell.last = last;
        return id;
      }
      cell.leaf = false;
    }

    // Partition the slice into the four quadrants: (x >= cx) + 2 * (y >= cy).
    auto begin = ws_.index.begin();
    auto mid_y = std::partition(begin + first, begin + last,
                                [&](uint32_t i) { return points_[i].y < cy; });
    auto mid_x0 =
        std::partition(begin + first, mid_y, [&](uint32_t i) { return points_[i].x < cx; });
    auto mid_x1 =
        std::partition(mid_y, begin + last, [&](uint32_t i) { return points_[i].x < cx; });
    const uint32_t bounds[5] = {first, static_cast<uint32_t>(mid_x0 - begin),
                                static_cast<uint32_t>(mid_y - begin),
                                static_cast<uint32_t>(mid_x1 - begin), last};
    const double h = 0.5 * half;
    const double child_cx[4] = {cx - h, cx + h, cx - h, cx + h};
    const double child_cy[4] = {cy - h, cy - h, cy + h, cy + h};
    for (int q = 0; q < 4; ++q) {
      if (bounds[q] == bounds[q + 1]) continue;
      const uint32_t child = build(child_cx[q], child_cy[q], h, bounds[q], bounds[q + 1], depth + 1);
      ws_.cells[id].child[q] = static_cast<int32_t>(child);
    }
    return id;
  }

  void accumulate(uint32_t cell_id, uint32_t qi, const Vec2& q, double theta_sq, double coef,
                  Vec2& f) const {
    const Cell& cell = ws_.cells[cell_id];
    if (cell.leaf) {
      for (uint32_t i = cell.first; i < cell.last; ++i) {
        const uint32_t j = ws_.index[i];
        if (j == qi) continue;
        const double dx = q.x - points_[j].x;
        const double dy = q.y - points_[j].y;
        const double dist_sq = dx * dx + dy * dy;
        const double inv = coef / dist_sq;
        f.x += inv * dx;
        f.y += inv * dy;
      }
      return;
    }
    const double dx = q.x - cell.mx;
    const double dy = q.y - cell.my;
    const double dist_sq = dx * dx + dy * dy;
    const double size = 2.0 * cell.half;
    // A cell geometrically containing the query is always opened; otherwise
    // apply the opening criterion size / dist <= theta.
    const bool contains =
        std::abs(q.x - cell.cx) <= cell.half && std::abs(q.y - cell.cy) <= cell.half;
    if (!contains && size * size <= theta_sq * dist_sq) {
      const double inv = cell.count * coef / dist_sq;
      f.x += inv * dx;
      f.y += inv * dy;
      return;
    }
    for (int q4 = 0; q4 < 4; ++q4) {
      if (cell.child[q4] >= 0)
        accumulate(static_cast<uint32_t>(cell.child[q4]), qi, q, theta_sq, coef, f);
    }
  }

  std::span<const Vec2> points_;
  Workspace& ws_;
};

}  // namespace

std::vector<Vec2> quadtree_repulsion(std::span<const Vec2> coords, double theta, double p,
                                     uint64_t jitter_seed, double repulsion_c) {
  const size_t n = coords.size();
  std::vector<Vec2> forces(n);
  if (n < 2) return forces;

  Workspace& ws = tl_ws;
  std::span<const Vec2> points = coords;

  // Exactly coincident points are separated before the tree is built; 1/dist
  // would be singular otherwise. The screen is O(n); the sort only runs when
  // a duplicate is actually possible.
  if (maybe_has_duplicates(coords, ws)) {
    ws.order.resize(n);
    for (uint32_t i = 0; i < n; ++i) ws.order[i] = i;
    std::sort(ws.order.begin(), ws.order.end(), [&](uint32_t a, uint32_t b) {
      if (coords[a].x != coords[b].x) return coords[a].x < coords[b].x;
      if (coords[a].y != coords[b].y) return coords[a].y < coords[b].y;
      return a < b;
    });
    ws.jittered.assign(coords.begin(), coords.end());
    const double magnitude = p * 1e-4;
    for (size_t i = 1; i < n; ++i) {
      const uint32_t prev = ws.order[i - 1], cur = ws.order[i];
      if (coords[prev].x == coords[cur].x && coords[prev].y == coords[cur].y) {
        const double angle =
            2.0 * std::numbers::pi * unit_real(ctr_hash(jitter_seed, kStreamJitter, cur, 0));
        ws.jittered[cur].x = coords[cur].x + magnitude * std::cos(angle);
        ws.jittered[cur].y = coords[cur].y + magnitude * std::sin(angle);
      }
    }
    points = ws.jittered;
  }

  const QuadTree tree(points, ws);
  const double coef = repulsion_c * p * p;
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < static_cast<int64_t>(n); ++i)
    forces[i] = tree.force_on(static_cast<uint32_t>(i), theta, coef);
  return forces;
}

}  // namespace tmap

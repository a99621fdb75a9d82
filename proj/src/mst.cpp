#include "tmap/mst.hpp"

#include <cassert>

namespace tmap {

namespace {

class UnionFind {
 public:
  explicit UnionFind(uint32_t n) : parent_(n), rank_(n, 0) {
    for (uint32_t i = 0; i < n; ++i) parent_[i] = i;
  }

  uint32_t find(uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(uint32_t a, uint32_t b) {
    uint32_t ra = find(a), rb = find(b);
    if (ra == rb) return false;
    if (rank_[ra] < rank_[rb]) std::swap(ra, rb);
    parent_[rb] = ra;
    if (rank_[ra] == rank_[rb]) ++rank_[ra];
    return true;
  }

 private:
  std::vector<uint32_t> parent_;
  std::vector<uint8_t> rank_;
};

}  // namespace

SpanningForest kruskal(const WeightedGraph& graph) {
  SpanningForest forest;
  forest.n = graph.n;
  if (graph.n == 0) return forest;

  UnionFind uf(graph.n);
  forest.tree_edges.reserve(graph.n > 0 ? graph.n - 1 : 0);
  for (const Edge& e : graph.edges) {
    assert(e.u < e.v && e.v < graph.n);
    if (uf.unite(e.u, e.v)) forest.tree_edges.push_back(e);
  }
  // Accepted edges are a subsequence of the sorted scan, so they stay sorted.
  forest.component = components(graph.n, forest.tree_edges);
  return forest;
}

std::vector<uint32_t> components(uint32_t n, const std::vector<Edge>& tree_edges) {
  std::vector<std::vector<uint32_t>> adjacency(n);
  for (const Edge& e : tree_edges) {
    adjacency[e.u].push_back(e.v);
    adjacency[e.v].push_back(e.u);
  }
  constexpr uint32_t kUnlabeled = 0xffffffffu;
  std::vector<uint32_t> label(n, kUnlabeled);
  std::vector<uint32_t> stack;
  for (uint32_t start = 0; start < n; ++start) {
    if (label[start] != kUnlabeled) continue;
    // Scanning starts in ascending order, so the first node reached in each
    // component is its smallest member.
    label[start] = start;
    stack.push_back(start);
    while (!stack.empty()) {
      const uint32_t node = stack.back();
      stack.pop_back();
      for (uint32_t next : adjacency[node]) {
        if (label[next] == kUnlabeled) {
          label[next] = start;
          stack.push_back(next);
        }
      }
    }
  }
  return label;
}

}  // namespace tmap

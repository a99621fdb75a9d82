#pragma once

#include <cstdint>
#include <vector>

#include "tmap/lsh_forest.hpp"

namespace tmap {

// Undirected edge in canonical form: u < v.
struct Edge {
  uint32_t u = 0;
  uint32_t v = 0;
  double w = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Undirected weighted graph. Edges are canonicalized (u < v), deduplicated,
// and sorted ascending by (w, u, v).
struct WeightedGraph {
  uint32_t n = 0;
  std::vector<Edge> edges;
};

struct KnnGraphConfig {
  uint32_t k = 10;
  uint32_t kc = 10;
};

// The seam for plugging in arbitrary nearest-neighbor techniques. A backend
// is immutable; per-node queries may run concurrently.
class NeighborBackend {
 public:
  virtual ~NeighborBackend() = default;
  virtual uint32_t size() const = 0;
  virtual std::vector<Neighbor> query_knn(uint32_t id, uint32_t k, uint32_t kc) const = 0;
};

class ForestBackend final : public NeighborBackend {
 public:
  explicit ForestBackend(const LshForest& forest) : forest_(&forest) {}
  uint32_t size() const override { return forest_->size(); }
  std::vector<Neighbor> query_knn(uint32_t id, uint32_t k, uint32_t kc) const override {
    return forest_->query_knn(id, k, kc);
  }

 private:
  const LshForest* forest_;
};

// Exhaustive scan over estimated signature distances. Oracle for LSH Forest
// recall, and the built-in demonstration of backend pluggability. kc is
// ignored.
class ExactBackend final : public NeighborBackend {
 public:
  explicit ExactBackend(const std::vector<Signature>& signatures);
  uint32_t size() const override { return n_; }
  std::vector<Neighbor> query_knn(uint32_t id, uint32_t k, uint32_t kc) const override;

 private:
  uint32_t n_ = 0;
  uint32_t d_ = 0;
  std::vector<uint64_t> sigs_;
};

// Queries the backend for every node and merges the per-node neighbor lists
// into the undirected c-approximate k-NN graph. The result may be
// disconnected; later phases handle that.
WeightedGraph build_knn_graph(const NeighborBackend& backend, const KnnGraphConfig& config);

// Raw edge-list entry before validation; u and v in either order.
struct EdgeListEntry {
  uint32_t u = 0;
  uint32_t v = 0;
  double w = 1.0;
};

// Builds a WeightedGraph from a user-supplied edge list: rejects self-loops
// and out-of-range nodes, collapses duplicate undirected pairs keeping the
// minimum weight, canonicalizes and sorts.
WeightedGraph graph_from_edge_list(const std::vector<EdgeListEntry>& entries, uint32_t n);

}  // namespace tmap

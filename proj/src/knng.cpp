#include "tmap/knng.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace tmap {

namespace {

void canonicalize(std::vector<Edge>& edges) {
  // Dedup keeps the minimum weight per undirected pair, then the edge order
  // is fixed by the (w, u, v) sort.
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.v != b.v) return a.v < b.v;
    return a.w < b.w;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; }),
              edges.end());
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
}

}  // namespace

ExactBackend::ExactBackend(const std::vector<Signature>& signatures) {
  if (signatures.empty()) raise(Errc::empty_input, "no signatures");
  n_ = static_cast<uint32_t>(signatures.size());
  d_ = static_cast<uint32_t>(signatures[0].components.size());
  for (const Signature& s : signatures) {
    if (s.components.size() != d_ || s.mode != signatures[0].mode)
      raise(Errc::heterogeneous_signatures, "signatures differ in length or mode");
  }
  sigs_.resize(static_cast<size_t>(n_) * d_);
  for (uint32_t i = 0; i < n_; ++i)
    std::copy(signatures[i].components.begin(), signatures[i].components.end(),
              sigs_.begin() + static_cast<size_t>(i) * d_);
}

std::vector<Neighbor> ExactBackend::query_knn(uint32_t id, uint32_t k, uint32_t /*kc*/) const {
  if (id >= n_) raise(Errc::unknown_id, "query id out of range");
  if (k < 1) raise(Errc::config_mismatch, "k must be >= 1");
  const uint64_t* q = sigs_.data() + static_cast<size_t>(id) * d_;
  std::vector<Neighbor> all;
  all.reserve(n_ - 1);
  for (uint32_t j = 0; j < n_; ++j) {
    if (j == id) continue;
    const uint64_t* s = sigs_.data() + static_cast<size_t>(j) * d_;
    uint32_t equal = 0;
    for (uint32_t i = 0; i < d_; ++i) equal += q[i] == s[i];
    all.push_back({j, 1.0 - static_cast<double>(equal) / static_cast<double>(d_)});
  }
  const auto by_distance_then_id = [](const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.id < b.id;
  };
  if (all.size() > k) {
    std::nth_element(all.begin(), all.begin() + k, all.end(), by_distance_then_id);
    all.resize(k);
  }
  std::sort(all.begin(), all.end(), by_distance_then_id);
  return all;
}

WeightedGraph build_knn_graph(const NeighborBackend& backend, const KnnGraphConfig& config) {
  if (config.k < 1 || config.kc < 1) raise(Errc::config_mismatch, "k and kc must be >= 1");
  const uint32_t n = backend.size();

  std::vector<std::vector<Neighbor>> results(n);
  std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic, 16)
  for (int64_t i = 0; i < static_cast<int64_t>(n); ++i) {
    try {
      results[i] = backend.query_knn(static_cast<uint32_t>(i), config.k, config.kc);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const std::exception& e) {
      raise(Errc::backend_failure, e.what());
    }
  }

  WeightedGraph graph;
  graph.n = n;
  size_t total = 0;
  for (const auto& r : results) total += r.size();
  graph.edges.reserve(total);
  for (uint32_t i = 0; i < n; ++i) {
    for (const Neighbor& nb : results[i]) {
      const uint32_t u = std::min(i, nb.id);
      const uint32_t v = std::max(i, nb.id);
      graph.edges.push_back({u, v, nb.distance});
    }
  }
  canonicalize(graph.edges);
  return graph;
}

WeightedGraph graph_from_edge_list(const std::vector<EdgeListEntry>& entries, uint32_t n) {
  WeightedGraph graph;
  graph.n = n;
  graph.edges.reserve(entries.size());
  for (size_t idx = 0; idx < entries.size(); ++idx) {
    const EdgeListEntry& e = entries[idx];
    if (e.u == e.v)
      raise(Errc::self_loop, "entry " + std::to_string(idx) + " is a self-loop on node " +
                                 std::to_string(e.u));
    if (e.u >= n || e.v >= n)
      raise(Errc::node_out_of_range,
            "entry " + std::to_string(idx) + " references a node >= " + std::to_string(n));
    if (!std::isfinite(e.w))
      raise(Errc::non_finite_weight, "entry " + std::to_string(idx) + " has a non-finite weight");
    graph.edges.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.w});
  }
  canonicalize(graph.edges);
  return graph;
}

}  // namespace tmap

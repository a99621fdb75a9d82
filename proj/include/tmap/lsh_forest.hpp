#pragma once

#include <cstdint>
#include <vector>

#include "tmap/hashing.hpp"

namespace tmap {

struct LshForestConfig {
  uint32_t l = 8;  // number of prefix trees; must divide the signature length d
};

struct Neighbor {
  uint32_t id = 0;
  double distance = 0.0;  // estimated Jaccard distance in [0, 1]
};

// Immutable index of n signatures across l prefix trees. Each tree covers one
// contiguous chunk of d/l signature components; a tree is a lexicographically
// sorted table of (chunk, id) pairs, queried with binary-search prefix ranges.
// Queries never mutate, so any number may run concurrently after build.
class LshForest {
 public:
  uint32_t size() const noexcept { return n_; }
  uint32_t d() const noexcept { return d_; }
  uint32_t l() const noexcept { return l_; }
  uint32_t chunk_len() const noexcept { return m_; }
  HashMode mode() const noexcept { return mode_; }

  const uint64_t* signature(uint32_t id) const { return sigs_.data() + static_cast<size_t>(id) * d_; }

  // Estimated Jaccard distance between two indexed items, from full signatures.
  double signature_distance(uint32_t a, uint32_t b) const;

  // Two-stage candidate harvest: starting at the full chunk length and
  // decreasing toward prefix length 1, collect from every tree all ids whose
  // chunk shares the current-length prefix with the query's chunk; stop as
  // soon as the accumulated distinct-id set reaches `budget` (the final
  // depth's harvest may overshoot) or the depth is exhausted. Returns the
  // accumulated ids, ascending.
  std::vector<uint32_t> query_candidates(const Signature& query, size_t budget) const;

  // Augmented k-NN query: harvest with budget k * kc excluding query_id,
  // re-rank every candidate by full-signature distance, and return the k
  // closest sorted ascending by (distance, id).
  std::vector<Neighbor> query_knn(uint32_t query_id, uint32_t k, uint32_t kc) const;

  friend LshForest build_index(std::vector<Signature> signatures, const LshForestConfig& config);

 private:
  uint32_t n_ = 0;
  uint32_t d_ = 0;
  uint32_t l_ = 0;
  uint32_t m_ = 0;  // chunk length d / l
  HashMode mode_ = HashMode::binary;
  std::vector<uint64_t> sigs_;                // n * d, row-major
  std::vector<std::vector<uint32_t>> trees_;  // per tree: ids sorted by (chunk, id)

  uint64_t chunk_component(uint32_t tree, uint32_t id, uint32_t pos) const {
    return signature(id)[tree * m_ + pos];
  }

  std::vector<uint32_t> harvest(const uint64_t* query_sig, size_t budget, uint32_t exclude) const;
};

LshForest build_index(std::vector<Signature> signatures, const LshForestConfig& config);

}  // namespace tmap

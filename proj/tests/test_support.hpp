#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "tmap/hashing.hpp"
#include "tmap/knng.hpp"

namespace tmap::test {

// Random sparse binary set with elements drawn from [0, universe).
inline SparseBinarySet random_set(std::mt19937_64& rng, uint32_t universe, uint32_t min_size,
                                  uint32_t max_size) {
  std::uniform_int_distribution<uint32_t> size_dist(min_size, max_size);
  std::uniform_int_distribution<uint32_t> elem_dist(0, universe - 1);
  const uint32_t size = size_dist(rng);
  std::set<uint32_t> elements;
  while (elements.size() < size) elements.insert(elem_dist(rng));
  SparseBinarySet set;
  set.elements.assign(elements.begin(), elements.end());
  return set;
}

inline std::vector<SparseBinarySet> random_sets(uint64_t seed, size_t n, uint32_t universe,
                                                uint32_t min_size, uint32_t max_size) {
  std::mt19937_64 rng(seed);
  std::vector<SparseBinarySet> sets;
  sets.reserve(n);
  for (size_t i = 0; i < n; ++i) sets.push_back(random_set(rng, universe, min_size, max_size));
  return sets;
}

inline WeightedVector random_vector(std::mt19937_64& rng, uint32_t dim, double zero_fraction = 0.3) {
  std::uniform_real_distribution<double> weight_dist(0.0, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  WeightedVector vec;
  vec.weights.resize(dim, 0.0);
  bool any = false;
  for (uint32_t j = 0; j < dim; ++j) {
    if (unit(rng) >= zero_fraction) {
      vec.weights[j] = weight_dist(rng);
      any = any || vec.weights[j] > 0;
    }
  }
  if (!any) vec.weights[0] = 1.0;
  return vec;
}

// Clustered random sets: items cycle through random prototypes, each with a
// few elements toggled. Gives the strong nearest-neighbor structure typical
// of real corpora.
inline std::vector<SparseBinarySet> clustered_sets(uint64_t seed, size_t n, uint32_t universe,
                                                   size_t prototypes, int toggles = 6) {
  std::mt19937_64 rng(seed);
  std::vector<SparseBinarySet> protos;
  protos.reserve(prototypes);
  for (size_t c = 0; c < prototypes; ++c) protos.push_back(random_set(rng, universe, 25, 45));
  std::uniform_int_distribution<uint32_t> elem(0, universe - 1);
  std::vector<SparseBinarySet> items;
  items.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    std::set<uint32_t> s(protos[i % prototypes].elements.begin(),
                         protos[i % prototypes].elements.end());
    for (int t = 0; t < toggles; ++t) {
      const uint32_t e = elem(rng);
      if (s.count(e))
        s.erase(e);
      else
        s.insert(e);
    }
    if (s.empty()) s.insert(elem(rng));
    SparseBinarySet out;
    out.elements.assign(s.begin(), s.end());
    items.push_back(std::move(out));
  }
  return items;
}

// Random tree on n nodes: each node > 0 attaches to a random earlier node.
inline std::vector<Edge> random_tree_edges(std::mt19937_64& rng, uint32_t n) {
  std::uniform_real_distribution<double> weight_dist(0.0, 1.0);
  std::vector<Edge> edges;
  for (uint32_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<uint32_t> pick(0, v - 1);
    const uint32_t u = pick(rng);
    edges.push_back({std::min(u, v), std::max(u, v), weight_dist(rng)});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
  return edges;
}

}  // namespace tmap::test

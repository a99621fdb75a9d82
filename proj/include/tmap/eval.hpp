#pragma once

#include <cstdint>
#include <vector>

#include "tmap/hashing.hpp"
#include "tmap/layout.hpp"
#include "tmap/mst.hpp"
#include "tmap/pipeline.hpp"

namespace tmap {

enum class Metric { jaccard, weighted_jaccard, euclidean };

// Exact 1-nearest neighbors in the original space, ties by smallest id.
struct NnTable {
  std::vector<uint32_t> nn;
  std::vector<double> distance;
};

NnTable true_nearest_neighbors(const std::vector<SparseBinarySet>& items, Metric metric);
NnTable true_nearest_neighbors(const std::vector<WeightedVector>& items, Metric metric);

// Ranks above this value share the histogram's overflow bucket.
inline constexpr uint32_t kRankHistogramMax = 100;

// Per-item competition rank of the true nearest neighbor under an embedded
// distance: rank = 1 + count of items strictly closer, ties share the
// minimal rank.
struct RankReport {
  std::vector<uint32_t> ranks;
  std::vector<uint64_t> histogram;  // [r-1] = count of rank r, last = rank > kRankHistogramMax
  double preservation_rate = 0.0;
};

// Embedded distance = hop count along tree edges; pairs in different
// components are infinitely far, ranking past every finite-distance item.
// preservation_rate is the fraction of items whose true NN is tree-adjacent.
RankReport topological_ranks(const SpanningForest& forest, const NnTable& nn_table);

// Embedded distance = planar Euclidean distance; preservation_rate is the
// fraction of items with rank 1.
RankReport euclidean_ranks(const std::vector<Vec2>& coords, const NnTable& nn_table);

// Seeded generator specification for the scaling study: each item is a
// random subset of a fixed-size element universe.
struct BenchSpec {
  uint32_t universe = 128;
  double density = 0.5;
  uint64_t seed = 42;
};

struct BenchResult {
  std::vector<size_t> sizes;
  std::vector<PhaseTimings> timings;
  double slope = 0.0;  // least-squares slope of log(total time) vs log(n)
};

std::vector<SparseBinarySet> bench_items(size_t n, const BenchSpec& spec);

BenchResult bench_pipeline(const std::vector<size_t>& sizes, const BenchSpec& spec,
                           const PipelineParams& params);

}  // namespace tmap

#pragma once

#include <cstdint>
#include <vector>

#include "tmap/hashing.hpp"
#include "tmap/knng.hpp"
#include "tmap/layout.hpp"
#include "tmap/lsh_forest.hpp"
#include "tmap/mst.hpp"

namespace tmap {

struct PipelineParams {
  HashingConfig hashing;
  LshForestConfig forest;
  KnnGraphConfig knng;
  LayoutConfig layout;
};

// Wall-clock seconds per phase: I index, II knng, III mst, IV layout.
struct PhaseTimings {
  double index_s = 0.0;
  double knng_s = 0.0;
  double mst_s = 0.0;
  double layout_s = 0.0;
  double total_s = 0.0;
};

struct PipelineArtifacts {
  SpanningForest spanning;
  LayoutResult layout;
  PhaseTimings timings;
};

// Signature computation for a whole data set, parallel over items.
std::vector<Signature> signatures_of(const std::vector<SparseBinarySet>& items,
                                     const HashingConfig& config);
std::vector<Signature> signatures_of(const std::vector<WeightedVector>& items,
                                     const HashingConfig& config);

// The four-phase composition: index, k-NN graph, spanning forest, layout.
PipelineArtifacts run_phases(const std::vector<SparseBinarySet>& items, const PipelineParams& params);
PipelineArtifacts run_phases(const std::vector<WeightedVector>& items, const PipelineParams& params);

// Alternate entry point: a user-supplied weighted edge list skips phases I-II.
PipelineArtifacts run_phases_edge_list(const std::vector<EdgeListEntry>& entries, uint32_t n,
                                       const LayoutConfig& layout_config);

}  // namespace tmap

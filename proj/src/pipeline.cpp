#include "tmap/pipeline.hpp"

#include <chrono>
#include <exception>

namespace tmap {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Item, typename Fn>
std::vector<Signature> parallel_signatures(const std::vector<Item>& items, Fn&& per_item) {
  std::vector<Signature> sigs(items.size());
  std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic, 64)
  for (int64_t i = 0; i < static_cast<int64_t>(items.size()); ++i) {
    try {
      sigs[i] = per_item(items[i]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return sigs;
}

template <typename Item>
PipelineArtifacts run_phases_impl(const std::vector<Item>& items, const PipelineParams& params) {
  PipelineArtifacts out;
  const auto t_start = Clock::now();

  std::vector<Signature> sigs = signatures_of(items, params.hashing);
  const LshForest forest = build_index(std::move(sigs), params.forest);
  out.timings.index_s = seconds_since(t_start);

  const auto t_knng = Clock::now();
  const WeightedGraph graph = build_knn_graph(ForestBackend(forest), params.knng);
  out.timings.knng_s = seconds_since(t_knng);

  const auto t_mst = Clock::now();
  out.spanning = kruskal(graph);
  out.timings.mst_s = seconds_since(t_mst);

  const auto t_layout = Clock::now();
  out.layout = layout(out.spanning, params.layout);
  out.timings.layout_s = seconds_since(t_layout);

  out.timings.total_s = seconds_since(t_start);
  return out;
}

}  // namespace

std::vector<Signature> signatures_of(const std::vector<SparseBinarySet>& items,
                                     const HashingConfig& config) {
  if (items.empty()) raise(Errc::empty_input, "no items");
  const HashParams params = derive_hash_params(config);
  return parallel_signatures(items,
                             [&](const SparseBinarySet& s) { return minhash_signature(s, params); });
}

std::vector<Signature> signatures_of(const std::vector<WeightedVector>& items,
                                     const HashingConfig& config) {
  if (items.empty()) raise(Errc::empty_input, "no items");
  const HashParams params = derive_hash_params(config);
  return parallel_signatures(
      items, [&](const WeightedVector& v) { return weighted_minhash_signature(v, params); });
}

PipelineArtifacts run_phases(const std::vector<SparseBinarySet>& items, const PipelineParams& params) {
  return run_phases_impl(items, params);
}

PipelineArtifacts run_phases(const std::vector<WeightedVector>& items, const PipelineParams& params) {
  return run_phases_impl(items, params);
}

PipelineArtifacts run_phases_edge_list(const std::vector<EdgeListEntry>& entries, uint32_t n,
                                       const LayoutConfig& layout_config) {
  PipelineArtifacts out;
  const auto t_start = Clock::now();

  const WeightedGraph graph = graph_from_edge_list(entries, n);

  const auto t_mst = Clock::now();
  out.spanning = kruskal(graph);
  out.timings.mst_s = seconds_since(t_mst);

  const auto t_layout = Clock::now();
  out.layout = layout(out.spanning, layout_config);
  out.timings.layout_s = seconds_since(t_layout);

  out.timings.total_s = seconds_since(t_start);
  return out;
}

}  // namespace tmap

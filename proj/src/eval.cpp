#include "tmap/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tmap/rng.hpp"

namespace tmap {

namespace {

constexpr uint64_t kStreamBench = 0x50;
constexpr uint32_t kInfiniteHops = 0xffffffffu;

template <typename DistanceFn>
NnTable nn_scan(size_t n, DistanceFn&& distance) {
  if (n < 2) raise(Errc::size_mismatch, "need at least two items");
  NnTable table;
  table.nn.resize(n);
  table.distance.resize(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (int64_t i = 0; i < static_cast<int64_t>(n); ++i) {
    uint32_t best = kInfiniteHops;
    double best_dist = std::numeric_limits<double>::infinity();
    for (uint32_t j = 0; j < n; ++j) {
      if (j == static_cast<uint32_t>(i)) continue;
      const double d = distance(static_cast<uint32_t>(i), j);
      // Strict < with ascending j keeps the smallest id on ties.
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    table.nn[i] = best;
    table.distance[i] = best_dist;
  }
  return table;
}

RankReport finalize_report(std::vector<uint32_t> ranks, size_t preserved) {
  RankReport report;
  report.ranks = std::move(ranks);
  report.histogram.assign(kRankHistogramMax + 1, 0);
  for (uint32_t r : report.ranks) {
    if (r <= kRankHistogramMax)
      ++report.histogram[r - 1];
    else
      ++report.histogram[kRankHistogramMax];
  }
  report.preservation_rate =
      report.ranks.empty() ? 0.0
                           : static_cast<double>(preserved) / static_cast<double>(report.ranks.size());
  return report;
}

}  // namespace

NnTable true_nearest_neighbors(const std::vector<SparseBinarySet>& items, Metric metric) {
  if (metric != Metric::jaccard)
    raise(Errc::metric_mismatch, "sparse binary sets support the jaccard metric");
  return nn_scan(items.size(),
                 [&](uint32_t i, uint32_t j) { return 1.0 - exact_jaccard(items[i], items[j]); });
}

NnTable true_nearest_neighbors(const std::vector<WeightedVector>& items, Metric metric) {
  if (metric == Metric::weighted_jaccard) {
    return nn_scan(items.size(), [&](uint32_t i, uint32_t j) {
      return 1.0 - exact_weighted_jaccard(items[i], items[j]);
    });
  }
  if (metric == Metric::euclidean) {
    for (size_t i = 1; i < items.size(); ++i) {
      if (items[i].weights.size() != items[0].weights.size())
        raise(Errc::dimension_mismatch, "vectors differ in dimensionality");
    }
    return nn_scan(items.size(), [&](uint32_t i, uint32_t j) {
      double sum = 0.0;
      for (size_t c = 0; c < items[i].weights.size(); ++c) {
        const double d = items[i].weights[c] - items[j].weights[c];
        sum += d * d;
      }
      return std::sqrt(sum);
    });
  }
  raise(Errc::metric_mismatch, "weighted vectors support weighted-jaccard and euclidean metrics");
}

RankReport topological_ranks(const SpanningForest& forest, const NnTable& nn_table) {
  const uint32_t n = forest.n;
  if (nn_table.nn.size() != n) raise(Errc::size_mismatch, "nn table does not cover the forest");

  std::vector<std::vector<uint32_t>> adjacency(n);
  for (const Edge& e : forest.tree_edges) {
    adjacency[e.u].push_back(e.v);
    adjacency[e.v].push_back(e.u);
  }

  std::vector<uint32_t> ranks(n, 1);
  std::vector<uint8_t> adjacent_nn(n, 0);
#pragma omp parallel
  {
    std::vector<uint32_t> hops(n);
    std::vector<uint32_t> queue(n);
#pragma omp for schedule(dynamic, 16)
    for (int64_t i = 0; i < static_cast<int64_t>(n); ++i) {
      std::fill(hops.begin(), hops.end(), kInfiniteHops);
      hops[i] = 0;
      size_t head = 0, tail = 0;
      queue[tail++] = static_cast<uint32_t>(i);
      while (head < tail) {
        const uint32_t node = queue[head++];
        for (uint32_t next : adjacency[node]) {
          if (hops[next] == kInfiniteHops) {
            hops[next] = hops[node] + 1;
            queue[tail++] = next;
          }
        }
      }
      const uint32_t target = nn_table.nn[i];
      const uint32_t target_hops = hops[target];
      uint32_t closer = 0;
      if (target_hops == kInfiniteHops) {
        // Every reachable item counts as strictly closer than a
        // cross-component pair.
        for (uint32_t j = 0; j < n; ++j)
          closer += j != static_cast<uint32_t>(i) && hops[j] != kInfiniteHops;
      } else {
        for (uint32_t j = 0; j < n; ++j)
          closer += j != static_cast<uint32_t>(i) && hops[j] < target_hops;
      }
      ranks[i] = 1 + closer;
      adjacent_nn[i] = target_hops == 1;
    }
  }

  size_t preserved = 0;
  for (uint8_t a : adjacent_nn) preserved += a;
  return finalize_report(std::move(ranks), preserved);
}

RankReport euclidean_ranks(const std::vector<Vec2>& coords, const NnTable& nn_table) {
  const size_t n = coords.size();
  if (nn_table.nn.size() != n) raise(Errc::size_mismatch, "nn table does not cover the coordinates");

  std::vector<uint32_t> ranks(n, 1);
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < static_cast<int64_t>(n); ++i) {
    const Vec2 q = coords[i];
    const Vec2 t = coords[nn_table.nn[i]];
    const double target_sq = (t.x - q.x) * (t.x - q.x) + (t.y - q.y) * (t.y - q.y);
    uint32_t closer = 0;
    for (uint32_t j = 0; j < n; ++j) {
      if (j == static_cast<uint32_t>(i)) continue;
      const double d_sq = (coords[j].x - q.x) * (coords[j].x - q.x) +
                          (coords[j].y - q.y) * (coords[j].y - q.y);
      closer += d_sq < target_sq;
    }
    ranks[i] = 1 + closer;
  }

  size_t preserved = 0;
  for (uint32_t r : ranks) preserved += r == 1;
  return finalize_report(std::move(ranks), preserved);
}

std::vector<SparseBinarySet> bench_items(size_t n, const BenchSpec& spec) {
  std::vector<SparseBinarySet> items(n);
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < static_cast<int64_t>(n); ++i) {
    SparseBinarySet& set = items[i];
    for (uint32_t x = 0; x < spec.universe; ++x) {
      if (unit_real(ctr_hash(spec.seed, kStreamBench, i, x)) < spec.density)
        set.elements.push_back(x);
    }
    if (set.elements.empty())
      set.elements.push_back(static_cast<uint32_t>(ctr_hash(spec.seed, kStreamBench, i, spec.universe)) %
                             spec.universe);
  }
  return items;
}

BenchResult bench_pipeline(const std::vector<size_t>& sizes, const BenchSpec& spec,
                           const PipelineParams& params) {
  if (sizes.size() < 2) raise(Errc::config_mismatch, "need at least two sizes");
  for (size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) raise(Errc::config_mismatch, "sizes must be ascending");
  }

  BenchResult result;
  result.sizes = sizes;
  for (size_t n : sizes) {
    const std::vector<SparseBinarySet> items = bench_items(n, spec);
    const PipelineArtifacts artifacts = run_phases(items, params);
    result.timings.push_back(artifacts.timings);
  }

  // Least-squares slope of log(total) against log(n).
  const size_t m = sizes.size();
  double mean_x = 0.0, mean_y = 0.0;
  for (size_t i = 0; i < m; ++i) {
    mean_x += std::log(static_cast<double>(sizes[i]));
    mean_y += std::log(result.timings[i].total_s);
  }
  mean_x /= m;
  mean_y /= m;
  double cov = 0.0, var = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const double dx = std::log(static_cast<double>(sizes[i])) - mean_x;
    const double dy = std::log(result.timings[i].total_s) - mean_y;
    cov += dx * dy;
    var += dx * dx;
  }
  result.slope = cov / var;
  return result;
}

}  // namespace tmap

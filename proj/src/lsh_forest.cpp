#include "tmap/lsh_forest.hpp"

#include <algorithm>
#include <limits>

namespace tmap {

namespace {

constexpr uint32_t kNoExclude = std::numeric_limits<uint32_t>::max();

// Per-thread dedup scratch with epoch stamps, so repeated queries skip the
// O(n) reset.
struct DedupScratch {
  std::vector<uint64_t> stamp;
  uint64_t epoch = 0;
};

thread_local DedupScratch tl_scratch;

}  // namespace

LshForest build_index(std::vector<Signature> signatures, const LshForestConfig& config) {
  if (signatures.empty()) raise(Errc::empty_input, "no signatures to index");
  const uint32_t d = static_cast<uint32_t>(signatures[0].components.size());
  const HashMode mode = signatures[0].mode;
  if (d == 0) raise(Errc::heterogeneous_signatures, "zero-length signature");
  for (const Signature& s : signatures) {
    if (s.mode != mode || s.components.size() != d)
      raise(Errc::heterogeneous_signatures, "signatures differ in length or mode");
  }
  if (config.l < 1 || d % config.l != 0)
    raise(Errc::config_mismatch, "l must divide d (d=" + std::to_string(d) +
                                     ", l=" + std::to_string(config.l) + ")");

  LshForest forest;
  forest.n_ = static_cast<uint32_t>(signatures.size());
  forest.d_ = d;
  forest.l_ = config.l;
  forest.m_ = d / config.l;
  forest.mode_ = mode;
  forest.sigs_.resize(static_cast<size_t>(forest.n_) * d);
  for (uint32_t i = 0; i < forest.n_; ++i) {
    std::copy(signatures[i].components.begin(), signatures[i].components.end(),
              forest.sigs_.begin() + static_cast<size_t>(i) * d);
    signatures[i].components.clear();
    signatures[i].components.shrink_to_fit();
  }

  forest.trees_.resize(forest.l_);
  for (uint32_t t = 0; t < forest.l_; ++t) {
    std::vector<uint32_t>& ids = forest.trees_[t];
    ids.resize(forest.n_);
    for (uint32_t i = 0; i < forest.n_; ++i) ids[i] = i;
    const uint32_t m = forest.m_;
    std::sort(ids.begin(), ids.end(), [&](uint32_t x, uint32_t y) {
      const uint64_t* px = forest.signature(x) + t * m;
      const uint64_t* py = forest.signature(y) + t * m;
      for (uint32_t i = 0; i < m; ++i) {
        if (px[i] != py[i]) return px[i] < py[i];
      }
      return x < y;
    });
  }
  return forest;
}

double LshForest::signature_distance(uint32_t a, uint32_t b) const {
  const uint64_t* pa = signature(a);
  const uint64_t* pb = signature(b);
  uint32_t equal = 0;
  for (uint32_t i = 0; i < d_; ++i) equal += pa[i] == pb[i];
  return 1.0 - static_cast<double>(equal) / static_cast<double>(d_);
}

// Descends one tree: ranges[p] = the [lo, hi) slice of the tree's sorted id
// table sharing the (p+1)-length prefix with the query chunk. Within the
// depth-p range all entries agree with the query on the first p components,
// so the slice is ordered by component p alone and each narrowing is a pair
// of binary searches on that single component. Empty ranges are positioned
// where the prefix would insert, keeping every range nested in its parent.
// Descent stops at the first empty range; deeper ranges would be empty too.
static void descend_tree(const LshForest& forest, const std::vector<uint32_t>& ids, uint32_t tree,
                         uint32_t chunk_len, const uint64_t* query_chunk,
                         std::vector<std::pair<uint32_t, uint32_t>>& ranges) {
  ranges.clear();
  uint32_t lo = 0, hi = static_cast<uint32_t>(ids.size());
  for (uint32_t pos = 0; pos < chunk_len && lo < hi; ++pos) {
    const uint64_t qc = query_chunk[pos];
    const auto begin = ids.begin() + lo;
    const auto end = ids.begin() + hi;
    const auto lb = std::lower_bound(begin, end, qc, [&](uint32_t id, uint64_t value) {
      return forest.signature(id)[tree * chunk_len + pos] < value;
    });
    const auto ub = std::upper_bound(lb, end, qc, [&](uint64_t value, uint32_t id) {
      return value < forest.signature(id)[tree * chunk_len + pos];
    });
    lo = static_cast<uint32_t>(lb - ids.begin());
    hi = static_cast<uint32_t>(ub - ids.begin());
    ranges.emplace_back(lo, hi);
    if (lo == hi) break;
  }
}

std::vector<uint32_t> LshForest::harvest(const uint64_t* query_sig, size_t budget,
                                         uint32_t exclude) const {
  DedupScratch& scratch = tl_scratch;
  if (scratch.stamp.size() < n_) scratch.stamp.resize(n_, 0);
  const uint64_t epoch = ++scratch.epoch;

  // Per-tree nested prefix ranges, deepest first.
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> tree_ranges(l_);
  for (uint32_t t = 0; t < l_; ++t)
    descend_tree(*this, trees_[t], t, m_, query_sig + t * m_, tree_ranges[t]);

  std::vector<uint32_t> found;
  auto emit = [&](uint32_t tree, uint32_t from, uint32_t to) {
    const std::vector<uint32_t>& ids = trees_[tree];
    for (uint32_t idx = from; idx < to; ++idx) {
      const uint32_t id = ids[idx];
      if (id == exclude) continue;
      if (scratch.stamp[id] != epoch) {
        scratch.stamp[id] = epoch;
        found.push_back(id);
      }
    }
  };

  // Synchronized descent: all trees contribute at a depth before the pool
  // widens to the next shallower prefix.
  for (uint32_t depth = m_; depth >= 1; --depth) {
    for (uint32_t t = 0; t < l_; ++t) {
      const auto& ranges = tree_ranges[t];
      if (depth > ranges.size()) continue;
      const auto [lo, hi] = ranges[depth - 1];
      if (depth == ranges.size()) {
        emit(t, lo, hi);
      } else {
        const auto [ilo, ihi] = ranges[depth];
        emit(t, lo, ilo);
        emit(t, ihi, hi);
      }
    }
    if (found.size() >= budget) break;
  }
  return found;
}

std::vector<uint32_t> LshForest::query_candidates(const Signature& query, size_t budget) const {
  if (query.mode != mode_ || query.components.size() != d_)
    raise(Errc::incompatible_query, "query signature does not match the index");
  if (budget == 0) return {};
  std::vector<uint32_t> found = harvest(query.components.data(), budget, kNoExclude);
  std::sort(found.begin(), found.end());
  return found;
}

std::vector<Neighbor> LshForest::query_knn(uint32_t query_id, uint32_t k, uint32_t kc) const {
  if (query_id >= n_) raise(Errc::unknown_id, "query id " + std::to_string(query_id) + " out of range");
  if (k < 1 || kc < 1) raise(Errc::config_mismatch, "k and kc must be >= 1");

  const size_t budget = static_cast<size_t>(k) * static_cast<size_t>(kc);
  const std::vector<uint32_t> found = harvest(signature(query_id), budget, query_id);

  std::vector<Neighbor> candidates;
  candidates.reserve(found.size());
  for (uint32_t id : found) candidates.push_back({id, signature_distance(query_id, id)});
  std::sort(candidates.begin(), candidates.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.id < b.id;
  });
  if (candidates.size() > k) candidates.resize(k);
  return candidates;
}

}  // namespace tmap

#include "tmap/hashing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tmap/rng.hpp"

namespace tmap {

namespace {

// Stream tags for the counter-based generator.
constexpr uint64_t kStreamLinearA = 0x01;
constexpr uint64_t kStreamLinearB = 0x02;
constexpr uint64_t kStreamIcwsR1 = 0x10;
constexpr uint64_t kStreamIcwsR2 = 0x11;
constexpr uint64_t kStreamIcwsC1 = 0x12;
constexpr uint64_t kStreamIcwsC2 = 0x13;
constexpr uint64_t kStreamIcwsBeta = 0x14;

// Reduces a product of two 61-bit values (plus a 61-bit offset) modulo the
// Mersenne prime 2^61 - 1 by folding the high bits twice.
inline uint64_t mod_mersenne61(unsigned __int128 v) {
  uint64_t r = static_cast<uint64_t>(v & kMersenne61) + static_cast<uint64_t>(v >> 61);
  r = (r & kMersenne61) + (r >> 61);
  if (r >= kMersenne61) r -= kMersenne61;
  return r;
}

// Elements are scrambled by a fixed bijection before the affine map. Raw
// small integers form arithmetic progressions under x -> a*x + b, which
// skews which element attains the minimum; mixing first removes that
// structure. The extra collision probability from folding 64 bits into the
// field is ~2^-61 per pair.
inline uint64_t scramble_element(uint32_t x) {
  return mix64(0x9e3779b97f4a7c15ull ^ x) & kMersenne61;
}

inline double exp1_draw(uint64_t seed, uint64_t stream, uint64_t sample, uint64_t dim) {
  return -std::log(unit_real(ctr_hash(seed, stream, sample, dim)));
}

struct IcwsDraw {
  double r;      // Gamma(2,1)
  double log_c;  // log of an independent Gamma(2,1)
  double beta;   // Uniform(0,1)
};

// Per-(sample, dimension) randomness, generated on demand.
// Gamma(2,1) is the sum of two independent Exponential(1) draws.
inline IcwsDraw icws_draw(uint64_t seed, uint32_t sample, uint32_t dim) {
  IcwsDraw d;
  d.r = exp1_draw(seed, kStreamIcwsR1, sample, dim) + exp1_draw(seed, kStreamIcwsR2, sample, dim);
  d.log_c =
      std::log(exp1_draw(seed, kStreamIcwsC1, sample, dim) + exp1_draw(seed, kStreamIcwsC2, sample, dim));
  d.beta = unit_real(ctr_hash(seed, kStreamIcwsBeta, sample, dim));
  return d;
}

inline int32_t clamp_level(double t) {
  if (t >= static_cast<double>(std::numeric_limits<int32_t>::max()))
    return std::numeric_limits<int32_t>::max();
  if (t <= static_cast<double>(std::numeric_limits<int32_t>::min()))
    return std::numeric_limits<int32_t>::min();
  return static_cast<int32_t>(t);
}

void validate_config(const HashingConfig& config) {
  if (config.d < 1) raise(Errc::config_mismatch, "d must be >= 1");
  if (config.mode == HashMode::weighted && config.dim < 1)
    raise(Errc::config_mismatch, "dim must be >= 1 in weighted mode");
}

}  // namespace

HashParams derive_hash_params(const HashingConfig& config) {
  validate_config(config);
  HashParams params;
  params.config = config;
  if (config.mode == HashMode::binary) {
    params.a.resize(config.d);
    params.b.resize(config.d);
    for (uint32_t i = 0; i < config.d; ++i) {
      // 2^64 mod (P-1) and 2^64 mod P are both 8, so the modulo bias is ~2^-61.
      params.a[i] = 1 + ctr_hash(config.seed, kStreamLinearA, i, 0) % (kMersenne61 - 1);
      params.b[i] = ctr_hash(config.seed, kStreamLinearB, i, 0) % kMersenne61;
    }
  }
  return params;
}

Signature minhash_signature(const SparseBinarySet& set, const HashParams& params) {
  const HashingConfig& config = params.config;
  if (config.mode != HashMode::binary)
    raise(Errc::mode_mismatch, "minhash_signature requires binary mode");
  if (set.elements.empty())
    raise(Errc::empty_set, "empty set has undefined Jaccard similarity");

  Signature sig;
  sig.mode = HashMode::binary;
  sig.components.resize(config.d);
  std::vector<uint64_t> scrambled(set.elements.size());
  for (size_t e = 0; e < set.elements.size(); ++e) scrambled[e] = scramble_element(set.elements[e]);
  for (uint32_t i = 0; i < config.d; ++i) {
    const unsigned __int128 a = params.a[i];
    const uint64_t b = params.b[i];
    uint64_t best = std::numeric_limits<uint64_t>::max();
    for (uint64_t x : scrambled) {
      const uint64_t h = mod_mersenne61(a * x + b);
      best = std::min(best, h);
    }
    sig.components[i] = best;
  }
  return sig;
}

Signature minhash_signature(const SparseBinarySet& set, const HashingConfig& config) {
  return minhash_signature(set, derive_hash_params(config));
}

Signature weighted_minhash_signature(const WeightedVector& vec, const HashParams& params) {
  const HashingConfig& config = params.config;
  if (config.mode != HashMode::weighted)
    raise(Errc::mode_mismatch, "weighted_minhash_signature requires weighted mode");
  if (vec.weights.size() != config.dim)
    raise(Errc::length_mismatch, "vector dimensionality does not match config.dim");

  // Collect (dimension, log weight) for the positive dimensions, ascending.
  std::vector<std::pair<uint32_t, double>> log_weights;
  for (uint32_t j = 0; j < vec.weights.size(); ++j) {
    const double w = vec.weights[j];
    if (!std::isfinite(w)) raise(Errc::non_finite_weight, "weight " + std::to_string(j) + " is not finite");
    if (w < 0) raise(Errc::negative_weight, "weight " + std::to_string(j) + " is negative");
    if (w > 0) log_weights.emplace_back(j, std::log(w));
  }
  if (log_weights.empty()) raise(Errc::zero_vector, "all weights are zero");

  Signature sig;
  sig.mode = HashMode::weighted;
  sig.components.resize(config.d);
  for (uint32_t i = 0; i < config.d; ++i) {
    double best = std::numeric_limits<double>::infinity();
    uint32_t best_j = 0;
    double best_t = 0.0;
    for (const auto& [j, log_w] : log_weights) {
      const IcwsDraw draw = icws_draw(config.seed, i, j);
      const double t = std::floor(log_w / draw.r + draw.beta);
      const double log_y = draw.r * (t - draw.beta);
      const double log_a = draw.log_c - log_y - draw.r;
      // Strict < keeps the smallest dimension index on ties.
      if (log_a < best) {
        best = log_a;
        best_j = j;
        best_t = t;
      }
    }
    sig.components[i] = pack_weighted_component(best_j, clamp_level(best_t));
  }
  return sig;
}

Signature weighted_minhash_signature(const WeightedVector& vec, const HashingConfig& config) {
  return weighted_minhash_signature(vec, derive_hash_params(config));
}

double estimate_jaccard(const Signature& a, const Signature& b) {
  if (a.mode != b.mode) raise(Errc::mode_mismatch, "signatures have different modes");
  if (a.components.size() != b.components.size() || a.components.empty())
    raise(Errc::length_mismatch, "signatures have different lengths");
  size_t equal = 0;
  for (size_t i = 0; i < a.components.size(); ++i) equal += a.components[i] == b.components[i];
  return static_cast<double>(equal) / static_cast<double>(a.components.size());
}

double exact_jaccard(const SparseBinarySet& a, const SparseBinarySet& b) {
  size_t i = 0, j = 0, both = 0, either = 0;
  while (i < a.elements.size() && j < b.elements.size()) {
    ++either;
    if (a.elements[i] == b.elements[j]) {
      ++both;
      ++i;
      ++j;
    } else if (a.elements[i] < b.elements[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  either += (a.elements.size() - i) + (b.elements.size() - j);
  if (either == 0) raise(Errc::empty_set, "Jaccard of two empty sets is undefined");
  return static_cast<double>(both) / static_cast<double>(either);
}

double exact_weighted_jaccard(const WeightedVector& u, const WeightedVector& v) {
  if (u.weights.size() != v.weights.size())
    raise(Errc::length_mismatch, "vectors have different dimensionality");
  double sum_min = 0.0, sum_max = 0.0;
  for (size_t j = 0; j < u.weights.size(); ++j) {
    const double a = u.weights[j], b = v.weights[j];
    if (!std::isfinite(a) || !std::isfinite(b)) raise(Errc::non_finite_weight, "non-finite weight");
    if (a < 0 || b < 0) raise(Errc::negative_weight, "negative weight");
    sum_min += std::min(a, b);
    sum_max += std::max(a, b);
  }
  if (sum_max == 0.0) raise(Errc::zero_vector, "weighted Jaccard of two zero vectors is undefined");
  return sum_min / sum_max;
}

}  // namespace tmap

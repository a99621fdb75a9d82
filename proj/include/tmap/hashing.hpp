#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tmap/error.hpp"

namespace tmap {

enum class HashMode { binary, weighted };

// One row of binary input data: a set of element ids, strictly ascending.
struct SparseBinarySet {
  std::vector<uint32_t> elements;
};

// One row of weighted input data: non-negative finite weights, at least one
// of them positive.
struct WeightedVector {
  std::vector<double> weights;
};

struct HashingConfig {
  uint32_t d = 512;               // number of hash functions / samples
  uint64_t seed = 42;
  HashMode mode = HashMode::binary;
  uint32_t dim = 0;               // weighted mode only: input dimensionality
};

// Fixed-length sketch of one item. In weighted mode each component is a
// packed (dimension index, quantized level) pair; packed values compare
// equal exactly when both parts agree.
struct Signature {
  HashMode mode = HashMode::binary;
  std::vector<uint64_t> components;
};

inline constexpr uint64_t kMersenne61 = (uint64_t{1} << 61) - 1;

// Derived hash family parameters. Binary mode materializes the d multiply-add
// pairs; weighted-mode draws are generated on demand from the counter stream
// keyed by (seed, sample, dimension), so arbitrarily high input
// dimensionality needs no parameter table.
struct HashParams {
  HashingConfig config;
  std::vector<uint64_t> a;  // binary: d multipliers in [1, P)
  std::vector<uint64_t> b;  // binary: d offsets in [0, P)
};

HashParams derive_hash_params(const HashingConfig& config);

Signature minhash_signature(const SparseBinarySet& set, const HashParams& params);
Signature minhash_signature(const SparseBinarySet& set, const HashingConfig& config);

Signature weighted_minhash_signature(const WeightedVector& vec, const HashParams& params);
Signature weighted_minhash_signature(const WeightedVector& vec, const HashingConfig& config);

// Fraction of component positions on which the two signatures agree.
// Estimated Jaccard distance is 1 minus this value.
double estimate_jaccard(const Signature& a, const Signature& b);

// |A ∩ B| / |A ∪ B| by sorted merge. Oracle counterpart of the estimator.
double exact_jaccard(const SparseBinarySet& a, const SparseBinarySet& b);

// Σ min(u_j, v_j) / Σ max(u_j, v_j).
double exact_weighted_jaccard(const WeightedVector& u, const WeightedVector& v);

// Weighted components pack the dimension index into the high 32 bits and the
// zigzag-encoded quantized level into the low 32 bits.
constexpr uint64_t pack_weighted_component(uint32_t dim_index, int32_t level) noexcept {
  const uint32_t zz = (static_cast<uint32_t>(level) << 1) ^ static_cast<uint32_t>(level >> 31);
  return (static_cast<uint64_t>(dim_index) << 32) | zz;
}

constexpr std::pair<uint32_t, int32_t> unpack_weighted_component(uint64_t component) noexcept {
  const uint32_t zz = static_cast<uint32_t>(component);
  const int32_t level = static_cast<int32_t>((zz >> 1) ^ (~(zz & 1) + 1));
  return {static_cast<uint32_t>(component >> 32), level};
}

}  // namespace tmap

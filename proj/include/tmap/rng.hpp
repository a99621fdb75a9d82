#pragma once

#include <cstdint>

namespace tmap {

// SplitMix64 finalizer. Bijective on 64-bit words, good avalanche.
constexpr uint64_t mix64(uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

// Counter-based stream: pure function of (seed, stream, w1, w2). All
// randomness in the project is drawn through this, so identical inputs and
// seeds reproduce identical results regardless of evaluation order or
// thread count.
constexpr uint64_t ctr_hash(uint64_t seed, uint64_t stream, uint64_t w1, uint64_t w2) noexcept {
  uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ull);
  h = mix64(h ^ (stream + 0x9e3779b97f4a7c15ull));
  h = mix64(h ^ (w1 + 0x9e3779b97f4a7c15ull));
  h = mix64(h ^ (w2 + 0x9e3779b97f4a7c15ull));
  return h;
}

// Maps 64 random bits to (0, 1), excluding both endpoints so that
// logarithms of the result are always finite.
constexpr double unit_real(uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace tmap

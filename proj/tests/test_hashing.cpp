#include <doctest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "tmap/hashing.hpp"

using namespace tmap;

TEST_SUITE_BEGIN("hashing");

TEST_CASE("derive_hash_params is deterministic per config") {
  HashingConfig config{8, 7, HashMode::binary, 0};
  const HashParams first = derive_hash_params(config);
  const HashParams second = derive_hash_params(config);
  CHECK(first.a == second.a);
  CHECK(first.b == second.b);
}

TEST_CASE("derive_hash_params separates seeds") {
  HashingConfig one{8, 1, HashMode::binary, 0};
  HashingConfig two{8, 2, HashMode::binary, 0};
  CHECK(derive_hash_params(one).a != derive_hash_params(two).a);
}

TEST_CASE("derive_hash_params ranges") {
  HashingConfig config{512, 42, HashMode::binary, 0};
  const HashParams params = derive_hash_params(config);
  REQUIRE(params.a.size() == 512);
  REQUIRE(params.b.size() == 512);
  for (uint64_t a : params.a) {
    CHECK(a >= 1);
    CHECK(a < kMersenne61);
  }
  for (uint64_t b : params.b) CHECK(b < kMersenne61);
}

TEST_CASE("minhash_signature is a pure function") {
  HashingConfig config{128, 42, HashMode::binary, 0};
  SparseBinarySet set{{3, 17, 101}};
  CHECK(minhash_signature(set, config).components == minhash_signature(set, config).components);
}

TEST_CASE("identical sets estimate 1.0") {
  HashingConfig config{128, 42, HashMode::binary, 0};
  SparseBinarySet a{{1, 2, 30}};
  const Signature sig_a = minhash_signature(a, config);
  const Signature sig_b = minhash_signature(a, config);
  CHECK(estimate_jaccard(sig_a, sig_b) == 1.0);
}

TEST_CASE("estimate approaches exact Jaccard") {
  // J({1,2}, {2,3}) = 1/3; a d-sample estimate stays within 3 binomial
  // standard deviations.
  HashingConfig config{2048, 42, HashMode::binary, 0};
  SparseBinarySet a{{1, 2}};
  SparseBinarySet b{{2, 3}};
  const double truth = exact_jaccard(a, b);
  REQUIRE(truth == doctest::Approx(1.0 / 3.0));
  const double estimate =
      estimate_jaccard(minhash_signature(a, config), minhash_signature(b, config));
  const double bound = 3.0 * std::sqrt(truth * (1.0 - truth) / 2048.0);
  CHECK(std::abs(estimate - truth) <= bound);
}

TEST_CASE("empty set is rejected") {
  HashingConfig config{16, 42, HashMode::binary, 0};
  SparseBinarySet empty;
  CHECK_THROWS_WITH_AS(minhash_signature(empty, config), doctest::Contains("EmptySet"), Error);
}

TEST_CASE("unbiasedness over independent seeds") {
  // Mean estimate over R seeds against the exact value, for 20 random pairs.
  constexpr uint32_t d = 128;
  constexpr uint32_t repeats = 200;
  std::mt19937_64 rng(7);
  for (int pair = 0; pair < 20; ++pair) {
    const SparseBinarySet a = test::random_set(rng, 60, 4, 20);
    const SparseBinarySet b = test::random_set(rng, 60, 4, 20);
    const double truth = exact_jaccard(a, b);
    double sum = 0.0;
    for (uint32_t seed = 0; seed < repeats; ++seed) {
      HashingConfig config{d, seed, HashMode::binary, 0};
      const HashParams params = derive_hash_params(config);
      sum += estimate_jaccard(minhash_signature(a, params), minhash_signature(b, params));
    }
    const double mean = sum / repeats;
    const double bound = 4.0 * std::sqrt(truth * (1.0 - truth) / (double(d) * repeats)) + 1e-3;
    CHECK(std::abs(mean - truth) <= bound);
  }
}

TEST_CASE("weighted: identical vectors estimate 1.0") {
  HashingConfig config{256, 42, HashMode::weighted, 4};
  WeightedVector v{{1.0, 0.5, 0.0, 2.0}};
  const Signature sig_a = weighted_minhash_signature(v, config);
  const Signature sig_b = weighted_minhash_signature(v, config);
  CHECK(estimate_jaccard(sig_a, sig_b) == 1.0);
}

TEST_CASE("weighted: v against 2v estimates one half") {
  HashingConfig config{2048, 42, HashMode::weighted, 6};
  WeightedVector v{{1.0, 0.2, 0.0, 3.0, 0.7, 2.5}};
  WeightedVector twice{{2.0, 0.4, 0.0, 6.0, 1.4, 5.0}};
  CHECK(exact_weighted_jaccard(v, twice) == doctest::Approx(0.5));
  const double estimate = estimate_jaccard(weighted_minhash_signature(v, config),
                                           weighted_minhash_signature(twice, config));
  CHECK(std::abs(estimate - 0.5) <= 0.04);
}

TEST_CASE("weighted: disjoint supports never collide") {
  HashingConfig config{2048, 42, HashMode::weighted, 2};
  WeightedVector u{{1.0, 0.0}};
  WeightedVector v{{0.0, 1.0}};
  const double estimate =
      estimate_jaccard(weighted_minhash_signature(u, config), weighted_minhash_signature(v, config));
  CHECK(estimate <= 0.01);
}

TEST_CASE("weighted error cases") {
  HashingConfig config{16, 42, HashMode::weighted, 3};
  WeightedVector zero{{0.0, 0.0, 0.0}};
  CHECK_THROWS_WITH_AS(weighted_minhash_signature(zero, config), doctest::Contains("ZeroVector"),
                       Error);
  WeightedVector negative{{1.0, -0.5, 0.0}};
  CHECK_THROWS_WITH_AS(weighted_minhash_signature(negative, config),
                       doctest::Contains("NegativeWeight"), Error);
}

TEST_CASE("weighted collision law at d=4096") {
  // The per-component collision frequency matches exact weighted Jaccard.
  HashingConfig config{4096, 3, HashMode::weighted, 8};
  std::mt19937_64 rng(11);
  const WeightedVector u = test::random_vector(rng, 8);
  const WeightedVector v = test::random_vector(rng, 8);
  const double truth = exact_weighted_jaccard(u, v);
  const double estimate = estimate_jaccard(weighted_minhash_signature(u, config),
                                           weighted_minhash_signature(v, config));
  const double bound = 4.0 * std::sqrt(truth * (1.0 - truth) / 4096.0) + 1e-3;
  CHECK(std::abs(estimate - truth) <= bound);
}

TEST_CASE("scale sensitivity of weighted Jaccard") {
  WeightedVector v{{0.5, 2.0, 0.0, 1.25}};
  for (double s : {1.0, 2.0, 4.0}) {
    WeightedVector scaled;
    for (double w : v.weights) scaled.weights.push_back(s * w);
    CHECK(exact_weighted_jaccard(v, scaled) == doctest::Approx(1.0 / s));
  }
}

TEST_CASE("estimate_jaccard validates inputs") {
  Signature a{HashMode::binary, {1, 2, 3}};
  Signature b{HashMode::binary, {1, 2}};
  CHECK_THROWS_WITH_AS(estimate_jaccard(a, b), doctest::Contains("LengthMismatch"), Error);
  Signature c{HashMode::weighted, {1, 2, 3}};
  CHECK_THROWS_WITH_AS(estimate_jaccard(a, c), doctest::Contains("ModeMismatch"), Error);
}

TEST_CASE("estimate_jaccard extremes and symmetry") {
  Signature a{HashMode::binary, {1, 2, 3, 4}};
  Signature b{HashMode::binary, {5, 6, 7, 8}};
  CHECK(estimate_jaccard(a, a) == 1.0);
  CHECK(estimate_jaccard(a, b) == 0.0);
  std::mt19937_64 rng(5);
  HashingConfig config{64, 42, HashMode::binary, 0};
  for (int i = 0; i < 10; ++i) {
    const Signature x = minhash_signature(test::random_set(rng, 100, 2, 30), config);
    const Signature y = minhash_signature(test::random_set(rng, 100, 2, 30), config);
    CHECK(estimate_jaccard(x, y) == estimate_jaccard(y, x));
  }
}

TEST_CASE("exact_jaccard on small sets") {
  SparseBinarySet a{{1, 2, 3}};
  SparseBinarySet b{{2, 3, 4}};
  SparseBinarySet c{{10, 20}};
  CHECK(exact_jaccard(a, a) == 1.0);
  CHECK(exact_jaccard(a, c) == 0.0);
  CHECK(exact_jaccard(a, b) == doctest::Approx(0.5));
}

TEST_CASE("packed weighted components") {
  CHECK(pack_weighted_component(3, 7) == pack_weighted_component(3, 7));
  CHECK(pack_weighted_component(3, 7) != pack_weighted_component(3, 8));
  CHECK(pack_weighted_component(3, 7) != pack_weighted_component(4, 7));
  CHECK(pack_weighted_component(0, -1) != pack_weighted_component(0, 1));
  CHECK(pack_weighted_component(1, 0) != pack_weighted_component(0, 1));
  // Round trip, including negative levels.
  for (int32_t level : {-100000, -1, 0, 1, 99, 100000}) {
    for (uint32_t j : {0u, 1u, 77u, 0xffffffu}) {
      const auto [dim, lvl] = unpack_weighted_component(pack_weighted_component(j, level));
      CHECK(dim == j);
      CHECK(lvl == level);
    }
  }
}

TEST_SUITE_END();

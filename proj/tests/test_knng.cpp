#include <doctest.h>

#include <algorithm>
#include <random>

#include "test_support.hpp"
#include "tmap/knng.hpp"
#include "tmap/pipeline.hpp"

using namespace tmap;

namespace {

bool is_canonical(const WeightedGraph& graph) {
  for (size_t i = 0; i < graph.edges.size(); ++i) {
    const Edge& e = graph.edges[i];
    if (e.u >= e.v || e.v >= graph.n) return false;
    if (i > 0) {
      const Edge& p = graph.edges[i - 1];
      if (e.w < p.w) return false;
      if (e.w == p.w && (e.u < p.u || (e.u == p.u && e.v <= p.v))) return false;
      if (p.u == e.u && p.v == e.v) return false;
    }
  }
  return true;
}

// Independent double-loop k-NN union over estimated signature distances.
std::vector<Edge> brute_force_union(const std::vector<Signature>& sigs, uint32_t k) {
  const uint32_t n = static_cast<uint32_t>(sigs.size());
  std::vector<Edge> edges;
  for (uint32_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, uint32_t>> order;
    for (uint32_t j = 0; j < n; ++j) {
      if (j == i) continue;
      order.emplace_back(1.0 - estimate_jaccard(sigs[i], sigs[j]), j);
    }
    std::sort(order.begin(), order.end());
    for (uint32_t t = 0; t < k && t < order.size(); ++t)
      edges.push_back({std::min(i, order[t].second), std::max(i, order[t].second), order[t].first});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.v != b.v) return a.v < b.v;
    return a.w < b.w;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; }),
              edges.end());
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
  return edges;
}

}  // namespace

TEST_SUITE_BEGIN("knng");

TEST_CASE("two nodes give a single edge") {
  HashingConfig config{32, 42, HashMode::binary, 0};
  const auto sigs = signatures_of({SparseBinarySet{{1, 2}}, SparseBinarySet{{9, 17}}}, config);
  const ExactBackend backend(sigs);
  const WeightedGraph graph = build_knn_graph(backend, {3, 1});
  REQUIRE(graph.edges.size() == 1);
  CHECK(graph.edges[0].u == 0);
  CHECK(graph.edges[0].v == 1);
}

TEST_CASE("three duplicates make a zero-weight triangle") {
  HashingConfig config{32, 42, HashMode::binary, 0};
  SparseBinarySet item{{5, 6, 7}};
  const auto sigs = signatures_of({item, item, item}, config);
  const ExactBackend backend(sigs);
  const WeightedGraph graph = build_knn_graph(backend, {2, 1});
  REQUIRE(graph.edges.size() == 3);
  for (const Edge& e : graph.edges) CHECK(e.w == 0.0);
}

TEST_CASE("exact backend matches the double-loop union") {
  const auto sets = test::random_sets(21, 200, 300, 5, 25);
  HashingConfig config{64, 42, HashMode::binary, 0};
  const auto sigs = signatures_of(sets, config);
  const ExactBackend backend(sigs);
  const WeightedGraph graph = build_knn_graph(backend, {3, 1});

  const std::vector<Edge> expected = brute_force_union(sigs, 3);
  REQUIRE(graph.edges.size() == expected.size());
  for (size_t i = 0; i < expected.size(); ++i) {
    CHECK(graph.edges[i].u == expected[i].u);
    CHECK(graph.edges[i].v == expected[i].v);
    CHECK(graph.edges[i].w == expected[i].w);
  }

  // Each node with enough distinct candidates has degree >= k.
  std::vector<uint32_t> degree(graph.n, 0);
  for (const Edge& e : graph.edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  for (uint32_t deg : degree) CHECK(deg >= 3);
}

TEST_CASE("exact backend ranks a duplicate first") {
  HashingConfig config{32, 42, HashMode::binary, 0};
  SparseBinarySet a{{1, 2, 3}};
  const auto sigs = signatures_of({a, a, SparseBinarySet{{50, 60}}}, config);
  const ExactBackend backend(sigs);
  const auto got = backend.query_knn(0, 2, 1);
  REQUIRE(got.size() == 2);
  CHECK(got[0].id == 1);
  CHECK(got[0].distance == 0.0);
}

TEST_CASE("exact backend with k = n-1 returns everything sorted") {
  const auto sets = test::random_sets(5, 20, 100, 3, 10);
  HashingConfig config{32, 42, HashMode::binary, 0};
  const auto sigs = signatures_of(sets, config);
  const ExactBackend backend(sigs);
  const auto got = backend.query_knn(4, 19, 1);
  REQUIRE(got.size() == 19);
  for (size_t i = 1; i < got.size(); ++i) {
    CHECK(got[i].distance >= got[i - 1].distance);
    if (got[i].distance == got[i - 1].distance) CHECK(got[i].id > got[i - 1].id);
  }
}

TEST_CASE("exact backend top-1 agrees with a naive scan") {
  const auto sets = test::random_sets(33, 300, 500, 5, 30);
  HashingConfig config{64, 42, HashMode::binary, 0};
  const auto sigs = signatures_of(sets, config);
  const ExactBackend backend(sigs);
  for (uint32_t i = 0; i < 300; i += 13) {
    double best = 2.0;
    uint32_t best_id = 0;
    for (uint32_t j = 0; j < 300; ++j) {
      if (j == i) continue;
      const double d = 1.0 - estimate_jaccard(sigs[i], sigs[j]);
      if (d < best) {
        best = d;
        best_id = j;
      }
    }
    const auto got = backend.query_knn(i, 1, 1);
    REQUIRE(got.size() == 1);
    CHECK(got[0].id == best_id);
    CHECK(got[0].distance == best);
  }
}

TEST_CASE("graph_from_edge_list basics") {
  SUBCASE("single edge") {
    const WeightedGraph graph = graph_from_edge_list({{0, 1, 1.0}}, 2);
    REQUIRE(graph.edges.size() == 1);
    CHECK(graph.edges[0] == Edge{0, 1, 1.0});
  }
  SUBCASE("duplicates collapse to the minimum weight") {
    const WeightedGraph graph = graph_from_edge_list({{1, 0, 2.0}, {0, 1, 1.0}}, 2);
    REQUIRE(graph.edges.size() == 1);
    CHECK(graph.edges[0] == Edge{0, 1, 1.0});
  }
  SUBCASE("self loop names the entry") {
    CHECK_THROWS_WITH_AS(graph_from_edge_list({{0, 1, 1.0}, {3, 3, 0.5}}, 4),
                         doctest::Contains("entry 1"), Error);
  }
  SUBCASE("out of range node") {
    CHECK_THROWS_WITH_AS(graph_from_edge_list({{0, 5, 1.0}}, 3), doctest::Contains("NodeOutOfRange"),
                         Error);
  }
  SUBCASE("non-finite weight") {
    CHECK_THROWS_WITH_AS(graph_from_edge_list({{0, 1, std::numeric_limits<double>::infinity()}}, 2),
                         doctest::Contains("NonFiniteWeight"), Error);
  }
}

TEST_CASE("canonical form holds on random inputs") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  for (int round = 0; round < 20; ++round) {
    const uint32_t n = 2 + static_cast<uint32_t>(rng() % 40);
    std::uniform_int_distribution<uint32_t> node(0, n - 1);
    std::vector<EdgeListEntry> entries;
    for (int e = 0; e < 100; ++e) {
      uint32_t u = node(rng), v = node(rng);
      if (u == v) continue;
      entries.push_back({u, v, weight(rng)});
    }
    CHECK(is_canonical(graph_from_edge_list(entries, n)));
  }
}

TEST_CASE("forest and exact backends agree through the builder on duplicates") {
  // With n=3 duplicate items, both backends must produce the same triangle.
  HashingConfig config{32, 42, HashMode::binary, 0};
  SparseBinarySet item{{5, 6, 7}};
  auto sigs = signatures_of({item, item, item}, config);
  const ExactBackend exact(sigs);
  const LshForest forest = build_index(std::move(sigs), {4});
  const ForestBackend approx(forest);
  const WeightedGraph a = build_knn_graph(exact, {2, 2});
  const WeightedGraph b = build_knn_graph(approx, {2, 2});
  REQUIRE(a.edges.size() == b.edges.size());
  for (size_t i = 0; i < a.edges.size(); ++i) CHECK(a.edges[i] == b.edges[i]);
}

TEST_SUITE_END();

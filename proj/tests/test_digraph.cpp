#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "qcons/digraph.hpp"
#include "qcons/error.hpp"
#include "qcons/experiment.hpp"
#include "qcons/rng.hpp"

using namespace qcons;

namespace {

std::vector<std::pair<std::size_t, std::size_t>> as_pairs(const Digraph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const Edge& e : g.edges()) {
    out.emplace_back(e.sender, e.receiver);
  }
  return out;
}

std::vector<NodeId> ids(std::span<const NodeId> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("build_digraph accepts the four-node example") {
  const Digraph g = example_digraph();
  CHECK(g.node_count() == 4);
  CHECK(g.edge_count() == 6);
  CHECK(ids(g.out_neighbors(0)) == std::vector<NodeId>{2, 3});
  CHECK(ids(g.in_neighbors(1)) == std::vector<NodeId>{3});
  CHECK(ids(g.in_neighbors(0)) == std::vector<NodeId>{1, 2});
  CHECK(g.max_in_degree() == 2);
  CHECK(g.has_edge(0, 3));
  CHECK_FALSE(g.has_edge(3, 0));
}

TEST_CASE("build_digraph edge cases") {
  SUBCASE("single node, no edges") {
    const Digraph g = Digraph::build(1, {});
    CHECK(g.edge_count() == 0);
    CHECK(g.out_neighbors(0).empty());
    CHECK(g.in_neighbors(0).empty());
    CHECK(is_strongly_connected(g));
  }
  SUBCASE("self-loop rejected") {
    const std::vector<Edge> edges{{0, 0}};
    CHECK_THROWS_AS(Digraph::build(2, edges), GraphError);
  }
  SUBCASE("out-of-range endpoint rejected") {
    const std::vector<Edge> edges{{0, 2}};
    CHECK_THROWS_AS(Digraph::build(2, edges), GraphError);
  }
  SUBCASE("zero nodes rejected") {
    CHECK_THROWS_AS(Digraph::build(0, {}), GraphError);
  }
  SUBCASE("duplicates collapse") {
    const std::vector<Edge> edges{{0, 1}, {1, 0}, {0, 1}};
    const Digraph g = Digraph::build(2, edges);
    CHECK(g.edge_count() == 2);
    CHECK(g.out_degree(0) == 1);
  }
}

TEST_CASE("is_strongly_connected small cases") {
  const std::vector<Edge> ring{{0, 1}, {1, 2}, {2, 0}};
  CHECK(is_strongly_connected(Digraph::build(3, ring)));
  const std::vector<Edge> path{{0, 1}, {1, 2}};
  CHECK_FALSE(is_strongly_connected(Digraph::build(3, path)));
  CHECK(is_strongly_connected(example_digraph()));
}

TEST_CASE("is_strongly_connected matches transitive closure") {
  // Every edge set on 3 nodes, then 200 random ones on 4 and 5 nodes.
  std::vector<Edge> all3;
  for (NodeId s = 0; s < 3; ++s) {
    for (NodeId r = 0; r < 3; ++r) {
      if (s != r) {
        all3.push_back({s, r});
      }
    }
  }
  for (unsigned mask = 0; mask < (1u << all3.size()); ++mask) {
    std::vector<Edge> edges;
    for (std::size_t b = 0; b < all3.size(); ++b) {
      if (mask & (1u << b)) {
        edges.push_back(all3[b]);
      }
    }
    const Digraph g = Digraph::build(3, edges);
    CHECK(is_strongly_connected(g) == oracle::strongly_connected_closure(3, as_pairs(g)));
  }

  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(trial % 2);
    std::vector<Edge> edges;
    for (NodeId s = 0; s < n; ++s) {
      for (NodeId r = 0; r < n; ++r) {
        if (s != r && rng.bernoulli(0.35)) {
          edges.push_back({s, r});
        }
      }
    }
    const Digraph g = Digraph::build(n, edges);
    CHECK(is_strongly_connected(g) == oracle::strongly_connected_closure(n, as_pairs(g)));
  }
}

TEST_CASE("random generation is deterministic and strongly connected") {
  const Digraph a = generate_random_strongly_connected(20, 0.2, 7);
  const Digraph b = generate_random_strongly_connected(20, 0.2, 7);
  CHECK(a == b);
  CHECK(is_strongly_connected(a));

  CHECK(generate_random_strongly_connected(5, 0.3, 1).edges() ==
        generate_random_strongly_connected(5, 0.3, 1).edges());

  const Digraph full = generate_random_strongly_connected(2, 1.0, 99);
  CHECK(full.edges() == std::vector<Edge>{{0, 1}, {1, 0}});

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Digraph g = generate_random_strongly_connected(3 + seed % 8, 0.15, seed);
    CHECK(oracle::strongly_connected_closure(g.node_count(), as_pairs(g)));
  }
}

TEST_CASE("random generation errors") {
  CHECK_THROWS_AS(generate_random_strongly_connected(1, 0.5, 1), ConfigError);
  CHECK_THROWS_AS(generate_random_strongly_connected(5, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(generate_random_strongly_connected(5, 1.5, 1), ConfigError);
  CHECK_THROWS_AS(generate_random_strongly_connected(30, 0.001, 1, 3), GraphError);
}

TEST_CASE("assign_priorities") {
  const Digraph g = generate_random_strongly_connected(12, 0.3, 11);

  SUBCASE("by node index is ascending") {
    const PriorityMap p = assign_priorities(g, PriorityStrategy::by_node_index);
    for (NodeId j = 0; j < g.node_count(); ++j) {
      CHECK(ids(p.order(j)) == ids(g.out_neighbors(j)));
    }
  }
  SUBCASE("every strategy yields a bijection onto 0..D-1") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const PriorityMap p = assign_priorities(g, PriorityStrategy::seeded_shuffle, seed);
      for (NodeId j = 0; j < g.node_count(); ++j) {
        std::set<std::size_t> image;
        for (NodeId l : g.out_neighbors(j)) {
          image.insert(p.priority_of(j, l));
        }
        CHECK(image.size() == g.out_degree(j));
        CHECK(*image.rbegin() == g.out_degree(j) - 1);
      }
    }
  }
  SUBCASE("shuffle is deterministic in the seed") {
    CHECK(assign_priorities(g, PriorityStrategy::seeded_shuffle, 5) ==
          assign_priorities(g, PriorityStrategy::seeded_shuffle, 5));
  }
  SUBCASE("single out-neighbor gets priority 0") {
    const Digraph ex = example_digraph();
    const PriorityMap p = assign_priorities(ex, PriorityStrategy::seeded_shuffle, 3);
    CHECK(p.priority_of(1, 0) == 0);
    CHECK(p.priority_of(3, 1) == 0);
  }
}

TEST_CASE("explicit priority overrides") {
  const Digraph g = example_digraph();
  SUBCASE("example orders accepted verbatim") {
    const std::vector<PriorityEntry> entries{{0, 3, 0}, {0, 2, 1}, {2, 0, 0}, {2, 3, 1}};
    const PriorityMap p = override_priorities(g, entries);
    CHECK(p == example_priorities(g));
    CHECK(p.priority_of(0, 3) == 0);
    CHECK(p.priority_of(0, 2) == 1);
  }
  SUBCASE("swapped v1 order accepted") {
    const std::vector<PriorityEntry> entries{{0, 2, 0}, {0, 3, 1}};
    CHECK(override_priorities(g, entries) == swapped_example_priorities(g));
  }
  SUBCASE("incomplete, duplicate or foreign entries rejected") {
    const std::vector<PriorityEntry> missing{{0, 3, 0}};
    CHECK_THROWS_AS(override_priorities(g, missing), GraphError);
    const std::vector<PriorityEntry> dup{{0, 3, 0}, {0, 2, 0}};
    CHECK_THROWS_AS(override_priorities(g, dup), GraphError);
    const std::vector<PriorityEntry> foreign{{1, 2, 0}};
    CHECK_THROWS_AS(override_priorities(g, foreign), GraphError);
    const std::vector<PriorityEntry> gap{{0, 3, 0}, {0, 2, 2}};
    CHECK_THROWS_AS(override_priorities(g, gap), GraphError);
  }
  SUBCASE("from_orders checks permutations") {
    CHECK_THROWS_AS(PriorityMap::from_orders(g, {{3}, {0}, {0, 3}, {1}}), GraphError);
    CHECK_THROWS_AS(PriorityMap::from_orders(g, {{3, 2}}), GraphError);
    CHECK_THROWS_AS(example_priorities(g).priority_of(1, 2), GraphError);
  }
}

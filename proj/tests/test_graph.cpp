#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "test_support.hpp"

using namespace dagopt;
using namespace testing;

namespace {

TopologicalOrder order_of(std::vector<int> positions) { return TopologicalOrder(std::move(positions)); }

}  // namespace

TEST_SUITE("graph") {
  TEST_CASE("TopologicalOrder validates and maps both ways") {
    CHECK_THROWS_AS(order_of({1, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(order_of({0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(order_of({1, 2, 4}), std::invalid_argument);
    const auto o = order_of({2, 3, 1, 4});
    CHECK(o.node_at(1) == 2);
    CHECK(o.node_at(2) == 0);
    CHECK(std::vector<int>(o.sequence().begin(), o.sequence().end()) == std::vector<int>{2, 0, 1, 3});
    const std::vector<int> seq{2, 0, 1, 3};
    CHECK(TopologicalOrder::from_sequence(seq) == o);
    auto swapped = o;
    swapped.swap_nodes(2, 0);
    CHECK(swapped == order_of({1, 3, 2, 4}));
    CHECK(o.hash() != swapped.hash());
  }

  TEST_CASE("BinaryAdjacency rejects the diagonal") {
    BinaryAdjacency z(3);
    CHECK_THROWS(z.set(1, 1));
    CHECK_THROWS(BinaryAdjacency::from_rows({{1, 0}, {0, 0}}));
    CHECK_THROWS(BinaryAdjacency::from_rows({{0, 2}, {0, 0}}));
  }

  TEST_CASE("adj: identity order gives the strict lower triangle") {
    CHECK(adj(order_of({1, 2, 3})) == BinaryAdjacency::from_rows({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}));
  }

  TEST_CASE("adj: elementwise definition for pi = (2,3,1,4)") {
    CHECK(adj(order_of({2, 3, 1, 4})) ==
          BinaryAdjacency::from_rows({{0, 0, 1, 0}, {1, 0, 1, 0}, {0, 0, 0, 0}, {1, 1, 1, 0}}));
  }

  TEST_CASE("adj: pi = (3,1,2) as in the reordering example") {
    CHECK(adj(order_of({3, 1, 2})) == BinaryAdjacency::from_rows({{0, 1, 1}, {0, 0, 0}, {0, 1, 0}}));
  }

  TEST_CASE("adj over every permutation up to m = 6") {
    for (std::size_t m = 2; m <= 6; ++m) {
      std::vector<int> seq(m);
      std::iota(seq.begin(), seq.end(), 0);
      do {
        const auto o = TopologicalOrder::from_sequence(seq);
        const auto r = adj(o);
        CHECK(r.count() == m * (m - 1) / 2);
        CHECK(is_acyclic(r));
        CHECK(adj(topological_order_of(r)) == r);
        for (std::size_t j = 0; j < m; ++j) {
          for (std::size_t k = 0; k < m; ++k) CHECK(r(j, k) == (o.position(j) > o.position(k)));
        }
      } while (std::next_permutation(seq.begin(), seq.end()));
    }
  }

  TEST_CASE("topological_order_of: empty graph uses the smallest-index tie-break") {
    CHECK(topological_order_of(BinaryAdjacency(3)) == order_of({3, 2, 1}));
  }

  TEST_CASE("topological_order_of: lower triangle") {
    CHECK(topological_order_of(BinaryAdjacency::from_rows({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}})) == order_of({1, 2, 3}));
  }

  TEST_CASE("topological_order_of: 2-cycle carries a witness") {
    BinaryAdjacency z(3);
    z.set(0, 1);
    z.set(1, 0);
    try {
      topological_order_of(z);
      FAIL("expected CycleError");
    } catch (const CycleError& e) {
      CHECK(e.witness() == Cycle({0, 1}));
      CHECK(e.witness().to_string() == "1->2->1");
    }
  }

  TEST_CASE("cycle witness is a real cycle of z") {
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
      const auto z = random_adjacency(6, 0.25, rng);
      try {
        const auto o = topological_order_of(z);
        for (const auto& [j, k] : z.arcs()) CHECK(o.position(j) > o.position(k));
      } catch (const CycleError& e) {
        for (const auto& [a, b] : e.witness().arcs()) CHECK(z(a, b));
      }
    }
  }

  TEST_CASE("find_cycles examples") {
    CHECK(find_cycles(BinaryAdjacency::from_rows({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}})).cycles.empty());

    BinaryAdjacency two(3);
    two.set(0, 1);
    two.set(1, 0);
    two.set(1, 2);
    two.set(2, 1);
    const auto found = find_cycles(two);
    REQUIRE(found.cycles.size() == 2);
    CHECK(found.cycles[0] == Cycle({0, 1}));
    CHECK(found.cycles[1] == Cycle({1, 2}));

    const auto complete = find_cycles(BinaryAdjacency::from_rows({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
    REQUIRE(complete.cycles.size() == 5);
    CHECK(!complete.truncated);
    std::size_t twos = 0;
    for (const auto& c : complete.cycles) twos += c.size() == 2 ? 1 : 0;
    CHECK(twos == 3);
    CHECK(std::is_sorted(complete.cycles.begin(), complete.cycles.end()));
  }

  TEST_CASE("find_cycles truncation flag") {
    BinaryAdjacency z(4);
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k)
        if (j != k) z.set(j, k);
    const auto capped = find_cycles(z, 3);
    CHECK(capped.cycles.size() == 3);
    CHECK(capped.truncated);
    CHECK(find_cycles(z).cycles.size() == 20);
  }

  TEST_CASE("find_cycles matches brute force and acyclicity, exhaustive m <= 3") {
    for (std::size_t m = 2; m <= 3; ++m) {
      const std::uint64_t cells = m * (m - 1);
      for (std::uint64_t mask = 0; mask < (1ULL << cells); ++mask) {
        const auto z = adjacency_from_mask(m, mask);
        const auto found = find_cycles(z);
        CHECK(found.cycles.size() == brute_force_cycle_count(z));
        CHECK(found.cycles.empty() == is_acyclic(z));
        CHECK(is_acyclic(z) == acyclic_by_sink_removal(z));
      }
    }
  }

  TEST_CASE("find_cycles and acyclicity agree on random graphs up to m = 8") {
    Rng rng(17);
    for (int trial = 0; trial < 400; ++trial) {
      const std::size_t m = 2 + rng.below(7);
      const double p = rng.uniform(0.02, 0.4);
      const auto z = random_adjacency(m, p, rng);
      const auto found = find_cycles(z, 1'000'000);
      CHECK(found.cycles.empty() == is_acyclic(z));
      CHECK(is_acyclic(z) == acyclic_by_sink_removal(z));
      if (m <= 6) CHECK(found.cycles.size() == brute_force_cycle_count(z));
      for (const auto& c : found.cycles) {
        CHECK(c.nodes().front() == *std::min_element(c.nodes().begin(), c.nodes().end()));
        for (const auto& [a, b] : c.arcs()) CHECK(z(a, b));
      }
    }
  }

  TEST_CASE("support examples") {
    CHECK(support(Matrix(3, 3)).count() == 0);
    Matrix y = Matrix::from_rows({{0, 0, 0.5, 0}, {0, 0, 0.5, 0}, {0, 0, 0, 0}, {0.4, 0.8, 0.1, 0}});
    CHECK(support(y, 0.0) == BinaryAdjacency::from_rows({{0, 0, 1, 0}, {0, 0, 1, 0}, {0, 0, 0, 0}, {1, 1, 1, 0}}));
    Matrix tiny(2, 2);
    tiny(0, 1) = 1e-12;
    CHECK(!support(tiny, 1e-9)(0, 1));
    Matrix diag(2, 2);
    diag(0, 0) = 5.0;
    CHECK(support(diag, 0.0).count() == 0);
  }

  TEST_CASE("Cycle validation and arcs") {
    CHECK_THROWS(Cycle({1}));
    CHECK_THROWS(Cycle({1, 2, 1}));
    const Cycle c({0, 1, 2});
    CHECK(c.arcs() == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 0}});
  }
}

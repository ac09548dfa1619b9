#include <doctest.h>

#include <random>
#include <set>

#include "ashg/oracle.hpp"
#include "ashg/tree_decomposition.hpp"
#include "test_support.hpp"

using namespace ashg;
using ashg::testing::mutual_friends;
using ashg::testing::stalker_pair;

TEST_CASE("partition enumeration counts") {
  CHECK(enumerate_partitions(0).size() == 1);
  CHECK(enumerate_partitions(3).size() == 5);
  CHECK(enumerate_partitions(6).size() == 203);
  for (std::size_t n = 0; n <= 9; ++n) {
    const auto all = enumerate_partitions(n);
    CHECK(all.size() == ashg::testing::bell(n));
    std::set<std::vector<CoalitionId>> distinct;
    for (const auto& p : all) distinct.emplace(p.labels().begin(), p.labels().end());
    CHECK(distinct.size() == all.size());
  }
  CHECK_THROWS_AS(enumerate_partitions(13), ResourceLimitError);
  CHECK(enumerate_partitions(4, {.max_vertices = 4}).size() == 15);
  CHECK_THROWS_AS(enumerate_partitions(5, {.max_vertices = 4}), ResourceLimitError);
}

TEST_CASE("bounded enumeration") {
  // Stirling numbers of the second kind summed up to the block bound.
  std::size_t count = 0;
  PartitionEnumerator it(5, 2);
  do {
    CHECK(it.blocks() <= 2);
    ++count;
  } while (it.next());
  CHECK(count == 1 + 15);

  PartitionEnumerator first(4);
  CHECK(first.partition() == Partition::grand_coalition(4));
  std::size_t steps = 0;
  while (first.next()) ++steps;
  CHECK(first.labels() == std::vector<std::uint32_t>{0, 1, 2, 3});
  CHECK(steps == 14);
}

TEST_CASE("brute-force Nash") {
  CHECK_FALSE(brute_force_nash(stalker_pair()).has_value());
  auto friends = brute_force_nash(mutual_friends());
  REQUIRE(friends);
  CHECK(*friends == Partition::grand_coalition(2));
  auto single = brute_force_nash(AshgInstance(1, {}));
  REQUIRE(single);
  CHECK(*single == Partition::singletons(1));
  CHECK_THROWS_AS(brute_force_nash(AshgInstance(20, {})), ResourceLimitError);
}

TEST_CASE("brute-force connected Nash") {
  CHECK_FALSE(brute_force_connected_nash(stalker_pair()).has_value());
  AshgInstance triangle(3, {{0, 1, 1}, {1, 0, 1}, {1, 2, 1}, {2, 1, 1}, {0, 2, 1}, {2, 0, 1}});
  auto t = brute_force_connected_nash(triangle);
  REQUIRE(t);
  CHECK(*t == Partition::grand_coalition(3));
  auto isolated = brute_force_connected_nash(AshgInstance(2, {}));
  REQUIRE(isolated);
  CHECK(*isolated == Partition::singletons(2));
}

TEST_CASE("brute-force stable coloring") {
  auto mono = brute_force_stable_coloring(mutual_friends(), 2);
  REQUIRE(mono);
  CHECK(mono->color_of[0] == mono->color_of[1]);
  CHECK_FALSE(brute_force_stable_coloring(stalker_pair(), 4).has_value());
  // All 16 colorings of the stalker pair with four colors fail, checked directly.
  int stable = 0;
  for (Color a = 0; a < 4; ++a)
    for (Color b = 0; b < 4; ++b) stable += ashg::testing::naive_nash_stable(stalker_pair(), {a, b}) ? 1 : 0;
  CHECK(stable == 0);
  CHECK(brute_force_stable_coloring(AshgInstance(3, {}), 1).has_value());
  CHECK_THROWS_AS(brute_force_stable_coloring(mutual_friends(), 0), std::invalid_argument);
}

TEST_CASE("color bound bites") {
  // Mutually hostile vertices need one class each.
  std::vector<Arc> arcs;
  for (Vertex u = 0; u < 3; ++u)
    for (Vertex v = 0; v < 3; ++v)
      if (u != v) arcs.push_back({u, v, -1});
  const AshgInstance hostile(3, arcs);
  CHECK_FALSE(brute_force_stable_coloring(hostile, 2).has_value());
  auto three = brute_force_stable_coloring(hostile, 3);
  REQUIRE(three);
  CHECK(coloring_to_partition(*three) == Partition::singletons(3));
}

TEST_CASE("oracles agree with the reference enumeration") {
  std::mt19937_64 rng(53);
  for (int round = 0; round < 200; ++round) {
    const auto g = ashg::testing::random_instance(rng, {.min_n = 0, .max_n = 7});
    const auto nash = brute_force_nash(g);
    CHECK(nash.has_value() == ashg::testing::reference_nash_exists(g));
    if (nash) CHECK(is_nash_stable(g, *nash).stable);
    const auto conn = brute_force_connected_nash(g);
    CHECK(conn.has_value() == ashg::testing::reference_connected_nash_exists(g));
    if (conn) {
      CHECK(is_nash_stable(g, *conn).stable);
      CHECK(is_connected_partition(g, *conn).connected);
    }
    const auto k = choose_k(heuristic_decompose(g).max_bag_size(), g.max_degree());
    const auto coloring = brute_force_stable_coloring(g, k);
    CHECK(coloring.has_value() == nash.has_value());
    if (coloring) {
      CHECK(coloring->colors == k);
      CHECK(is_stable_coloring(g, *coloring).stable);
    }
  }
}

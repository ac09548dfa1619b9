#include <doctest.h>

#include <random>

#include "ashg/stable_coloring.hpp"
#include "test_support.hpp"

using namespace ashg;
using ashg::testing::mutual_friends;
using ashg::testing::stalker_pair;

TEST_CASE("is_stable_coloring") {
  CHECK(is_stable_coloring(mutual_friends(), Coloring{{0, 0}, 2}).stable);
  auto split = is_stable_coloring(mutual_friends(), Coloring{{0, 1}, 2});
  REQUIRE_FALSE(split.stable);
  CHECK(split.witness->vertex == 0);
  CHECK(split.witness->target == CoalitionId{1});
  CHECK(split.witness->target_utility == 1);

  for (Color a = 0; a < 2; ++a)
    for (Color b = 0; b < 2; ++b) CHECK_FALSE(is_stable_coloring(stalker_pair(), Coloring{{a, b}, 2}).stable);

  CHECK_THROWS_AS(is_stable_coloring(mutual_friends(), Coloring{{0}, 2}), std::invalid_argument);
  CHECK_THROWS_AS(is_stable_coloring(mutual_friends(), Coloring{{0, 2}, 2}), std::invalid_argument);
}

TEST_CASE("choose_k") {
  CHECK(choose_k(2, 2) == 4);
  CHECK(choose_k(1, 0) == 1);
  CHECK(choose_k(3, 4) == 12);
}

TEST_CASE("coloring_to_partition") {
  CHECK(coloring_to_partition(Coloring{{0, 0}, 2}) == Partition::grand_coalition(2));
  CHECK(coloring_to_partition(Coloring{{0, 1}, 2}) == Partition::singletons(2));
  CHECK(coloring_to_partition(Coloring{{0, 1, 0}, 2}) == Partition::from_coalitions(3, {{0, 2}, {1}}));
}

TEST_CASE("stable colorings give stable partitions") {
  std::mt19937_64 rng(17);
  int stable_seen = 0;
  for (int round = 0; round < 3000; ++round) {
    const auto g = ashg::testing::random_instance(rng, {.max_n = 6});
    const std::size_t k = 1 + rng() % 4;
    Coloring c{std::vector<Color>(g.vertex_count()), k};
    for (auto& x : c.color_of) x = static_cast<Color>(rng() % k);
    if (!is_stable_coloring(g, c).stable) continue;
    ++stable_seen;
    CHECK(is_nash_stable(g, coloring_to_partition(c)).stable);
  }
  CHECK(stable_seen > 50);
}

TEST_CASE("solve_nash_via_coloring") {
  const auto one_bag = TreeDecomposition({{0, 1}}, {});
  CHECK_FALSE(solve_nash_via_coloring(stalker_pair(), one_bag).has_value());
  CHECK_FALSE(solve_nash_via_coloring(stalker_pair(), TreeDecomposition({{0}, {0, 1}, {1}}, {{0, 1}, {1, 2}}))
                  .has_value());

  auto friends = solve_nash_via_coloring(mutual_friends(), one_bag);
  REQUIRE(friends);
  CHECK(is_nash_stable(mutual_friends(), *friends).stable);

  const auto p6 = ashg::testing::unit_path(6);
  auto path = solve_nash_via_coloring(p6, heuristic_decompose(p6));
  REQUIRE(path);
  CHECK(is_nash_stable(p6, *path).stable);

  auto edgeless = solve_stable_coloring(AshgInstance(3, {}), heuristic_decompose(AshgInstance(3, {})));
  CHECK(edgeless.colors == 1);
  REQUIRE(edgeless.coloring);
  CHECK(edgeless.coloring->colors == 1);

  auto empty = solve_nash_via_coloring(AshgInstance(0, {}), TreeDecomposition({{}}, {}));
  REQUIRE(empty);
  CHECK(empty->vertex_count() == 0);

  CHECK_THROWS_AS(solve_nash_via_coloring(p6, TreeDecomposition({{0, 1}}, {})), std::invalid_argument);
}

TEST_CASE("coloring solution details") {
  const auto p6 = ashg::testing::unit_path(6);
  const auto td = heuristic_decompose(p6);
  auto solution = solve_stable_coloring(p6, td);
  CHECK(solution.colors == 4);
  // Bags {v, v+1} grow to {v-1, v, v+1, v+2}.
  CHECK(solution.augmented_width == 3);
  REQUIRE(solution.coloring);
  CHECK(solution.coloring->colors == 4);
  CHECK(is_stable_coloring(p6, *solution.coloring).stable);
  CHECK(solution.stats.nodes > 0);
  CHECK(solution.stats.peak_table_size > 0);
}

TEST_CASE("signature budget is enforced") {
  const auto p6 = ashg::testing::unit_path(6);
  SolverOptions tiny;
  tiny.max_signatures_per_node = 1;
  CHECK_THROWS_AS(solve_stable_coloring(p6, heuristic_decompose(p6), tiny), ResourceLimitError);
}

TEST_CASE("answer independent of decomposition and worker count") {
  std::mt19937_64 rng(29);
  for (int round = 0; round < 120; ++round) {
    const auto g = ashg::testing::random_instance(rng, {.max_n = 8});
    const auto a = solve_nash_via_coloring(g, heuristic_decompose(g, EliminationHeuristic::kMinDegree));
    const auto b = solve_nash_via_coloring(g, heuristic_decompose(g, EliminationHeuristic::kMinFill));
    SolverOptions parallel;
    parallel.workers = 3;
    const auto c = solve_nash_via_coloring(g, heuristic_decompose(g), parallel);
    CHECK(a.has_value() == b.has_value());
    CHECK(a == c);
    if (a) CHECK(is_nash_stable(g, *a).stable);
    if (b) CHECK(is_nash_stable(g, *b).stable);
  }
}

TEST_CASE("agrees with exhaustive search on small instances") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 150; ++round) {
    const auto g = ashg::testing::random_instance(rng, {.max_n = 7});
    const auto found = solve_nash_via_coloring(g, heuristic_decompose(g));
    CHECK(found.has_value() == ashg::testing::reference_nash_exists(g));
    if (found) CHECK(is_nash_stable(g, *found).stable);
  }
}

#include <doctest.h>

#include <algorithm>
#include <random>

#include "ashg/oracle.hpp"
#include "ashg/reductions.hpp"
#include "test_support.hpp"

using namespace ashg;

namespace {

std::size_t count_role(const GeneratedInstance& g, GadgetRole role) {
  return static_cast<std::size_t>(std::count(g.roles.begin(), g.roles.end(), role));
}

Vertex by_name(const GeneratedInstance& g, const std::string& name) {
  auto it = std::find(g.names.begin(), g.names.end(), name);
  REQUIRE(it != g.names.end());
  return static_cast<Vertex>(it - g.names.begin());
}

CnfFormula random_cnf(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::vector<CnfFormula::Clause> clauses(m);
  for (auto& c : clauses)
    for (auto& lit : c) lit = Literal{static_cast<std::uint32_t>(rng() % n), (rng() & 1u) != 0};
  return CnfFormula(n, clauses);
}

std::optional<std::vector<bool>> satisfying(const CnfFormula& phi) {
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << phi.variable_count()); ++mask) {
    auto a = ashg::testing::assignment_from_mask(phi.variable_count(), mask);
    if (phi.satisfied_by(a)) return a;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("cnf formulas") {
  const auto phi = CnfFormula::from_dimacs(3, {{1, -2}, {3}});
  REQUIRE(phi.clause_count() == 2);
  CHECK(phi.clauses()[0][2] == Literal{1, true});
  CHECK(phi.clauses()[1][0] == Literal{2, false});
  CHECK(phi.clauses()[1][2] == Literal{2, false});
  CHECK(phi.satisfied_by({true, false, true}));
  CHECK_FALSE(phi.satisfied_by({false, true, true}));
  CHECK_THROWS_AS(phi.satisfied_by({true}), std::invalid_argument);
  CHECK_THROWS_AS(CnfFormula::from_dimacs(2, {{}}), std::invalid_argument);
  CHECK_THROWS_AS(CnfFormula::from_dimacs(2, {{1, 2, 1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(CnfFormula::from_dimacs(2, {{3}}), std::invalid_argument);
}

TEST_CASE("high-degree SAT gadget counts") {
  const auto phi = CnfFormula::from_dimacs(1, {{1}});
  const auto g = gen_sat_high_degree(phi, 2);
  CHECK(g.delta == 2);
  CHECK(count_role(g, GadgetRole::kSelection) == 4);
  CHECK(count_role(g, GadgetRole::kConsistency) == 0);
  CHECK(count_role(g, GadgetRole::kClause) + count_role(g, GadgetRole::kLiteral) == 5);
  CHECK(count_role(g, GadgetRole::kPalette) == 2);
  CHECK(g.instance.max_abs_weight() == 2);

  const auto two = gen_sat_high_degree(CnfFormula::from_dimacs(1, {{1}, {-1}}), 2);
  const Vertex c = by_name(two, "c(0,1)");
  std::size_t arcs_at_c = 0;
  for (const Arc& a : two.instance.arcs()) arcs_at_c += (a.from == c || a.to == c) ? 1 : 0;
  CHECK(arcs_at_c == 8);
  CHECK(two.instance.weight(c, by_name(two, "u(0,1,1)")) == 4);
  CHECK(two.instance.weight(c, by_name(two, "u(0,1,2)")) == -4);
  CHECK(two.instance.weight(by_name(two, "u(0,1,2)"), c) == -16);

  // Closed-form counts over a range of sizes.
  for (std::size_t n = 1; n <= 9; ++n) {
    for (std::size_t m = 1; m <= 3; ++m) {
      for (std::size_t delta : {2, 3, 4, 8}) {
        std::mt19937_64 rng(n * 100 + m);
        const auto f = random_cnf(rng, n, m);
        const auto h = gen_sat_high_degree(f, delta);
        const std::size_t d = delta == 3 ? 4 : delta;
        std::size_t log_d = 0;
        while ((std::size_t{1} << log_d) < d) ++log_d;
        const std::size_t rows = (n + d * log_d - 1) / (d * log_d) + 1;
        CHECK(h.delta == d);
        CHECK(count_role(h, GadgetRole::kSelection) == rows * d * m);
        CHECK(count_role(h, GadgetRole::kConsistency) == rows * (m - 1));
        CHECK(count_role(h, GadgetRole::kClause) == 2 * m);
        CHECK(count_role(h, GadgetRole::kLiteral) == 3 * m);
        CHECK(h.instance.vertex_count() == rows * d * m + rows * (m - 1) + 5 * m + 2);
        CHECK(h.instance.max_abs_weight() == (m > 1 ? Weight{1} << (2 * d) : Weight{2}));
      }
    }
  }
  CHECK_THROWS_AS(gen_sat_high_degree(phi, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_sat_high_degree(phi, 40), std::invalid_argument);
}

TEST_CASE("high-degree SAT witnesses") {
  const auto single = CnfFormula::from_dimacs(1, {{1}});
  CHECK(is_nash_stable(gen_sat_high_degree(single, 2).instance, witness_sat_high_degree(single, 2, {true})).stable);
  CHECK_THROWS_AS(witness_sat_high_degree(single, 2, {false}), std::invalid_argument);

  const auto two = CnfFormula::from_dimacs(2, {{1, 2}, {-1, 2}});
  CHECK(is_nash_stable(gen_sat_high_degree(two, 2).instance, witness_sat_high_degree(two, 2, {false, true})).stable);

  std::mt19937_64 rng(61);
  int checked = 0;
  for (int round = 0; round < 60; ++round) {
    const auto phi = random_cnf(rng, 1 + rng() % 6, 1 + rng() % 4);
    const auto a = satisfying(phi);
    if (!a) continue;
    for (std::size_t delta : {2, 4}) {
      const auto g = gen_sat_high_degree(phi, delta);
      const auto w = witness_sat_high_degree(phi, delta, *a);
      CHECK(is_nash_stable(g.instance, w).stable);
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("high-degree SAT micro equivalence") {
  // One variable, delta 2, one clause: small enough for exhaustive search
  // once the clause repeats a single literal.
  const auto sat = CnfFormula::from_dimacs(1, {{1}});
  const auto g = gen_sat_high_degree(sat, 2);
  REQUIRE(g.instance.vertex_count() <= 12);
  CHECK(brute_force_nash(g.instance).has_value());
}

TEST_CASE("bounded-degree SAT gadget counts") {
  const auto phi = CnfFormula::from_dimacs(4, {{1, -2, 3}});
  const auto g = gen_sat_bounded_degree(phi);
  CHECK(g.encoded_variables == 4);
  CHECK(count_role(g, GadgetRole::kPalette) == 2 * 5);
  CHECK(count_role(g, GadgetRole::kSelection) == 5 * 5);
  CHECK(count_role(g, GadgetRole::kChecker) == 3);
  CHECK(count_role(g, GadgetRole::kChecker) <= 6);
  CHECK(count_role(g, GadgetRole::kOr) == 9);
  CHECK(count_role(g, GadgetRole::kLiteral) == 6);
  CHECK(count_role(g, GadgetRole::kConsistency) == 2);
  CHECK(g.instance.max_abs_weight() == 2);
  for (const Arc& a : g.instance.arcs()) CHECK((a.weight != 0 && a.weight >= -2 && a.weight <= 2));

  const auto big = gen_sat_bounded_degree(CnfFormula::from_dimacs(9, {{1, 5, -9}, {2, 3, 4}}));
  CHECK(big.encoded_variables == 16);
  // side 4, 9 selection paths, 18 columns, 6 palette pairs.
  CHECK(count_role(big, GadgetRole::kPalette) == 4 * 18);
  CHECK(count_role(big, GadgetRole::kSelection) == 9 * 18);
  CHECK(count_role(big, GadgetRole::kConsistency) == 2 * 6);
  CHECK(count_role(big, GadgetRole::kChecker) == 2 * 6);
  CHECK(big.instance.max_degree() <= 6);
  CHECK(gen_sat_bounded_degree(CnfFormula::from_dimacs(1, {{1}})).encoded_variables == 4);
}

TEST_CASE("bounded-degree SAT witnesses") {
  const auto single = CnfFormula::from_dimacs(1, {{1}});
  CHECK(is_nash_stable(gen_sat_bounded_degree(single).instance, witness_sat_bounded_degree(single, {true})).stable);
  CHECK_THROWS_AS(witness_sat_bounded_degree(CnfFormula::from_dimacs(2, {{1, 2}}), {false, false}),
                  std::invalid_argument);
  const auto two = CnfFormula::from_dimacs(3, {{1, 2, -3}, {-1, 3}});
  CHECK(is_nash_stable(gen_sat_bounded_degree(two).instance, witness_sat_bounded_degree(two, {true, false, true})).stable);

  std::mt19937_64 rng(67);
  int checked = 0;
  for (int round = 0; round < 60; ++round) {
    const auto phi = random_cnf(rng, 1 + rng() % 7, 1 + rng() % 4);
    // Every satisfying assignment, so the Or-gadget split point varies.
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << phi.variable_count()); ++mask) {
      const auto a = ashg::testing::assignment_from_mask(phi.variable_count(), mask);
      if (!phi.satisfied_by(a)) continue;
      const auto g = gen_sat_bounded_degree(phi);
      CHECK(is_nash_stable(g.instance, witness_sat_bounded_degree(phi, a)).stable);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("3-partition star") {
  const NumericInstance one{{3, 3, 3}, 9, 0};
  const auto g = gen_three_partition_star(one);
  CHECK(g.instance.vertex_count() == 6);
  CHECK(g.instance.max_degree() == 5);
  const Vertex s = 4;
  for (Vertex v = 0; v < 6; ++v)
    if (v != s) CHECK(g.instance.neighbors(v).size() == 1);
  CHECK(g.instance.weight(s, 5) == 9);
  CHECK(g.instance.weight(5, s) == 1);
  CHECK(g.instance.weight(s, 3) == 18);
  CHECK(g.instance.weight(s, 0) == -3);
  CHECK(g.instance.weight(0, s) == -1);
  CHECK(brute_force_nash(g.instance).has_value());
  CHECK(is_nash_stable(g.instance, witness_three_partition_star(one, {{{0, 1, 2}}})).stable);

  CHECK_THROWS_AS(gen_three_partition_star({{3, 3, 3, 3, 3, 4}, 9, 0}), std::invalid_argument);
  CHECK_THROWS_AS(gen_three_partition_star({{2, 3, 4}, 9, 0}), std::invalid_argument);
  CHECK_THROWS_AS(gen_three_partition_star({{3, 3}, 6, 0}), std::invalid_argument);
  CHECK_THROWS_AS(witness_three_partition_star(one, {{{0, 1, 1}}}), std::invalid_argument);
}

TEST_CASE("3-partition micro equivalence") {
  // Two triples: 6 items, 2 group vertices, s, s' = 10 vertices.
  const std::vector<std::pair<std::vector<std::int64_t>, std::int64_t>> cases{
      {{5, 5, 5, 5, 5, 5}, 15}, {{4, 4, 5, 5, 5, 5}, 14}, {{4, 4, 4, 6, 6, 6}, 15},
      {{5, 5, 6, 6, 6, 8}, 18}, {{6, 6, 6, 6, 7, 9}, 20}, {{7, 7, 7, 7, 7, 9}, 22}};
  for (const auto& [items, target] : cases) {
    const NumericInstance problem{items, target, 0};
    const auto g = gen_three_partition_star(problem);
    const auto triples = ashg::testing::three_partition(items, target);
    CHECK(brute_force_nash(g.instance).has_value() == triples.has_value());
    if (triples) CHECK(is_nash_stable(g.instance, witness_three_partition_star(problem, *triples)).stable);
  }
}

TEST_CASE("bin packing") {
  const NumericInstance small{{1, 1, 2}, 2, 2};
  const auto g = gen_bin_packing(small, false);
  CHECK(g.instance.vertex_count() == 7);
  CHECK(g.instance.weight(0, 2) == 2);
  CHECK(g.instance.weight(4, 0) == 1);
  CHECK(g.instance.weight(0, 6) == -2);
  CHECK(brute_force_connected_nash(g.instance).has_value());
  CHECK(is_nash_stable(g.instance, witness_bin_packing(small, false, {0, 0, 1})).stable);

  // {3,1} with B=2: item 3 cannot fit, but the total 4 = kB needs no padding.
  const NumericInstance over{{3, 1}, 2, 2};
  const auto o = gen_bin_packing(over, false);
  CHECK(o.items == std::vector<std::int64_t>{3, 1});
  CHECK_FALSE(brute_force_nash(o.instance).has_value());
  CHECK_THROWS_AS(witness_bin_packing(over, false, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(gen_bin_packing({{3, 3}, 2, 2}, false), std::invalid_argument);

  const NumericInstance even{{2, 2}, 2, 2};
  CHECK(brute_force_nash(gen_bin_packing(even, false).instance).has_value());

  const auto padded = gen_bin_packing({{2}, 2, 2}, false);
  CHECK(padded.items == std::vector<std::int64_t>{2, 1, 1});
  CHECK(count_role(padded, GadgetRole::kPadding) == 2);
}

TEST_CASE("bin packing unit-weight expansion") {
  const NumericInstance problem{{1, 1}, 2, 1};
  const auto plain = gen_bin_packing(problem, false);
  const auto unit = gen_bin_packing(problem, true);
  // Only b -> b' has |w| >= 2; it becomes two intermediate vertices.
  CHECK(count_role(unit, GadgetRole::kExpansion) == 2);
  CHECK(unit.instance.vertex_count() == plain.instance.vertex_count() + 2);
  CHECK_FALSE(unit.instance.arc_weight(0, 1).has_value());
  for (Vertex e = static_cast<Vertex>(plain.instance.vertex_count()); e < unit.instance.vertex_count(); ++e) {
    CHECK(unit.instance.weight(e, 1) == 1);
    CHECK(unit.instance.weight(0, e) == 1);
  }
  for (const Arc& a : unit.instance.arcs()) CHECK((a.weight >= -1 && a.weight <= 1));
  CHECK(is_nash_stable(unit.instance, witness_bin_packing(problem, true, {0, 0})).stable);

  const NumericInstance heavy{{2, 1, 1}, 2, 2};
  const auto h = gen_bin_packing(heavy, true);
  // b_j -> item of weight 2 is expanded into two arcs of weight -1.
  CHECK(count_role(h, GadgetRole::kExpansion) == 2 * 2 + 2 * 2);
  CHECK(is_nash_stable(h.instance, witness_bin_packing(heavy, true, {0, 1, 1})).stable);
}

TEST_CASE("bin packing micro equivalence") {
  std::mt19937_64 rng(71);
  int feasible = 0, infeasible = 0;
  for (int round = 0; round < 40; ++round) {
    const std::size_t k = 1 + rng() % 2;
    const std::int64_t cap = 2 + static_cast<std::int64_t>(rng() % 3);
    std::vector<std::int64_t> items(1 + rng() % 6);
    for (auto& w : items) w = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(cap + 1));
    const NumericInstance problem{items, cap, k};
    GeneratedInstance g;
    try {
      g = gen_bin_packing(problem, false);
    } catch (const std::invalid_argument&) {
      continue;
    }
    if (g.instance.vertex_count() > 10) continue;
    const auto packing = ashg::testing::bin_packing(g.items, cap, k);
    CHECK(brute_force_connected_nash(g.instance).has_value() == packing.has_value());
    (packing ? feasible : infeasible)++;
  }
  CHECK(feasible > 0);
  CHECK(infeasible > 0);
}

TEST_CASE("square_zero_arcs") {
  const auto path = ashg::testing::unit_path(3);
  const auto sq = square_zero_arcs(path);
  CHECK(sq.arc_weight(0, 2) == Weight{0});
  CHECK(sq.arc_weight(2, 0) == Weight{0});
  CHECK(sq.arc_count() == path.arc_count() + 2);

  std::vector<Arc> arcs;
  for (Vertex u = 0; u < 4; ++u)
    for (Vertex v = 0; v < 4; ++v)
      if (u != v) arcs.push_back({u, v, 1});
  const AshgInstance k4(4, arcs);
  CHECK(square_zero_arcs(k4) == k4);

  const AshgInstance stalker_z(3, {{0, 1, 1}, {1, 0, -1}});
  CHECK(square_zero_arcs(stalker_z) == stalker_z);
}

TEST_CASE("squaring preserves Nash stability and connects it") {
  std::mt19937_64 rng(73);
  for (int round = 0; round < 150; ++round) {
    const auto g = ashg::testing::random_instance(rng, {.max_n = 7});
    const auto sq = square_zero_arcs(g);
    const bool plain = ashg::testing::reference_nash_exists(g);
    CHECK(ashg::testing::reference_nash_exists(sq) == plain);
    CHECK(ashg::testing::reference_connected_nash_exists(sq) == plain);
  }
}

TEST_CASE("split stable partitions are connected witnesses on the square") {
  std::mt19937_64 rng(79);
  int witnessed = 0;
  for (int round = 0; round < 200; ++round) {
    const auto g = ashg::testing::random_instance(rng, {.min_n = 2, .max_n = 7, .max_degree = 3});
    const auto sq = square_zero_arcs(g);
    const std::size_t n = g.vertex_count();
    ashg::testing::for_each_partition(n, [&](const std::vector<std::uint32_t>& labels) {
      if (!ashg::testing::naive_nash_stable(g, labels)) return false;
      // Components of each coalition in the squared graph.
      std::vector<std::uint32_t> parts(n, 0);
      std::vector<bool> seen(n, false);
      std::uint32_t next = 0;
      for (Vertex s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<Vertex> stack{s};
        seen[s] = true;
        while (!stack.empty()) {
          const Vertex v = stack.back();
          stack.pop_back();
          parts[v] = next;
          for (Vertex u : sq.neighbors(v)) {
            if (!seen[u] && labels[u] == labels[v]) {
              seen[u] = true;
              stack.push_back(u);
            }
          }
        }
        ++next;
      }
      const Partition split(parts);
      CHECK(is_nash_stable(sq, split).stable);
      CHECK(is_connected_partition(sq, split).connected);
      ++witnessed;
      return false;
    });
  }
  CHECK(witnessed > 100);
}

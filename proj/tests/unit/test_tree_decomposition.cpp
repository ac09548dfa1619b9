#include <doctest.h>

#include <random>
#include <set>

#include "ashg/tree_decomposition.hpp"
#include "test_support.hpp"

using namespace ashg;

namespace {

AshgInstance star(std::size_t leaves) {
  std::vector<Arc> arcs;
  for (Vertex v = 1; v <= leaves; ++v) {
    arcs.push_back({0, v, 1});
    arcs.push_back({v, 0, 1});
  }
  return AshgInstance(leaves + 1, arcs);
}

AshgInstance triangle() { return AshgInstance(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}); }

}  // namespace

TEST_CASE("validate") {
  const auto path = ashg::testing::unit_path(3);
  const TreeDecomposition td({{0, 1}, {1, 2}}, {{0, 1}});
  CHECK(validate(td, path).valid);

  AshgInstance with_chord(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  auto uncovered = validate(td, with_chord);
  CHECK_FALSE(uncovered.valid);
  CHECK_FALSE(uncovered.violations.empty());

  const TreeDecomposition broken({{0}, {1, 2}, {0, 2}}, {{0, 1}, {1, 2}});
  CHECK_FALSE(validate(broken, AshgInstance(3, {{0, 2, 1}, {1, 2, 1}})).valid);

  CHECK_FALSE(validate(TreeDecomposition({{0, 1}}, {}), path).valid);
  CHECK_FALSE(validate(TreeDecomposition({{0, 1}, {1, 2}}, {}), path).valid);
  CHECK_FALSE(validate(TreeDecomposition({{0, 1}, {1, 2}, {2}}, {{0, 1}, {1, 2}, {0, 2}}), path).valid);
  CHECK_THROWS_AS(TreeDecomposition({{0}}, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(TreeDecomposition({{0}}, {{0, 3}}), std::invalid_argument);
}

TEST_CASE("heuristic decompositions") {
  for (auto h : {EliminationHeuristic::kMinDegree, EliminationHeuristic::kMinFill}) {
    const auto p5 = ashg::testing::unit_path(5);
    auto td = heuristic_decompose(p5, h);
    CHECK(validate(td, p5).valid);
    CHECK(td.width() == 1);

    auto tri = heuristic_decompose(triangle(), h);
    CHECK(validate(tri, triangle()).valid);
    CHECK(tri.width() == 2);

    auto empty = heuristic_decompose(AshgInstance(0, {}), h);
    CHECK(empty.bag_count() == 1);
    CHECK(empty.bag(0).empty());
    CHECK(empty.width() == 0);

    auto isolated = heuristic_decompose(AshgInstance(4, {{0, 1, 1}}), h);
    CHECK(validate(isolated, AshgInstance(4, {{0, 1, 1}})).valid);
  }
}

TEST_CASE("heuristic decompositions are valid and deterministic on random graphs") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 200; ++round) {
    const auto g = ashg::testing::random_instance(rng, {.min_n = 0, .max_n = 14, .max_degree = 5, .density = 0.4});
    for (auto h : {EliminationHeuristic::kMinDegree, EliminationHeuristic::kMinFill}) {
      const auto td = heuristic_decompose(g, h);
      CHECK(validate(td, g).valid);
      CHECK(td == heuristic_decompose(g, h));
      // An edge needs a bag of two; any vertex needs one.
      const std::size_t least = g.vertex_count() == 0 ? 0 : (g.max_degree() > 0 ? 2 : 1);
      CHECK(td.max_bag_size() >= least);
    }
  }
}

TEST_CASE("min-degree width under edge removal on forests and cycles") {
  // Removing an edge from a tree or a cycle yields a forest: width stays <= 1
  // after starting from width 1 or 2.
  std::mt19937_64 rng(8);
  for (std::size_t n = 3; n <= 12; ++n) {
    std::vector<Arc> arcs;
    for (Vertex v = 0; v < n; ++v) arcs.push_back({v, static_cast<Vertex>((v + 1) % n), 1});
    const AshgInstance cycle(n, arcs);
    const auto w_cycle = heuristic_decompose(cycle).width();
    CHECK(w_cycle == 2);
    arcs.erase(arcs.begin() + static_cast<std::ptrdiff_t>(rng() % arcs.size()));
    const AshgInstance cut(n, arcs);
    CHECK(heuristic_decompose(cut).width() <= w_cycle);
    CHECK(heuristic_decompose(cut).width() == 1);
  }
}

// Greedy elimination orders are not monotone in general; violations are
// reported but do not fail the run.
TEST_CASE("heuristic width under edge removal on random graphs" * doctest::may_fail()) {
  std::mt19937_64 rng(9);
  int checked = 0, violations = 0;
  for (int round = 0; round < 2000; ++round) {
    const auto g = ashg::testing::random_instance(rng, {.min_n = 2, .max_n = 14, .max_degree = 5});
    if (g.arc_count() == 0) continue;
    std::vector<Arc> arcs(g.arcs().begin(), g.arcs().end());
    const Arc drop = arcs[rng() % arcs.size()];
    std::erase_if(arcs, [&](const Arc& a) {
      return (a.from == drop.from && a.to == drop.to) || (a.from == drop.to && a.to == drop.from);
    });
    const AshgInstance cut(g.vertex_count(), arcs);
    for (auto h : {EliminationHeuristic::kMinDegree, EliminationHeuristic::kMinFill}) {
      ++checked;
      const bool monotone = heuristic_decompose(cut, h).width() <= heuristic_decompose(g, h).width();
      violations += monotone ? 0 : 1;
      CHECK(monotone);
    }
  }
  MESSAGE(violations << " of " << checked << " edge removals increased the heuristic width");
}

TEST_CASE("make_nice") {
  SUBCASE("single bag") {
    const auto ntd = make_nice(TreeDecomposition({{0, 1}}, {}));
    REQUIRE(ntd.size() == 5);
    CHECK(ntd.node(0).kind == NiceNodeKind::kLeaf);
    CHECK(ntd.node(1).kind == NiceNodeKind::kIntroduce);
    CHECK(ntd.node(1).vertex == 0);
    CHECK(ntd.node(2).kind == NiceNodeKind::kIntroduce);
    CHECK(ntd.node(2).vertex == 1);
    CHECK(ntd.node(3).kind == NiceNodeKind::kForget);
    CHECK(ntd.node(3).vertex == 0);
    CHECK(ntd.node(4).kind == NiceNodeKind::kForget);
    CHECK(ntd.node(4).vertex == 1);
    CHECK(ntd.node(ntd.root()).bag.empty());
  }
  SUBCASE("two-bag path") {
    const auto path = ashg::testing::unit_path(3);
    const TreeDecomposition td({{0, 1}, {1, 2}}, {{0, 1}});
    const auto ntd = make_nice(td);
    CHECK(validate_nice(ntd, path).valid);
    CHECK(ntd.width() == td.width());
  }
  SUBCASE("empty graph") {
    const auto ntd = make_nice(TreeDecomposition({{}}, {}));
    CHECK(ntd.size() == 1);
    CHECK(ntd.node(0).kind == NiceNodeKind::kLeaf);
    CHECK(validate_nice(ntd, AshgInstance(0, {})).valid);
  }
  SUBCASE("invalid input") {
    CHECK_THROWS_AS(make_nice(TreeDecomposition({{0}, {1}}, {})), std::invalid_argument);
    CHECK_THROWS_AS(make_nice(TreeDecomposition({{0}, {1}, {0}}, {{0, 1}, {1, 2}})), std::invalid_argument);
  }
  SUBCASE("random graphs keep width and validity") {
    std::mt19937_64 rng(4);
    for (int round = 0; round < 150; ++round) {
      const auto g = ashg::testing::random_instance(rng, {.min_n = 0, .max_n = 12, .max_degree = 4});
      const auto td = heuristic_decompose(g);
      const auto ntd = make_nice(td);
      CHECK(validate_nice(ntd, g).valid);
      CHECK(ntd.width() == td.width());
      std::size_t joins = 0;
      for (const auto& node : ntd.nodes()) {
        if (node.kind == NiceNodeKind::kJoin) {
          ++joins;
          CHECK(ntd.node(node.children[0]).bag == node.bag);
          CHECK(ntd.node(node.children[1]).bag == node.bag);
        }
      }
      CHECK(joins < std::max<std::size_t>(td.bag_count(), 1));
    }
  }
}

TEST_CASE("validate_nice rejects malformed trees") {
  const auto path = ashg::testing::unit_path(2);
  std::vector<NiceNode> nodes{{NiceNodeKind::kLeaf, 0, {}, {}},
                              {NiceNodeKind::kIntroduce, 0, {0}, {0}},
                              {NiceNodeKind::kForget, 0, {}, {1}}};
  // Vertex 1 never appears.
  CHECK_FALSE(validate_nice(NiceTreeDecomposition(nodes), path).valid);
  nodes[1].bag = {0, 1};
  CHECK_FALSE(validate_nice(NiceTreeDecomposition(nodes), path).valid);
}

TEST_CASE("square graph and augmentation") {
  SUBCASE("path") {
    const auto path = ashg::testing::unit_path(3);
    const TreeDecomposition td({{0, 1}, {1, 2}}, {{0, 1}});
    const auto sq = square_augment(path, td);
    CHECK(sq.instance.arc_weight(0, 2) == Weight{0});
    CHECK(sq.instance.arc_weight(2, 0) == Weight{0});
    CHECK(sq.decomposition.bag(0) == std::vector<Vertex>{0, 1, 2});
    CHECK(sq.decomposition.bag(1) == std::vector<Vertex>{0, 1, 2});
    CHECK(validate(sq.decomposition, sq.instance).valid);
  }
  SUBCASE("single vertex") {
    const AshgInstance one(1, {});
    const auto sq = square_augment(one, TreeDecomposition({{0}}, {}));
    CHECK(sq.instance == one);
    CHECK(sq.decomposition.bag(0) == std::vector<Vertex>{0});
  }
  SUBCASE("star becomes a clique") {
    const auto s = star(3);
    const auto sq = square_augment(s, heuristic_decompose(s));
    for (Vertex u = 0; u < 4; ++u)
      for (Vertex v = 0; v < 4; ++v)
        if (u != v) CHECK(sq.instance.adjacent(u, v));
    for (const auto& bag : sq.decomposition.bags())
      if (std::binary_search(bag.begin(), bag.end(), Vertex{0})) CHECK(bag.size() == 4);
  }
  SUBCASE("invalid decomposition") {
    CHECK_THROWS_AS(square_augment(ashg::testing::unit_path(3), TreeDecomposition({{0, 1}}, {})),
                    std::invalid_argument);
  }
  SUBCASE("random graphs") {
    std::mt19937_64 rng(6);
    for (int round = 0; round < 150; ++round) {
      const auto g = ashg::testing::random_instance(rng, {.min_n = 1, .max_n = 10, .max_degree = 3});
      const auto td = heuristic_decompose(g);
      const auto sq = square_augment(g, td);
      CHECK(validate(sq.decomposition, sq.instance).valid);
      CHECK(sq.decomposition.max_bag_size() <= td.max_bag_size() * (g.max_degree() + 1));
      // Distance-2 closure computed independently.
      const std::size_t n = g.vertex_count();
      for (Vertex u = 0; u < n; ++u) {
        std::set<Vertex> reach(g.neighbors(u).begin(), g.neighbors(u).end());
        for (Vertex x : g.neighbors(u))
          for (Vertex y : g.neighbors(x))
            if (y != u) reach.insert(y);
        CHECK(std::vector<Vertex>(reach.begin(), reach.end()) ==
              std::vector<Vertex>(sq.instance.neighbors(u).begin(), sq.instance.neighbors(u).end()));
      }
      // Utilities unchanged for an arbitrary partition.
      std::vector<std::uint32_t> labels(n);
      for (auto& l : labels) l = static_cast<std::uint32_t>(rng() % 3);
      const Partition p(labels);
      for (Vertex v = 0; v < n; ++v) CHECK(utility(g, p, v) == utility(sq.instance, p, v));
    }
  }
}

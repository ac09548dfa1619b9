#include <benchmark/benchmark.h>

#include <random>

#include "ashg/connected_dp.hpp"
#include "ashg/oracle.hpp"
#include "ashg/reductions.hpp"
#include "ashg/stable_coloring.hpp"

using namespace ashg;

namespace {

AshgInstance random_path(std::size_t n, Weight bound, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Weight> w(-bound, bound);
  std::vector<Arc> arcs;
  for (Vertex v = 0; v + 1 < n; ++v) {
    arcs.push_back({v, v + 1, w(rng)});
    arcs.push_back({v + 1, v, w(rng)});
  }
  return AshgInstance(n, std::move(arcs));
}

AshgInstance unit_path(std::size_t n) {
  std::vector<Arc> arcs;
  for (Vertex v = 0; v + 1 < n; ++v) {
    arcs.push_back({v, v + 1, 1});
    arcs.push_back({v + 1, v, 1});
  }
  return AshgInstance(n, std::move(arcs));
}

/// Ladder: two parallel paths with rungs, width 2.
AshgInstance ladder(std::size_t rungs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Weight> w(-3, 3);
  std::vector<Arc> arcs;
  auto edge = [&](Vertex u, Vertex v) {
    arcs.push_back({u, v, w(rng)});
    arcs.push_back({v, u, w(rng)});
  };
  for (Vertex i = 0; i < rungs; ++i) {
    edge(2 * i, 2 * i + 1);
    if (i + 1 < rungs) {
      edge(2 * i, 2 * i + 2);
      edge(2 * i + 1, 2 * i + 3);
    }
  }
  return AshgInstance(2 * rungs, std::move(arcs));
}

void BM_ConnectedPath(benchmark::State& state) {
  const auto g = random_path(static_cast<std::size_t>(state.range(0)), 5, 1);
  const auto td = heuristic_decompose(g);
  for (auto _ : state) benchmark::DoNotOptimize(solve_connected_nash(g, td));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConnectedPath)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_ConnectedUnitPath(benchmark::State& state) {
  const auto g = unit_path(static_cast<std::size_t>(state.range(0)));
  const auto td = heuristic_decompose(g);
  for (auto _ : state) benchmark::DoNotOptimize(solve_connected_nash(g, td));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConnectedUnitPath)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_ColoringPath(benchmark::State& state) {
  const auto g = unit_path(static_cast<std::size_t>(state.range(0)));
  const auto td = heuristic_decompose(g);
  for (auto _ : state) benchmark::DoNotOptimize(solve_nash_via_coloring(g, td));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ColoringPath)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_ConnectedLadder(benchmark::State& state) {
  const auto g = ladder(static_cast<std::size_t>(state.range(0)), 2);
  const auto td = heuristic_decompose(g);
  for (auto _ : state) benchmark::DoNotOptimize(solve_connected_nash(g, td));
}
BENCHMARK(BM_ConnectedLadder)->Arg(8)->Arg(32)->Arg(128);

void BM_ConnectedWorkers(benchmark::State& state) {
  const auto g = ladder(128, 3);
  const auto td = heuristic_decompose(g);
  SolverOptions options;
  options.workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_connected_nash(g, td, options));
}
BENCHMARK(BM_ConnectedWorkers)->Arg(1)->Arg(2)->Arg(4);

void BM_BruteForceNash(benchmark::State& state) {
  const auto g = random_path(static_cast<std::size_t>(state.range(0)), 3, 4);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_nash(g));
}
BENCHMARK(BM_BruteForceNash)->DenseRange(6, 10, 2);

void BM_HeuristicDecompose(benchmark::State& state) {
  const auto g = ladder(static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(heuristic_decompose(g, EliminationHeuristic::kMinFill));
}
BENCHMARK(BM_HeuristicDecompose)->Arg(64)->Arg(512);

void BM_GenSatBoundedDegree(benchmark::State& state) {
  std::vector<CnfFormula::Clause> clauses;
  const auto n = static_cast<std::uint32_t>(state.range(0));
  for (std::uint32_t j = 0; j < n; ++j) clauses.push_back({Literal{j, false}, Literal{(j + 1) % n, true}, Literal{(j + 2) % n, false}});
  const CnfFormula phi(n, clauses);
  for (auto _ : state) benchmark::DoNotOptimize(gen_sat_bounded_degree(phi));
}
BENCHMARK(BM_GenSatBoundedDegree)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();

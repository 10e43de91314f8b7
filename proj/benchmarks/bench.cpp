#include <benchmark/benchmark.h>

#include <numeric>

#include "epicenter/estimators.hpp"
#include "epicenter/graph.hpp"
#include "epicenter/lazy_tree.hpp"
#include "epicenter/oracle.hpp"
#include "epicenter/spreading.hpp"

namespace {

using namespace epicenter;

Graph make_tree(std::size_t nodes, std::uint64_t seed) {
  LazyTree tree(3, 5, seed);
  tree.expand_to_size(nodes);
  return tree.graph();
}

std::vector<NodeId> snapshot(const Graph& g, std::size_t threshold, std::uint64_t seed) {
  Rng rng(seed);
  const auto outcome = simulate(g, std::vector<NodeId>{0}, SpreadParams::si(0.5),
                                StopRule::infected_at_least(threshold), rng);
  return outcome.observed_infected;
}

void BM_BfsDistances(benchmark::State& state) {
  const Graph g = make_tree(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bfs_distances(g, NodeId{0}));
  }
}
BENCHMARK(BM_BfsDistances)->Arg(1000)->Arg(10000);

void BM_SimulateToThreshold(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    LazyTree tree(3, 5, ++seed);
    Rng rng(seed);
    benchmark::DoNotOptimize(simulate(tree, std::vector<NodeId>{0}, SpreadParams::si(0.5),
                                      StopRule::infected_at_least(101), rng));
  }
}
BENCHMARK(BM_SimulateToThreshold);

void BM_JordanCenter(benchmark::State& state) {
  const Graph g = make_tree(2000, 2);
  const auto infected = snapshot(g, static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(jordan_center(g, infected));
  }
}
BENCHMARK(BM_JordanCenter)->Arg(51)->Arg(101);

void BM_BetweennessEstimate(benchmark::State& state) {
  const Graph g = make_tree(2000, 4);
  const auto infected = snapshot(g, 101, 5);
  for (auto _ : state) {
    Rng rng(7);
    benchmark::DoNotOptimize(
        centrality_estimate(g, infected, EstimatorKind::BC, 1, rng));
  }
}
BENCHMARK(BM_BetweennessEstimate);

void BM_EnumerateConsistentPaths(benchmark::State& state) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u + 1 < 9; ++u) edges.emplace_back(u, u + 1);
  const Graph g = Graph::from_edges(9, edges);
  const SpreadParams params = SpreadParams::sir(0.6, 0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_consistent_paths(
        g, std::vector<NodeId>{4}, std::vector<NodeId>{3, 4, 5}, static_cast<int>(state.range(0)),
        params));
  }
}
BENCHMARK(BM_EnumerateConsistentPaths)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();

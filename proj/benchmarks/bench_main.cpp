// Microbenchmarks for the hot paths: graph enumeration, class grouping,
// joint-table construction, candidate scoring, estimator throughput, and the
// reverse-projection optimizer.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <utility>
#include <vector>

#include "bnlab/bayes_net.hpp"
#include "bnlab/dag.hpp"
#include "bnlab/divergences.hpp"
#include "bnlab/error_lab.hpp"
#include "bnlab/graph_space.hpp"
#include "bnlab/rng.hpp"
#include "bnlab/scoring.hpp"

namespace {

using namespace bnlab;

BayesNet diamond4() {
  Dag g = Dag::from_edges(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  return BayesNet(std::move(g), {{0.1}, {0.1, 0.3}, {0.1, 0.3}, {0.1, 0.8, 0.3, 0.2}}, true);
}

void bm_enumerate_dags(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_dags(n));
  }
}
BENCHMARK(bm_enumerate_dags)->Arg(3)->Arg(4)->Arg(5);

void bm_equivalence_classes(benchmark::State& state) {
  const std::vector<Dag> dags = enumerate_dags(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(equivalence_classes(dags));
  }
}
BENCHMARK(bm_equivalence_classes)->Arg(4)->Arg(5);

void bm_joint_distribution(benchmark::State& state) {
  const BayesNet net = diamond4();
  for (auto _ : state) {
    benchmark::DoNotOptimize(joint_distribution(net));
  }
}
BENCHMARK(bm_joint_distribution);

void bm_score_all_candidates(benchmark::State& state) {
  const BayesNet net = diamond4();
  const std::vector<Dag> dags = enumerate_dags(4);
  std::mt19937_64 gen = make_stream(17, 0, 0);
  const SampleCounts counts = multinomial_counts(joint_distribution(net), 10000, gen);
  const PenaltyFunction bic = PenaltyFunction::bic();
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_structure(dags, counts, bic));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(dags.size()));
}
BENCHMARK(bm_score_all_candidates);

void bm_mc_error_prob(benchmark::State& state) {
  const BayesNet net = diamond4();
  const Dag empty(4);
  const PenaltyFunction bic = PenaltyFunction::bic();
  const std::uint64_t blocks = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_error_prob(net, net.dag(), empty, 1000, blocks, bic, seed++));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(blocks));
}
BENCHMARK(bm_mc_error_prob)->Arg(1000);

void bm_is_error_prob(benchmark::State& state) {
  const BayesNet net = diamond4();
  const Dag empty(4);
  const PenaltyFunction bic = PenaltyFunction::bic();
  const std::vector<ProposalSpec> grid = default_proposal_grid();
  const std::uint64_t blocks = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        is_error_prob(net, net.dag(), empty, 1000, blocks, bic, grid, seed++));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(blocks * grid.size()));
}
BENCHMARK(bm_is_error_prob)->Arg(100);

void bm_i_projection(benchmark::State& state) {
  const JointDistribution p = joint_distribution(diamond4());
  const Dag empty(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(i_projection(p, empty));
  }
}
BENCHMARK(bm_i_projection);

}  // namespace

BENCHMARK_MAIN();

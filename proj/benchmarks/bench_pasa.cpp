#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "pasa/cycles.hpp"
#include "pasa/experiment.hpp"
#include "pasa/mdp.hpp"
#include "pasa/partition.hpp"
#include "pasa/pasa.hpp"
#include "pasa/random.hpp"

using namespace pasa;

namespace {

std::vector<std::size_t> random_states(std::size_t S, std::size_t n) {
  Rng rng = make_rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, S - 1);
  std::vector<std::size_t> out(n);
  for (auto& s : out) s = pick(rng);
  return out;
}

void BM_TreeCellOf(benchmark::State& state) {
  const auto S = static_cast<std::size_t>(state.range(0));
  const PartitionTree tree(S, 16, S / 4);
  const auto queries = random_states(S, 4096);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tree.cell_of(queries[i++ & 4095]));
  }
}
BENCHMARK(BM_TreeCellOf)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 18);

void BM_MapCellOf(benchmark::State& state) {
  const auto S = static_cast<std::size_t>(state.range(0));
  const CellMap map = PartitionTree(S, 16, S / 4).convert();
  const auto queries = random_states(S, 4096);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(map.cell_of(queries[i++ & 4095]));
  }
}
BENCHMARK(BM_MapCellOf)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 18);

void BM_IndicatorCells(benchmark::State& state) {
  const auto S = static_cast<std::size_t>(state.range(0));
  const PartitionTree tree(S, 16, S / 4);
  const auto queries = random_states(S, 4096);
  std::vector<std::size_t> out;
  std::size_t i = 0;
  for (auto _ : state) {
    tree.indicator_cells(queries[i++ & 4095], out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_IndicatorCells)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 18);

void BM_Observe(benchmark::State& state) {
  const auto S = static_cast<std::size_t>(state.range(0));
  Pasa pasa(PartitionTree(S, 16, S / 4), {});
  const auto queries = random_states(S, 4096);
  std::size_t i = 0;
  for (auto _ : state) pasa.observe(queries[i++ & 4095]);
}
BENCHMARK(BM_Observe)->Arg(1 << 10)->Arg(1 << 14);

void BM_Reselect(benchmark::State& state) {
  const auto X = static_cast<std::size_t>(state.range(0));
  const std::size_t S = 16 * X;
  PartitionTree tree(S, 16, X);
  Rng rng = make_rng(5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> u(X);
  for (auto& v : u) v = u01(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reselect(u, tree, 0.02).rho_changes);
  }
}
BENCHMARK(BM_Reselect)->Arg(64)->Arg(512)->Arg(4096);

void BM_ComputeCycles(benchmark::State& state) {
  const auto S = static_cast<std::size_t>(state.range(0));
  const auto successor = sample_skeleton(S, 1, 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_cycles(successor).total());
  }
}
BENCHMARK(BM_ComputeCycles)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

void BM_PolicyEvaluation(benchmark::State& state) {
  ExperimentConfig c;
  c.S = 256;
  c.iterations = static_cast<std::uint64_t>(state.range(0));
  c.score_interval = c.iterations;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_policy_evaluation(c).final_score().L);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PolicyEvaluation)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

//! Serial reference vs OpenMP paths on a 1024-point grid.

#include "lorpe/expansion.hpp"
#include "lorpe/lorpe.hpp"

#include <benchmark/benchmark.h>

#include <limits>
#include <random>

using namespace lorpe;

namespace {

std::vector<double> exp_sample(std::size_t n)
{
  std::mt19937_64 rng(1);
  std::exponential_distribution<double> E(1.0);
  std::vector<double> x(n);
  for (double& v : x)
    v = E(rng);
  return x;
}

LorpeConfig bench_config()
{
  LorpeConfig c;
  c.h = 2.0;
  c.M = 6.5;
  c.kernel = KernelSpec::quadweight();
  c.support = { 0.0, std::numeric_limits<double>::infinity() };
  return c;
}

template <Execution E>
void estimate(benchmark::State& state)
{
  auto x = exp_sample(static_cast<std::size_t>(state.range(0)));
  auto cfg = bench_config();
  auto grid = default_grid(x, cfg.support, cfg.h, cfg.kernel);
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_on_grid(x, cfg, grid, E));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

template <Execution E>
void expansion_table(benchmark::State& state)
{
  auto x = exp_sample(static_cast<std::size_t>(state.range(0)));
  auto cfg = bench_config();
  auto grid = default_grid(x, cfg.support, cfg.h, cfg.kernel);
  ExpansionTable::Options o;
  o.max_degree = 20;
  o.exec = E;
  for (auto _ : state)
    benchmark::DoNotOptimize(ExpansionTable(x, cfg, grid, o).raw(12.5));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

} // namespace

BENCHMARK(estimate<Execution::serial>)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(estimate<Execution::parallel>)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(expansion_table<Execution::serial>)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(expansion_table<Execution::parallel>)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

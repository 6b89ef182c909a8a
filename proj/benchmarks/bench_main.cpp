// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>
#include <magbloch/bands.hpp>
#include <magbloch/pencil.hpp>
#include <magbloch/problem.hpp>

namespace
{

using namespace magbloch;

Problem Preset()
{
  return Symmetrize(BuildProblem(
      {"custom",
       {MakeFourierTerm({0, 0, 1}, 0.3, Target::G11, Phase::Cos),
        MakeFourierTerm({0, 1, 0}, 0.4, Target::V, Phase::Cos)},
       1}));
}

void BM_AssembleFiber(benchmark::State &state)
{
  const int n = int(state.range(0));
  const Problem p = Preset();
  const TwistedGrid grid(GridMode::Fiber, {n, n, n}, 1);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(AssembleFiber(p, grid, Vec3(0.2, 0.3, 0.4)).H.nonZeros());
  }
}
BENCHMARK(BM_AssembleFiber)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_SolveLowest(benchmark::State &state)
{
  const int n = int(state.range(0));
  const Problem p = Preset();
  const TwistedGrid grid(GridMode::Fiber, {n, n, n}, 1);
  const FiberSystem s = AssembleFiber(p, grid, Vec3(0.2, 0.3, 0.4));
  EigenOptions o;
  o.seed = 1;
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(SolveLowest(s, 4, o).values(0));
  }
}
BENCHMARK(BM_SolveLowest)->Arg(12)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Pencil(benchmark::State &state)
{
  const int n = int(state.range(0));
  const Problem p = Preset();
  const TwistedGrid slab(GridMode::Slab, {n, n, n}, 1);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(RunPencil(p, slab, {0.25, 0.1}, 1.0).report.nonreal_count);
  }
}
BENCHMARK(BM_Pencil)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

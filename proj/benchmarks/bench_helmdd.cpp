// SPDX-License-Identifier: Apache-2.0

#include <memory>

#include <benchmark/benchmark.h>

#include "helmdd/assembly.hpp"
#include "helmdd/decomposition.hpp"
#include "helmdd/factorization.hpp"
#include "helmdd/gmres.hpp"
#include "helmdd/preconditioner.hpp"
#include "helmdd/random.hpp"
#include "helmdd/solver.hpp"

using namespace helmdd;

namespace
{

void BM_AssembleGlobal(benchmark::State &state)
{
  const auto mesh = build_uniform_mesh(2, static_cast<int>(state.range(0)));
  const HelmholtzParams p{20.0, 20.0, 20.0};
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(assemble_global(mesh, p));
  }
  state.counters["n"] = static_cast<double>(mesh.num_vertices());
}
BENCHMARK(BM_AssembleGlobal)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SparseLU(benchmark::State &state)
{
  const auto mesh = build_uniform_mesh(2, static_cast<int>(state.range(0)));
  const auto a = assemble_global(mesh, HelmholtzParams{20.0, 20.0, 20.0});
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(factorize(a));
  }
}
BENCHMARK(BM_SparseLU)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

// One application of the one-level preconditioner at k = 20, alpha = 1.
void BM_OneLevelApply(benchmark::State &state)
{
  const auto mesh = build_uniform_mesh(2, 100);
  const HelmholtzParams p{20.0, 20.0, 20.0};
  const auto dd = std::make_shared<Decomposition>(
    build_decomposition(mesh, 20, 2, PartitionOfUnity::ramp));
  const OneLevelORAS m1(mesh, dd, p, 1);
  const ComplexVector v = random_initial_guess(mesh.num_vertices(), 0);
  ComplexVector out(v.size());
  for (auto _ : state)
  {
    m1.apply(v, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_OneLevelApply)->Unit(benchmark::kMillisecond);

void BM_DtnSetup(benchmark::State &state)
{
  const auto mesh = build_uniform_mesh(2, 40);
  const HelmholtzParams p{10.0, 10.0, 10.0};
  const auto dd = build_decomposition(mesh, 10, 2, PartitionOfUnity::ramp);
  const auto a = assemble_global(mesh, p);
  DtnOptions opt;
  opt.threads = 1;
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(build_dtn_cs(mesh, dd, p, a, opt));
  }
}
BENCHMARK(BM_DtnSetup)->Unit(benchmark::kMillisecond);

// Whole preconditioned solve for one seed, setup excluded.
void BM_Solve(benchmark::State &state)
{
  SolveConfig c;
  c.k = 10.0;
  c.precon = static_cast<PreconditionerKind>(state.range(0));
  c.threads = 1;
  const PreparedSolve prepared(c);
  int iterations = 0;
  for (auto _ : state)
  {
    iterations = prepared.run(0).iterations;
  }
  state.counters["iterations"] = iterations;
  state.SetLabel(to_string(c.precon));
}
BENCHMARK(BM_Solve)
  ->Arg(static_cast<int>(PreconditionerKind::one_level))
  ->Arg(static_cast<int>(PreconditionerKind::grid))
  ->Arg(static_cast<int>(PreconditionerKind::dtn))
  ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

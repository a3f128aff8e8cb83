#include "thinfilm/quadforms.hpp"

#include <benchmark/benchmark.h>

using namespace thinfilm;

namespace {

void BM_HessianCell(benchmark::State& state) {
  CellLaw law;
  law.kind = BulkKind::pair;
  const auto method = state.range(0) == 0 ? HessianMethod::finite_difference : HessianMethod::analytic;
  for (auto _ : state) benchmark::DoNotOptimize(hessian_cell(law, method));
}
BENCHMARK(BM_HessianCell)->Arg(0)->Arg(1);

void BM_Relaxation(benchmark::State& state) {
  CellLaw law;
  const RelaxationSolver rel(hessian_cell(law, HessianMethod::analytic));
  CellMatrix a = CellMatrix::Random();
  for (auto _ : state) benchmark::DoNotOptimize(rel.q_rel(a));
}
BENCHMARK(BM_Relaxation);

}  // namespace

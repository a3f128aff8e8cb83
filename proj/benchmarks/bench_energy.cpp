#include "thinfilm/energy.hpp"
#include "thinfilm/minimize.hpp"

#include <benchmark/benchmark.h>

using namespace thinfilm;

namespace {

AtomisticModel spring_model() {
  AtomisticModel m;
  m.cell.kind = BulkKind::mass_spring;
  m.surface.kind = SurfaceKind::mass_spring;
  return m;
}

void BM_EAtom(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LatticeIndex lat(FilmConfig{1.0 / n, 3, n, n});
  const Deformation w = perturbed_identity(lat, 0.05, 1);
  const AtomisticModel m = spring_model();
  for (auto _ : state) benchmark::DoNotOptimize(e_atom(w, lat, m));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lat.cell_count()));
}
BENCHMARK(BM_EAtom)->Arg(32)->Arg(128);

void BM_EAtomGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LatticeIndex lat(FilmConfig{1.0 / n, 3, n, n});
  const Deformation w = perturbed_identity(lat, 0.05, 1);
  const AtomisticModel m = spring_model();
  for (auto _ : state) benchmark::DoNotOptimize(e_total_gradient(w, lat, m, nullptr, EnergyVariant::plain));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lat.cell_count()));
}
BENCHMARK(BM_EAtomGradient)->Arg(32)->Arg(128);

}  // namespace

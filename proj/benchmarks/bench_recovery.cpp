#include "thinfilm/recovery.hpp"

#include <benchmark/benchmark.h>

using namespace thinfilm;

namespace {

AtomisticModel spring_model() {
  AtomisticModel m;
  m.cell.kind = BulkKind::mass_spring;
  m.surface.kind = SurfaceKind::mass_spring;
  return m;
}

void BM_RecoveryEnergy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LatticeIndex lat(FilmConfig{1.0 / n, 3, n, n});
  const AtomisticModel m = spring_model();
  const LimitForms forms = LimitForms::assemble(m, HessianMethod::analytic);
  const auto field = canonical_field();
  for (auto _ : state) {
    const RecoveryMap map(*field, forms, lat, Regime::ultrathin);
    benchmark::DoNotOptimize(recovery_scaled_energy(map, m));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lat.cell_count()));
}
BENCHMARK(BM_RecoveryEnergy)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

#include <benchmark/benchmark.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mimetic/assembly.hpp"
#include "mimetic/harness.hpp"

using namespace mimetic;

namespace {

// Λ^k mass matrix on the curved grid, nodal degree 4, spans per axis from the argument.
void mass(benchmark::State& state, bool parallel) {
  CaseConfig c = default_config("manufactured");
  c.geometry = "curved-square";
  c.degree = 3;
  const auto geometry = make_geometry(c.geometry);
  const DiscreteFormSpace space(make_field_space(c, static_cast<int>(state.range(0))), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    auto m = parallel ? assemble_mass(space, *geometry) : assemble_mass_serial(space, *geometry);
    benchmark::DoNotOptimize(m.matrix.valuePtr());
  }
  state.counters["dofs"] = static_cast<double>(space.dimension());
}

void BM_MassParallel(benchmark::State& state) { mass(state, true); }
void BM_MassSerial(benchmark::State& state) { mass(state, false); }

// Element-local kernel pinned to one thread: separates the threading gain from the
// cost of the point-by-point reference.
void BM_MassParallelOneThread(benchmark::State& state) {
#ifdef _OPENMP
  const int threads = omp_get_max_threads();
  omp_set_num_threads(1);
  mass(state, true);
  omp_set_num_threads(threads);
#else
  mass(state, true);
#endif
}

}  // namespace

BENCHMARK(BM_MassParallel)->ArgsProduct({{16, 32, 64}, {0, 1, 2}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MassParallelOneThread)->ArgsProduct({{16, 32, 64}, {0, 1, 2}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MassSerial)->ArgsProduct({{16, 32}, {0, 1, 2}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "entmeas/measures.hpp"
#include "entmeas/ree_solver.hpp"

using namespace entmeas;

namespace {

ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = rng.gaussian();
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = rng.complex_gaussian();
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

void bm_hermitian_eigen(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ComplexMatrix m = random_hermitian(n, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hermitian_eigen(m));
  }
}
BENCHMARK(bm_hermitian_eigen)->Arg(4)->Arg(8);

void bm_ree_bell_diagonal(benchmark::State& state) {
  const DensityMatrix sigma = bell_diagonal(BellDiagonalSpec(0.7, 0.1, 0.1, 0.1));
  const SolverConfig cfg = SolverConfig::defaults_for({2, 2});
  for (auto _ : state) {
    benchmark::DoNotOptimize(ree(sigma, cfg));
  }
}
BENCHMARK(bm_ree_bell_diagonal)->Unit(benchmark::kMillisecond);

void bm_product_oracle(benchmark::State& state) {
  const ComplexMatrix g = random_hermitian(4, 7);
  const SolverConfig cfg = SolverConfig::defaults_for({2, 2});
  for (auto _ : state) {
    benchmark::DoNotOptimize(product_oracle(g, {2, 2}, cfg));
  }
}
BENCHMARK(bm_product_oracle);

void bm_fidelity(benchmark::State& state) {
  const DensityMatrix a = random_density({2, 2}, 5);
  const DensityMatrix b = random_density({2, 2}, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fidelity(a, b));
  }
}
BENCHMARK(bm_fidelity);

}  // namespace

BENCHMARK_MAIN();

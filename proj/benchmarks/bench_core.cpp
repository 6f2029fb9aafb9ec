#include <benchmark/benchmark.h>

#include "tsep/dilation.hpp"
#include "tsep/entanglement.hpp"
#include "tsep/generators.hpp"
#include "tsep/matcore.hpp"
#include "tsep/positivity.hpp"
#include "tsep/separability.hpp"

using namespace tsep;

static void BM_MinEigenvalue(benchmark::State& state) {
  Rng rng(1);
  const int dim = static_cast<int>(state.range(0));
  const CMatrix a = random_hermitian(dim, rng);
  for (auto _ : state) benchmark::DoNotOptimize(min_eigenvalue(a));
}
BENCHMARK(BM_MinEigenvalue)->RangeMultiplier(2)->Range(4, 64);

static void BM_CheckToeplitz(benchmark::State& state) {
  Rng rng(2);
  const BlockToeplitz t = gen_density(static_cast<int>(state.range(0)), 3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(check_toeplitz_psd(t).margin);
}
BENCHMARK(BM_CheckToeplitz)->DenseRange(2, 8, 2);

// Grid size dominates; the arg is n at p = 2.
static void BM_CheckTrigpoly(benchmark::State& state) {
  Rng rng(3);
  TrigMatrixPoly f = random_hermitian_trigpoly(static_cast<int>(state.range(0)), 2, rng);
  f.coeff(0) += 20.0 * CMatrix::Identity(2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(check_trigpoly_psd(f).margin);
}
BENCHMARK(BM_CheckTrigpoly)->DenseRange(2, 6, 2)->Unit(benchmark::kMicrosecond);

static void BM_Caratheodory(benchmark::State& state) {
  Rng rng(4);
  const int n = static_cast<int>(state.range(0));
  const BlockToeplitz t = gen_atoms(n, 1, n - 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(caratheodory_scalar(t).residual);
}
BENCHMARK(BM_Caratheodory)->DenseRange(2, 8, 2)->Unit(benchmark::kMicrosecond);

static void BM_GreedyDensity(benchmark::State& state) {
  Rng rng(5);
  const BlockToeplitz t = gen_density(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(decompose_block(t).residual);
}
BENCHMARK(BM_GreedyDensity)->ArgsProduct({{2, 3, 4}, {1, 3}})->Unit(benchmark::kMillisecond);

static void BM_Grid2d(benchmark::State& state) {
  Rng rng(6);
  BlockToeplitz x = BlockToeplitz(cplx(1e-2) * BlockToeplitz::order_unit(2, 2));
  for (int j = 0; j < 5; ++j) {
    const CMatrix mu = assemble(universal_toeplitz(2, rng.unit_complex()));
    x += BlockToeplitz(cplx(rng.uniform(0.2, 1.0)) * tensor(universal_toeplitz(2, rng.unit_complex()), mu));
  }
  for (auto _ : state) benchmark::DoNotOptimize(decompose_toeplitz_toeplitz(x).block.residual);
}
BENCHMARK(BM_Grid2d)->Unit(benchmark::kMillisecond);

static void BM_NaimarkRoundTrip(benchmark::State& state) {
  Rng rng(7);
  const BlockToeplitz t = gen_density(static_cast<int>(state.range(0)), 3, rng);
  const AtomicDecomposition dec = decompose_block(t);
  for (auto _ : state) {
    const DilationFactorization fac = naimark_from_atoms(dec);
    benchmark::DoNotOptimize(verify_factorization(t, fac).residual);
  }
}
BENCHMARK(BM_NaimarkRoundTrip)->DenseRange(2, 4);

static void BM_Witness(benchmark::State& state) {
  const TrigMatrixPoly f = universal_trigpoly(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rank_one_range_witness(f).verdict);
}
BENCHMARK(BM_Witness)->DenseRange(2, 6, 2)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();

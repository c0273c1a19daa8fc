#include <benchmark/benchmark.h>

#include "mtrsvd/kernels.hpp"
#include "mtrsvd/problems.hpp"
#include "mtrsvd/rsvd.hpp"
#include "mtrsvd/solver.hpp"

namespace {

using namespace mtrsvd;

void BM_GaussianMatrix(benchmark::State& state) {
  const Index n = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussian_matrix(n, 32, RandomSeed{42}));
  }
}
BENCHMARK(BM_GaussianMatrix)->Arg(256)->Arg(1024)->Arg(4096);

void BM_RsvdSketch(benchmark::State& state) {
  const Index n = state.range(0);
  const IllPosedProblem p = generate("gravity", n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsvd_overdetermined(p.A, 10, 9, RandomSeed{42}));
  }
}
BENCHMARK(BM_RsvdSketch)->Arg(256)->Arg(1024);

void BM_MtrsvdSolve(benchmark::State& state) {
  const Index n = state.range(0);
  const IllPosedProblem p = generate("gravity", n);
  const NoisyProblem noisy = add_noise(p, 1e-2, RandomSeed{7});
  const BandedOperator L = build_regularizer(RegKind::L1, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mtrsvd_solve(p.A, noisy.b, L, 10, 9, RandomSeed{42}));
  }
}
BENCHMARK(BM_MtrsvdSolve)->Arg(256)->Arg(1024);

void BM_ProjectedLsqr(benchmark::State& state) {
  const Index n = state.range(0);
  const IllPosedProblem p = generate("gravity", n);
  const NoisyProblem noisy = add_noise(p, 1e-2, RandomSeed{7});
  const BandedOperator L = build_regularizer(RegKind::L3, n);
  RsvdResult sketch = rsvd_overdetermined(p.A, 10, 9, RandomSeed{42});
  TrsvdApproximation approx = truncate(sketch, 10);
  Vector x_k = minimum_norm_solution(approx, noisy.b);
  LinearOperator op = projected_regularizer(L, approx.Vk);
  const Vector rhs = L.apply(x_k);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lsqr_solve(op, rhs, 1e-6));
  }
}
BENCHMARK(BM_ProjectedLsqr)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();

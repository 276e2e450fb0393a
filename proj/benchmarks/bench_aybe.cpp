#include <benchmark/benchmark.h>

#include "aybe/closed_form.hpp"
#include "aybe/geometric_construction.hpp"
#include "aybe/verifier.hpp"

namespace {

using namespace aybe;

const Complex kTau{0.3, 0.9};

void BM_Theta1(benchmark::State& state) {
  Complex z{0.21, 0.13};
  for (auto _ : state) {
    benchmark::DoNotOptimize(theta1(z, kTau));
    z += 1e-9;
  }
}
BENCHMARK(BM_Theta1);

void BM_Theta3(benchmark::State& state) {
  Complex z{0.21, 0.13};
  for (auto _ : state) {
    benchmark::DoNotOptimize(theta3(z, kTau));
    z += 1e-9;
  }
}
BENCHMARK(BM_Theta3);

void BM_KroneckerSigma(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(kronecker_sigma({0.17, 0.05}, {-0.2, 0.11}, kTau));
}
BENCHMARK(BM_KroneckerSigma);

void BM_RElliptic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const EllipticRMatrix r(SolutionParams(n, 1, kTau));
  for (auto _ : state) benchmark::DoNotOptimize(r({0.13, 0.07}, 0.1, {0.32, 0.05}));
}
BENCHMARK(BM_RElliptic)->DenseRange(2, 5);

void BM_AybeResidual(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SolutionParams p(n, 1, kTau);
  const RMatrixFunction r = EllipticRMatrix(p).as_function();
  for (auto _ : state) {
    benchmark::DoNotOptimize(aybe_residual(r, {0.11, 0.04}, {-0.07, 0.09}, 0.02, {0.21, -0.05}, {-0.14, 0.1}));
  }
}
BENCHMARK(BM_AybeResidual)->DenseRange(2, 5);

void BM_AlphaEndo(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SolutionParams p(n, 1, kTau);
  const auto method = state.range(1) == 0 ? AlphaMethod::eigenline : AlphaMethod::dense;
  for (auto _ : state) benchmark::DoNotOptimize(alpha_endo(p, {0.1, 0.05}, 0.2, {0.45, 0.03}, method));
}
BENCHMARK(BM_AlphaEndo)->ArgsProduct({{2, 3, 5}, {0, 1}});

}  // namespace

BENCHMARK_MAIN();
